#include "logrank/amplify.hpp"

#include "logrank/errors.hpp"
#include "logrank/game.hpp"
#include "logrank/util.hpp"

#include <algorithm>
#include <cmath>

namespace logrank {

Rational RectangleDistribution::total_weight() const {
    Rational t;
    for (const auto& [r, w] : support) t += w;
    return t;
}

Rational RectangleDistribution::inclusion_probability(int i, int j) const {
    Rational p;
    for (const auto& [r, w] : support)
        if (r.contains(i, j)) p += w;
    return p;
}

std::array<Rectangle, 4> four_split(const Rectangle& r, int n_rows, int n_cols) {
    std::vector<int> rows_c = complement(r.rows, n_rows);
    std::vector<int> cols_c = complement(r.cols, n_cols);
    return {Rectangle{r.rows, r.cols}, Rectangle{rows_c, r.cols}, Rectangle{r.rows, cols_c},
            Rectangle{rows_c, cols_c}};
}

namespace {

struct CellList {
    std::vector<std::pair<int, int>> plus, minus;
};

CellList split_cells(const SignMatrix& f) {
    CellList out;
    for (int i = 0; i < f.n_rows(); ++i)
        for (int j = 0; j < f.n_cols(); ++j)
            (f.at(i, j) > 0 ? out.plus : out.minus).push_back({i, j});
    return out;
}

// quantize a float weight vector to exact dyadics (num / 2^40), normalized
std::vector<Rational> quantize_normalized(const std::vector<double>& w) {
    constexpr long long kScale = 1ll << 40;
    std::vector<Rational> out(w.size());
    Rational total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0) {
            long long q = static_cast<long long>(w[i] * double(kScale) + 0.5);
            if (q > 0) {
                out[i] = Rational(q, kScale);
                total += out[i];
            }
        }
    }
    if (total.sign() <= 0) {
        Rational u(1, static_cast<long long>(w.size()));
        for (auto& x : out) x = u;
        return out;
    }
    for (auto& x : out) x /= total;
    return out;
}

}  // namespace

SeparatingBuild build_separating_distribution(const SignMatrix& f, const Rational& delta_lb,
                                              double tol, int max_iters) {
    if (f.is_constant())
        throw PreconditionError(
            "build_separating_distribution: lemma vacuous: no opposite-sign pair");
    if (delta_lb.sign() <= 0)
        throw PreconditionError("build_separating_distribution: delta_lb must be > 0");

    const CellList cells = split_cells(f);
    const Rational target = Rational(2, 3) * delta_lb - Rational::from_double(tol);

    std::vector<Rectangle> rects;
    std::vector<std::pair<int, int>> pairs;  // (index into plus, index into minus)
    // payoff[r][p] = 1[plus in R] - 1[minus in R]
    std::vector<std::vector<double>> payoff;

    auto payoff_entry = [&](const Rectangle& r, const std::pair<int, int>& pr) {
        auto [pi, mi] = pr;
        double v = 0;
        if (r.contains(cells.plus[pi].first, cells.plus[pi].second)) v += 1;
        if (r.contains(cells.minus[mi].first, cells.minus[mi].second)) v -= 1;
        return v;
    };
    auto add_rect = [&](const Rectangle& r) {
        if (std::find(rects.begin(), rects.end(), r) != rects.end()) return false;
        rects.push_back(r);
        std::vector<double> row(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) row[p] = payoff_entry(r, pairs[p]);
        payoff.push_back(std::move(row));
        return true;
    };
    auto add_pair = [&](std::pair<int, int> pr) {
        if (std::find(pairs.begin(), pairs.end(), pr) != pairs.end()) return false;
        pairs.push_back(pr);
        for (std::size_t r = 0; r < rects.size(); ++r)
            payoff[r].push_back(payoff_entry(rects[r], pr));
        return true;
    };

    pairs.push_back({0, 0});
    {
        // best response to the seed pair: any rectangle containing the +cell
        // and avoiding the -cell
        CellWeights g(f.n_rows(), f.n_cols());
        g.at(cells.plus[0].first, cells.plus[0].second) = Rational(1);
        g.at(cells.minus[0].first, cells.minus[0].second) = Rational(-1);
        add_rect(best_rectangle_signed(g).rect);
    }

    SeparatingBuild best;
    best.stats.delta_lb = delta_lb;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        ApproxGameSolution sol = solve_zero_sum_approx(payoff);

        // exact p and q for the rationalized rectangle mixture
        std::vector<Rational> rho = quantize_normalized(sol.row_mix);
        std::vector<Rational> incl(std::size_t(f.n_rows()) * f.n_cols());
        RectangleDistribution dist;
        for (std::size_t r = 0; r < rects.size(); ++r) {
            if (rho[r].sign() <= 0) continue;
            dist.support.push_back({rects[r], rho[r]});
            for (int i : rects[r].rows)
                for (int j : rects[r].cols) incl[std::size_t(i) * f.n_cols() + j] += rho[r];
        }
        std::size_t p_arg = 0, q_arg = 0;
        Rational p = incl[std::size_t(cells.plus[0].first) * f.n_cols() + cells.plus[0].second];
        for (std::size_t k = 1; k < cells.plus.size(); ++k) {
            const Rational& v =
                incl[std::size_t(cells.plus[k].first) * f.n_cols() + cells.plus[k].second];
            if (v < p) {
                p = v;
                p_arg = k;
            }
        }
        Rational q = incl[std::size_t(cells.minus[0].first) * f.n_cols() + cells.minus[0].second];
        for (std::size_t k = 1; k < cells.minus.size(); ++k) {
            const Rational& v =
                incl[std::size_t(cells.minus[k].first) * f.n_cols() + cells.minus[k].second];
            if (q < v) {
                q = v;
                q_arg = k;
            }
        }
        Rational margin = p - q;
        bool improved = best.rho.support.empty() || best.stats.margin < margin;
        if (improved) {
            best.rho = std::move(dist);
            best.stats = SeparationStats{p, q, margin, delta_lb};
            best.iterations = iter + 1;
        }
        if (best.stats.margin >= target) {
            best.converged = true;
            // Keep pushing toward the pair-game equilibrium: a larger margin
            // shrinks the intersection count t downstream, which decides
            // whether sampled intersections ever come up nonempty. Stop once
            // the margin goes stale.
            if (iter - best.iterations >= 10) break;
        }

        bool grew = add_pair({int(p_arg), int(q_arg)});

        // rectangle best response: maximize the pair-weighted hit-miss sum
        // (w indexes the pair set as of the solve, before add_pair)
        std::vector<Rational> w = quantize_normalized(sol.col_mix);
        CellWeights g(f.n_rows(), f.n_cols());
        for (std::size_t pidx = 0; pidx < w.size(); ++pidx) {
            if (w[pidx].sign() <= 0) continue;
            auto [pi, mi] = pairs[pidx];
            g.at(cells.plus[pi].first, cells.plus[pi].second) += w[pidx];
            g.at(cells.minus[mi].first, cells.minus[mi].second) -= w[pidx];
        }
        grew = add_rect(best_rectangle_signed(g).rect) || grew;
        if (!grew) break;  // exhausted both best responses
    }
    best.iterations = std::max(best.iterations, std::min(iter + 1, max_iters));

    // desk-scale support cap
    constexpr std::size_t kSupportCap = 200;
    if (best.rho.support.size() > kSupportCap) {
        std::stable_sort(best.rho.support.begin(), best.rho.support.end(),
                         [](const auto& a, const auto& b) { return b.second < a.second; });
        best.rho.support.resize(kSupportCap);
        Rational total = best.rho.total_weight();
        for (auto& [r, wt] : best.rho.support) wt /= total;
        best.support_capped = true;
        // stats must describe the capped distribution
        Rational p(1), q(0);
        bool first = true;
        for (const auto& [i, j] : cells.plus) {
            Rational v = best.rho.inclusion_probability(i, j);
            if (first || v < p) p = v;
            first = false;
        }
        for (const auto& [i, j] : cells.minus) q = std::max(q, best.rho.inclusion_probability(i, j));
        best.stats.p = p;
        best.stats.q = q;
        best.stats.margin = p - q;
        best.converged = best.stats.margin >= target;
    }
    return best;
}

int choose_t(const SeparationStats& stats, const Rational& eps) {
    if (stats.p <= stats.q) throw PreconditionError("choose_t: no separation margin");
    if (eps.sign() <= 0 || eps >= Rational(1))
        throw PreconditionError("choose_t: eps must be in (0,1)");
    if (stats.q.is_zero()) return 1;
    Rational ratio = stats.q / stats.p;
    Rational bound = eps / Rational(2);
    Rational acc = ratio;
    int t = 1;
    while (acc > bound) {
        acc *= ratio;
        ++t;
        if (t > 100000) throw ConvergenceError("choose_t: t exploded");
    }
    return t;
}

namespace {

Rectangle sample_rectangle(const RectangleDistribution& rho, SplitMix64& rng) {
    static const BigInt two64 = pow(BigInt(2), 64);
    const std::uint64_t draw = rng.next();
    Rational u(BigInt(static_cast<long long>(draw >> 1)) * BigInt(2) + BigInt(int(draw & 1)),
               two64);
    Rational acc;
    for (const auto& [r, w] : rho.support) {
        acc += w;
        if (u < acc) return r;
    }
    return rho.support.back().first;
}

Rectangle intersect(const Rectangle& a, const Rectangle& b) {
    Rectangle out;
    std::set_intersection(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(),
                          std::back_inserter(out.rows));
    std::set_intersection(a.cols.begin(), a.cols.end(), b.cols.begin(), b.cols.end(),
                          std::back_inserter(out.cols));
    return out;
}

}  // namespace

AmplifyResult amplify(const SignMatrix& f, const EntryDistribution& mu, const AmplifyOptions& opt) {
    if (opt.eps.sign() <= 0 || opt.eps >= Rational(1))
        throw PreconditionError("amplify: eps must be in (0,1)");
    if (f.n_rows() != mu.n_rows() || f.n_cols() != mu.n_cols())
        throw PreconditionError("amplify: distribution dimensions do not match matrix");

    // orient so that E_mu[f] >= 0
    Rational expectation;
    for (int i = 0; i < f.n_rows(); ++i)
        for (int j = 0; j < f.n_cols(); ++j)
            expectation += f.at(i, j) > 0 ? mu.at(i, j) : -mu.at(i, j);
    const bool flipped = expectation.sign() < 0;
    const SignMatrix work = flipped ? f.negated() : f;

    AmplifyResult out;
    out.seed = opt.seed;
    out.sign = flipped ? -1 : 1;

    if (work.is_constant()) {
        out.rect = Rectangle::full(f.n_rows(), f.n_cols());
        out.t = 1;
        out.mu_mass = Rational(1);
        out.minority_mass = Rational(0);
        out.cond_avg = Rational(out.sign);
        out.trials_used = 0;
        out.stats = SeparationStats{Rational(1), Rational(0), Rational(1), Rational(1)};
        return out;
    }

    Rational delta_lb;
    if (opt.delta_lb) {
        delta_lb = *opt.delta_lb;
    } else {
        DiscrepancyCertificate cert = disc_game(work, opt.disc_tol, opt.disc_max_iters);
        delta_lb = cert.lower;
    }
    if (delta_lb.sign() <= 0) throw PreconditionError("amplify: need a positive delta_lb");

    SeparatingBuild build = build_separating_distribution(work, delta_lb);
    if (build.stats.p <= build.stats.q)
        throw ConvergenceError("amplify: separating distribution has no margin");

    const int t = choose_t(build.stats, opt.eps);
    const Rational accept_mass = pow(build.stats.p, unsigned(t)) / Rational(4);

    out.t = t;
    out.stats = build.stats;
    out.support_capped = build.support_capped;
    out.size_floor_log2 =
        -16.0 / delta_lb.to_double() * (-(opt.eps.log2()));

    AmplifyResult best = out;
    Rational best_score;
    bool have_best = false;

    for (int trial = 0; trial < opt.max_trials; ++trial) {
        SplitMix64 rng(derive_seed(opt.seed, std::uint64_t(trial)));
        Rectangle star = sample_rectangle(build.rho, rng);
        for (int k = 1; k < t && !star.empty(); ++k)
            star = intersect(star, sample_rectangle(build.rho, rng));
        if (star.empty()) continue;

        Rational mass, minority;
        for (int i : star.rows)
            for (int j : star.cols) {
                const Rational& w = mu.at(i, j);
                mass += w;
                if (work.at(i, j) < 0) minority += w;
            }
        // score = the proof's T statistic
        Rational score = mass - minority / opt.eps;
        if (!have_best || best_score < score) {
            best.rect = star;
            best.mu_mass = mass;
            best.minority_mass = minority;
            best.cond_avg = mass.is_zero() ? Rational(0)
                                           : Rational(out.sign) * (mass - Rational(2) * minority) / mass;
            best.trials_used = trial + 1;
            best_score = score;
            have_best = true;
        }
        if (minority <= opt.eps * mass && mass >= accept_mass) {
            out.rect = std::move(star);
            out.mu_mass = std::move(mass);
            out.minority_mass = std::move(minority);
            out.cond_avg =
                Rational(out.sign) * (out.mu_mass - Rational(2) * out.minority_mass) / out.mu_mass;
            out.trials_used = trial + 1;
            return out;
        }
    }
    throw AmplifyExhausted(std::move(best));
}

}  // namespace logrank
