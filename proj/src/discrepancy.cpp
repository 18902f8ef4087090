#include "logrank/discrepancy.hpp"

#include "logrank/errors.hpp"
#include "logrank/util.hpp"
#include "logrank/rank.hpp"

#include <algorithm>
#include <cmath>

namespace logrank {

CellWeights CellWeights::mu_times_f(const SignMatrix& f, const EntryDistribution& mu) {
    if (f.n_rows() != mu.n_rows() || f.n_cols() != mu.n_cols())
        throw PreconditionError("CellWeights: dimension mismatch");
    CellWeights g(f.n_rows(), f.n_cols());
    for (int i = 0; i < f.n_rows(); ++i)
        for (int j = 0; j < f.n_cols(); ++j)
            g.at(i, j) = f.at(i, j) > 0 ? mu.at(i, j) : -mu.at(i, j);
    return g;
}

namespace {

const int kEnumCap = cap_from_env("LOGRANK_ENUM_CAP", 24);

// Weights over a common denominator so the enumeration runs on integers.
struct IntGrid {
    int n, m;
    BigInt den;
    std::vector<BigInt> num;  // row-major

    explicit IntGrid(const CellWeights& g) : n(g.n_rows), m(g.n_cols), den(1) {
        for (const Rational& v : g.w) den = BigInt::div_exact(den * v.den(), gcd(den, v.den()));
        num.resize(g.w.size());
        for (std::size_t i = 0; i < g.w.size(); ++i)
            num[i] = g.w[i].num() * BigInt::div_exact(den, g.w[i].den());
    }
};

struct Candidate {
    BigInt value;  // numerator over the grid's denominator, >= 0 for abs mode
    Rectangle rect;
    int sign = 1;
    bool valid = false;
};

// candidate ordering: larger value wins; ties prefer the smaller row set
// (fewest rows, then lexicographic), then the smaller column set, then sign
// +1 -- so a lone positive cell beats its paddings with zero-sum rows
bool improves(const Candidate& cand, const Candidate& best) {
    if (!best.valid) return true;
    if (cand.value != best.value) return best.value < cand.value;
    if (cand.rect.rows != best.rect.rows) {
        if (cand.rect.rows.size() != best.rect.rows.size())
            return cand.rect.rows.size() < best.rect.rows.size();
        return lex_less(cand.rect.rows, best.rect.rows);
    }
    if (cand.rect.cols != best.rect.cols) {
        if (cand.rect.cols.size() != best.rect.cols.size())
            return cand.rect.cols.size() < best.rect.cols.size();
        return lex_less(cand.rect.cols, best.rect.cols);
    }
    return cand.sign > best.sign;
}

BigInt bigint_from_i128(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 m = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    BigInt out = BigInt(static_cast<long long>(m >> 64));
    out = out * pow(BigInt(2), 64) + BigInt(static_cast<long long>(std::uint64_t(m) >> 1)) * BigInt(2) +
          BigInt(int(m & 1));
    return neg ? out.negate() : out;
}

// Enumerates subsets of the row side of `grid` (callers transpose as needed).
// For each subset and sign s, the optimal closure takes the columns with
// strictly s-positive column sums. `transposed` flips the rect back into the
// caller's orientation before tie-breaking.
Candidate enumerate_side(const IntGrid& grid, bool use_abs, bool transposed) {
    int k = grid.n, l = grid.m;
    std::vector<BigInt> colsum(l);

    Candidate best;
    std::uint64_t total = 1ull << k;
    std::uint64_t cur_mask = 0;
    for (std::uint64_t i = 1; i < total; ++i) {
        int bit = __builtin_ctzll(i);
        bool added = !(cur_mask >> bit & 1);
        cur_mask ^= 1ull << bit;
        const BigInt* row = &grid.num[std::size_t(bit) * l];
        if (added) {
            for (int j = 0; j < l; ++j) colsum[j] += row[j];
        } else {
            for (int j = 0; j < l; ++j) colsum[j] -= row[j];
        }

        for (int s = 0; s < (use_abs ? 2 : 1); ++s) {
            int sign = s == 0 ? 1 : -1;
            BigInt val;
            bool any = false;
            for (int j = 0; j < l; ++j) {
                int sg = colsum[j].sign();
                if (sign > 0 ? sg > 0 : sg < 0) {
                    any = true;
                    if (sign > 0) {
                        val += colsum[j];
                    } else {
                        val -= colsum[j];
                    }
                }
            }
            if (!any) continue;
            if (best.valid && val < best.value) continue;
            Candidate cand;
            cand.value = std::move(val);
            cand.sign = sign;
            std::vector<int> a = mask_to_indices(cur_mask);
            std::vector<int> b;
            for (int j = 0; j < l; ++j) {
                int sg = colsum[j].sign();
                if (sign > 0 ? sg > 0 : sg < 0) b.push_back(j);
            }
            if (transposed) std::swap(a, b);
            cand.rect = Rectangle{std::move(a), std::move(b)};
            cand.valid = true;
            if (improves(cand, best)) best = std::move(cand);
        }
    }
    return best;
}

// Same loop over native 128-bit integers; used whenever the numerators are
// small enough that no intermediate sum can overflow. This is the hot path:
// the double-oracle rounds call it with dyadic weights.
Candidate enumerate_side_i128(const IntGrid& grid, bool use_abs, bool transposed) {
    int k = grid.n, l = grid.m;
    std::vector<__int128> num(grid.num.size());
    for (std::size_t i = 0; i < num.size(); ++i)
        num[i] = static_cast<__int128>(grid.num[i].to_int64());
    std::vector<__int128> colsum(l, 0);

    __int128 best_val = 0;
    std::uint64_t best_mask = 0;
    int best_sign = 0;
    Candidate best;

    std::uint64_t total = 1ull << k;
    std::uint64_t cur_mask = 0;
    for (std::uint64_t i = 1; i < total; ++i) {
        int bit = __builtin_ctzll(i);
        bool added = !(cur_mask >> bit & 1);
        cur_mask ^= 1ull << bit;
        const __int128* row = &num[std::size_t(bit) * l];
        if (added) {
            for (int j = 0; j < l; ++j) colsum[j] += row[j];
        } else {
            for (int j = 0; j < l; ++j) colsum[j] -= row[j];
        }

        for (int s = 0; s < (use_abs ? 2 : 1); ++s) {
            int sign = s == 0 ? 1 : -1;
            __int128 val = 0;
            bool any = false;
            for (int j = 0; j < l; ++j) {
                __int128 c = colsum[j];
                if (sign > 0 ? c > 0 : c < 0) {
                    any = true;
                    val += sign > 0 ? c : -c;
                }
            }
            if (!any) continue;
            if (best_sign != 0 && val < best_val) continue;
            // build the rectangle only for potential winners
            Candidate cand;
            cand.value = bigint_from_i128(val);
            cand.sign = sign;
            std::vector<int> a = mask_to_indices(cur_mask);
            std::vector<int> b;
            for (int j = 0; j < l; ++j) {
                __int128 c = colsum[j];
                if (sign > 0 ? c > 0 : c < 0) b.push_back(j);
            }
            if (transposed) std::swap(a, b);
            cand.rect = Rectangle{std::move(a), std::move(b)};
            cand.valid = true;
            if (improves(cand, best)) {
                best = std::move(cand);
                best_val = val;
                best_mask = cur_mask;
                best_sign = sign;
            }
        }
    }
    (void)best_mask;
    return best;
}

// best single cell (fallback when every closure is empty in signed mode);
// emits the cell in the caller's orientation
Candidate best_single_cell(const IntGrid& grid, bool use_abs, bool transposed) {
    Candidate best;
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.m; ++j) {
            const BigInt& v = grid.num[std::size_t(i) * grid.m + j];
            Candidate cand;
            cand.sign = (use_abs && v.sign() < 0) ? -1 : 1;
            cand.value = use_abs ? v.abs() : v;
            cand.rect = transposed ? Rectangle{{j}, {i}} : Rectangle{{i}, {j}};
            cand.valid = true;
            if (improves(cand, best)) best = std::move(cand);
        }
    }
    return best;
}

RectSearchResult best_rect_impl(const CellWeights& g, bool use_abs) {
    if (g.n_rows < 1 || g.n_cols < 1) throw PreconditionError("best_rectangle: empty grid");
    if (std::min(g.n_rows, g.n_cols) > kEnumCap)
        throw CapError("best_rectangle: min dimension exceeds the enumeration cap (24); "
                       "use the heuristic mode");

    bool transpose = g.n_rows > g.n_cols;
    CellWeights gt;
    const CellWeights* base = &g;
    if (transpose) {
        gt = CellWeights(g.n_cols, g.n_rows);
        for (int i = 0; i < g.n_rows; ++i)
            for (int j = 0; j < g.n_cols; ++j) gt.at(j, i) = g.at(i, j);
        base = &gt;
    }
    IntGrid grid(*base);
    bool fits_native = true;
    for (const BigInt& v : grid.num)
        if (v.bit_length() > 62) {
            fits_native = false;
            break;
        }
    Candidate best = fits_native ? enumerate_side_i128(grid, use_abs, transpose)
                                 : enumerate_side(grid, use_abs, transpose);
    if (!use_abs) {
        // closures only see positive sums; a nonempty rectangle must still be
        // returned when everything is <= 0
        Candidate cell = best_single_cell(grid, false, transpose);
        if (improves(cell, best)) best = std::move(cell);
    }
    if (!best.valid || (use_abs && best.value.is_zero())) {
        // all-zero weights: every rectangle has value 0
        return RectSearchResult{Rectangle{{0}, {0}}, Rational(0), 1};
    }
    return RectSearchResult{best.rect, Rational(best.value, grid.den), best.sign};
}

}  // namespace

RectSearchResult best_rectangle(const CellWeights& g) { return best_rect_impl(g, true); }
RectSearchResult best_rectangle_signed(const CellWeights& g) { return best_rect_impl(g, false); }

RectSearchResult best_rectangle_heuristic(const CellWeights& g) {
    if (g.n_rows < 1 || g.n_cols < 1) throw PreconditionError("best_rectangle: empty grid");
    RectSearchResult best{Rectangle{{0}, {0}}, g.at(0, 0).abs(), g.at(0, 0).sign() < 0 ? -1 : 1};
    for (int s : {1, -1}) {
        // seed with the best single row for this sign, then alternate closures
        std::vector<int> rows, cols;
        {
            Rational best_row_val;
            int best_row = 0;
            for (int i = 0; i < g.n_rows; ++i) {
                Rational v;
                for (int j = 0; j < g.n_cols; ++j) {
                    const Rational& x = g.at(i, j);
                    if ((s > 0 && x.sign() > 0) || (s < 0 && x.sign() < 0)) v += x.abs();
                }
                if (i == 0 || best_row_val < v) {
                    best_row_val = v;
                    best_row = i;
                }
            }
            rows = {best_row};
        }
        Rational val;
        for (int round = 0; round < 32; ++round) {
            std::vector<int> new_cols;
            for (int j = 0; j < g.n_cols; ++j) {
                Rational cs;
                for (int i : rows) cs += g.at(i, j);
                if ((s > 0 && cs.sign() > 0) || (s < 0 && cs.sign() < 0)) new_cols.push_back(j);
            }
            if (new_cols.empty()) break;
            std::vector<int> new_rows;
            Rational new_val;
            for (int i = 0; i < g.n_rows; ++i) {
                Rational rs;
                for (int j : new_cols) rs += g.at(i, j);
                if ((s > 0 && rs.sign() > 0) || (s < 0 && rs.sign() < 0)) {
                    new_rows.push_back(i);
                    new_val += rs.abs();
                }
            }
            if (new_rows.empty()) break;
            bool stable = new_rows == rows && new_cols == cols;
            rows = std::move(new_rows);
            cols = std::move(new_cols);
            val = new_val;
            if (stable) break;
        }
        if (!cols.empty() && best.value < val) best = RectSearchResult{Rectangle{rows, cols}, val, s};
    }
    return best;
}

DiscUnderResult disc_under(const SignMatrix& f, const EntryDistribution& mu) {
    RectSearchResult r = best_rectangle(CellWeights::mu_times_f(f, mu));
    return DiscUnderResult{r.value, SignedRectangle{r.rect, r.sign}};
}

namespace {

// payoff of a signed rectangle against one cell
inline Rational strategy_payoff(const SignedRectangle& s, const SignMatrix& f, int i, int j) {
    if (!s.rect.contains(i, j)) return Rational(0);
    return Rational(s.sign * f.at(i, j));
}

// One-line sign pieces of a row or column: the monochromatic fragments that
// together cover every cell with positive payoff. They give the restricted
// game a meaningful value from round one.
std::vector<SignedRectangle> seed_strategies(const SignMatrix& f) {
    std::vector<SignedRectangle> seeds;
    for (int i = 0; i < f.n_rows(); ++i) {
        for (int sign : {1, -1}) {
            std::vector<int> cols;
            for (int j = 0; j < f.n_cols(); ++j)
                if (f.at(i, j) == sign) cols.push_back(j);
            if (!cols.empty()) seeds.push_back(SignedRectangle{Rectangle{{i}, cols}, sign});
        }
    }
    for (int j = 0; j < f.n_cols(); ++j) {
        for (int sign : {1, -1}) {
            std::vector<int> rows;
            for (int i = 0; i < f.n_rows(); ++i)
                if (f.at(i, j) == sign) rows.push_back(i);
            if (!rows.empty()) seeds.push_back(SignedRectangle{Rectangle{rows, {j}}, sign});
        }
    }
    return seeds;
}

// Snap float weights to a 2^-40 grid: exact dyadics with small numerators,
// so the downstream exact arithmetic stays in native integers. The rounding
// only perturbs which distribution we certify, never the certificate itself.
struct QuantizedWeights {
    std::vector<Rational> raw;  // unnormalized, each num/2^40
    Rational total;
};

QuantizedWeights quantize_weights(const std::vector<double>& w) {
    constexpr long long kScale = 1ll << 40;
    QuantizedWeights out;
    out.raw.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0) {
            long long q = static_cast<long long>(w[i] * double(kScale) + 0.5);
            if (q > 0) {
                out.raw[i] = Rational(q, kScale);
                out.total += out.raw[i];
            }
        }
    }
    if (out.total.sign() <= 0) {
        Rational u(1, static_cast<long long>(w.size()));
        for (auto& x : out.raw) x = u;
        out.total = Rational(1);
    }
    return out;
}

std::vector<Rational> normalize_weights(const QuantizedWeights& q) {
    std::vector<Rational> out = q.raw;
    for (auto& x : out) x /= q.total;
    return out;
}

struct BoundsTracker {
    Rational lower;
    std::vector<DualAtom> dual;
    bool have_lower = false;

    Rational upper;
    EntryDistribution mu;
    SignedRectangle witness;
    bool have_upper = false;

    void offer_lower(const Rational& cand, std::vector<DualAtom> rho) {
        if (!have_lower || lower < cand) {
            lower = cand;
            dual = std::move(rho);
            have_lower = true;
        }
    }
    void offer_upper(const Rational& cand, EntryDistribution m, SignedRectangle w) {
        if (!have_upper || cand < upper) {
            upper = cand;
            mu = std::move(m);
            witness = std::move(w);
            have_upper = true;
        }
    }
    [[nodiscard]] Rational gap() const { return upper - lower; }
};

}  // namespace

DiscrepancyCertificate disc_game(const SignMatrix& f, double tol, int max_iters) {
    if (tol <= 0) throw PreconditionError("disc_game: tol must be > 0");
    const int cells = f.n_rows() * f.n_cols();
    const Rational tol_r = Rational::from_double(tol);

    std::vector<SignedRectangle> strategies = seed_strategies(f);
    std::vector<std::vector<double>> payoff;  // strategies x cells, floats for the inner LP
    auto payoff_row = [&](const SignedRectangle& s) {
        std::vector<double> row(cells, 0.0);
        for (int i : s.rect.rows)
            for (int j : s.rect.cols)
                row[std::size_t(i) * f.n_cols() + j] = double(s.sign * f.at(i, j));
        return row;
    };
    for (const auto& s : strategies) payoff.push_back(payoff_row(s));

    // exact lower bound for a rationalized maximizer mixture; rho indexes the
    // strategy list as of the latest solve
    auto exact_lower = [&](const std::vector<Rational>& rho) {
        std::vector<Rational> col(cells);
        std::vector<DualAtom> atoms;
        for (std::size_t s = 0; s < rho.size() && s < strategies.size(); ++s) {
            if (rho[s].sign() <= 0) continue;
            atoms.push_back(DualAtom{strategies[s], rho[s]});
            const auto& sr = strategies[s];
            for (int i : sr.rect.rows)
                for (int j : sr.rect.cols) {
                    std::size_t c = std::size_t(i) * f.n_cols() + j;
                    if (sr.sign * f.at(i, j) > 0) {
                        col[c] += rho[s];
                    } else {
                        col[c] -= rho[s];
                    }
                }
        }
        Rational lo = col[0];
        for (int c = 1; c < cells; ++c) lo = std::min(lo, col[c]);
        return std::pair(lo, std::move(atoms));
    };

    // exact best response against arbitrary nonnegative dyadic weights; one
    // scale division at the end keeps the enumeration on native integers
    auto quantized_br = [&](const QuantizedWeights& q) {
        CellWeights g(f.n_rows(), f.n_cols());
        for (int i = 0; i < f.n_rows(); ++i)
            for (int j = 0; j < f.n_cols(); ++j)
                g.at(i, j) = f.at(i, j) > 0 ? q.raw[std::size_t(i) * f.n_cols() + j]
                                            : -q.raw[std::size_t(i) * f.n_cols() + j];
        RectSearchResult r = best_rectangle(g);
        return DiscUnderResult{r.value / q.total, SignedRectangle{r.rect, r.sign}};
    };

    BoundsTracker bounds;
    int iter = 0;
    // stability center for in-out cuts: the mu with the best upper bound so
    // far; plain vertex-cut column generation zigzags and closes the last
    // digits painfully slowly
    std::vector<double> center(std::size_t(cells), 1.0 / double(cells));

    auto offer_mu = [&](const std::vector<double>& w) {
        QuantizedWeights q = quantize_weights(w);
        DiscUnderResult br = quantized_br(q);
        if (!bounds.have_upper || br.value < bounds.upper) {
            EntryDistribution mu(f.n_rows(), f.n_cols(), normalize_weights(q));
            bounds.offer_upper(br.value, std::move(mu), br.witness);
            center = w;
        }
        bool added = false;
        if (std::find(strategies.begin(), strategies.end(), br.witness) == strategies.end()) {
            strategies.push_back(br.witness);
            payoff.push_back(payoff_row(br.witness));
            added = true;
        }
        return added;
    };

    for (; iter < max_iters; ++iter) {
        ApproxGameSolution sol = solve_zero_sum_approx(payoff);

        auto [lo, atoms] = exact_lower(normalize_weights(quantize_weights(sol.row_mix)));
        bounds.offer_lower(lo, std::move(atoms));

        bool added = offer_mu(sol.col_mix);
        if (bounds.gap() <= tol_r) break;

        for (double alpha : {0.5, 0.25}) {
            std::vector<double> mid(static_cast<std::size_t>(cells));
            for (int c = 0; c < cells; ++c)
                mid[c] = (1.0 - alpha) * center[c] + alpha * sol.col_mix[c];
            added = offer_mu(mid) || added;
            if (bounds.gap() <= tol_r) break;
        }
        if (bounds.gap() <= tol_r) break;

        if (!added) {
            // Stalled: probe best responses against uniform-smoothed centers
            // before giving up.
            bool rescued = false;
            for (double alpha : {0.5, 0.25, 0.75}) {
                std::vector<double> w(static_cast<std::size_t>(cells));
                for (int c = 0; c < cells; ++c)
                    w[c] = (1.0 - alpha) * center[c] + alpha / double(cells);
                if (offer_mu(w)) {
                    rescued = true;
                    break;
                }
            }
            if (!rescued) break;  // no improving response found: bounds are final
        }
        if (bounds.gap() <= tol_r) break;

        // keep the restricted game near its equilibrium support so the inner
        // LP stays small and numerically clean
        if (strategies.size() > std::size_t(cells) + 80) {
            std::vector<SignedRectangle> ns;
            std::vector<std::vector<double>> np;
            std::size_t recent_from = strategies.size() - 40;
            for (std::size_t s = 0; s < strategies.size(); ++s) {
                bool in_support = s < sol.row_mix.size() && sol.row_mix[s] > 1e-12;
                if (in_support || s >= recent_from) {
                    ns.push_back(std::move(strategies[s]));
                    np.push_back(std::move(payoff[s]));
                }
            }
            strategies = std::move(ns);
            payoff = std::move(np);
        }
    }

    DiscrepancyCertificate cert;
    cert.lower = bounds.lower;
    cert.upper = bounds.upper;
    cert.argmin_mu = bounds.mu;
    cert.witness = bounds.witness;
    cert.dual = bounds.dual;
    cert.iterations = std::min(iter + 1, max_iters);
    cert.converged = bounds.gap() <= tol_r;
    return cert;
}

bool verify_certificate(const SignMatrix& f, const DiscrepancyCertificate& cert) {
    // dual mixture pays at least `lower` on every cell
    for (int i = 0; i < f.n_rows(); ++i) {
        for (int j = 0; j < f.n_cols(); ++j) {
            Rational v;
            for (const DualAtom& a : cert.dual) v += a.weight * strategy_payoff(a.strategy, f, i, j);
            if (v < cert.lower) return false;
        }
    }
    // upper is realized by argmin_mu
    DiscUnderResult br = disc_under(f, cert.argmin_mu);
    if (br.value != cert.upper) return false;
    // the witness itself achieves upper
    Rational w;
    for (int i : cert.witness.rect.rows)
        for (int j : cert.witness.rect.cols)
            w += Rational(cert.witness.sign * f.at(i, j)) * cert.argmin_mu.at(i, j);
    return w == cert.upper;
}

DiscBoundReport check_rank_disc_bound(const SignMatrix& f, double tol, int max_iters) {
    DiscBoundReport rep;
    rep.rank = rank_exact(f);
    rep.cert = disc_game(f, tol, max_iters);
    rep.bound = 1.0 / (8.0 * std::sqrt(double(rep.rank)));
    rep.upper_ge_bound = rep.cert.upper.to_double() >= rep.bound - 1e-12;
    return rep;
}

}  // namespace logrank
