#include "logrank/game.hpp"

#include "logrank/errors.hpp"

#include <algorithm>
#include <cmath>

namespace logrank {

namespace {

struct RationalOps {
    using Value = Rational;
    static constexpr bool kBland = true;  // exact arithmetic: Bland guarantees termination
    static bool negative(const Rational& v) { return v.sign() < 0; }
    static bool positive(const Rational& v) { return v.sign() > 0; }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static double approx(const Rational& v) { return v.to_double(); }
};

// pivot tolerance keeps degenerate float pivots from looping on noise
struct DoubleOps {
    using Value = double;
    static constexpr bool kBland = false;  // Dantzig + stable ratio tie-breaks
    static bool negative(double v) { return v < -1e-9; }
    static bool positive(double v) { return v > 1e-9; }
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double approx(double v) { return v; }
};

// Dense tableau simplex for: max 1^T y  s.t.  B y <= 1, y >= 0, with B > 0.
// This is the classic minimizer-side program of a positive game: at the
// optimum 1^T y = 1/w where w is the shifted game value, y/1^T y is the
// minimizer's mixture, and the slack reduced costs give the maximizer's.
template <typename Ops>
struct GameLp {
    using T = typename Ops::Value;
    int m, n;  // m constraints (maximizer strategies), n variables (minimizer strategies)
    std::vector<std::vector<T>> t;  // (m+1) x (n+m+1)
    std::vector<int> basis;         // basis[i] = variable index basic in row i

    // rhs_perturb > 0 staggers the all-ones rhs to break degenerate ties
    explicit GameLp(const std::vector<std::vector<T>>& b, double rhs_perturb = 0)
        : m(int(b.size())), n(int(b[0].size())), t(m + 1), basis(m) {
        for (int i = 0; i < m; ++i) {
            t[i].assign(n + m + 1, Ops::zero());
            for (int j = 0; j < n; ++j) t[i][j] = b[i][j];
            t[i][n + i] = Ops::one();
            t[i][n + m] = Ops::one();
            if constexpr (!Ops::kBland)
                if (rhs_perturb > 0) t[i][n + m] = 1.0 + rhs_perturb * double(i + 1);
            basis[i] = n + i;
        }
        t[m].assign(n + m + 1, Ops::zero());
        for (int j = 0; j < n; ++j) t[m][j] = -Ops::one();
    }

    void pivot(int row, int col) {
        T inv = Ops::one() / t[row][col];
        for (auto& x : t[row]) x *= inv;
        t[row][col] = Ops::one();
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            T f = t[i][col];
            if (!Ops::positive(f) && !Ops::negative(f)) continue;
            for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
            t[i][col] = Ops::zero();
        }
        basis[row] = col;
    }

    void solve() {
        const long pivot_cap = 60l * (m + n) + 5000;
        for (long iter = 0;; ++iter) {
            if (iter > pivot_cap) throw ConvergenceError("game LP: pivot limit exceeded");
            int col = -1;
            if constexpr (Ops::kBland) {
                // Bland: smallest index with negative reduced cost
                for (int j = 0; j < n + m; ++j)
                    if (Ops::negative(t[m][j])) {
                        col = j;
                        break;
                    }
            } else {
                // Dantzig: most negative reduced cost
                T most = Ops::zero();
                for (int j = 0; j < n + m; ++j)
                    if (t[m][j] < most) {
                        most = t[m][j];
                        col = j;
                    }
                if (col >= 0 && !Ops::negative(t[m][col])) col = -1;
            }
            if (col < 0) return;  // optimal

            int row = -1;
            T best{};
            if constexpr (Ops::kBland) {
                // ratio test; tie-break on smallest basis variable index
                for (int i = 0; i < m; ++i) {
                    if (!Ops::positive(t[i][col])) continue;
                    T ratio = t[i][n + m] / t[i][col];
                    if (row < 0 || ratio < best || (ratio == best && basis[i] < basis[row])) {
                        row = i;
                        best = ratio;
                    }
                }
            } else {
                // ratio test; among near-minimal ratios take the largest
                // pivot element for numerical stability
                for (int i = 0; i < m; ++i) {
                    if (!Ops::positive(t[i][col])) continue;
                    T ratio = t[i][n + m] / t[i][col];
                    if (row < 0 || ratio < best - 1e-12) {
                        row = i;
                        best = ratio;
                    } else if (ratio <= best + 1e-12 &&
                               Ops::approx(t[i][col]) > Ops::approx(t[row][col])) {
                        row = i;
                        best = std::min(best, ratio);
                    }
                }
            }
            if (row < 0) throw ConvergenceError("game LP: unbounded (payoffs not shifted?)");
            pivot(row, col);
        }
    }

    // Rebuild the tableau in a given basis by eliminating from scratch; drops
    // the rounding drift a long pivot path accumulates. Returns false when
    // the requested basis is (numerically) singular.
    bool restore_basis(const std::vector<int>& wanted, const std::vector<std::vector<T>>& b) {
        *this = GameLp(b);
        std::vector<bool> row_done(m, false);
        for (int target : wanted) {
            int best_row = -1;
            double best_mag = 0;
            for (int i = 0; i < m; ++i) {
                if (row_done[i]) continue;
                double mag = std::fabs(double(t[i][target]));
                if (mag > best_mag) {
                    best_mag = mag;
                    best_row = i;
                }
            }
            if (best_row < 0 || best_mag < 1e-9) return false;
            pivot(best_row, target);
            row_done[best_row] = true;
        }
        return true;
    }
};

}  // namespace

GameSolution solve_zero_sum(const std::vector<std::vector<Rational>>& payoff) {
    if (payoff.empty() || payoff[0].empty())
        throw PreconditionError("solve_zero_sum: empty strategy set");
    int m = int(payoff.size()), n = int(payoff[0].size());
    for (const auto& row : payoff)
        if (int(row.size()) != n) throw PreconditionError("solve_zero_sum: ragged payoff matrix");

    // keep the constraint side (and with it the simplex basis) small: the
    // rational tableau's cost grows quickly with the basis size
    if (m > n) {
        std::vector<std::vector<Rational>> neg_t(n, std::vector<Rational>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) neg_t[j][i] = -payoff[i][j];
        GameSolution sw = solve_zero_sum(neg_t);
        return GameSolution{-sw.value, std::move(sw.col_mix), std::move(sw.row_mix)};
    }

    // shift to a strictly positive game
    Rational lo = payoff[0][0];
    for (const auto& row : payoff)
        for (const auto& v : row) lo = std::min(lo, v);
    Rational shift = Rational(1) - lo;

    std::vector<std::vector<Rational>> b(m, std::vector<Rational>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = payoff[i][j] + shift;

    GameLp<RationalOps> lp(b);
    lp.solve();

    Rational inv_w = lp.t[m][n + m];  // optimal 1^T y = 1/w > 0
    GameSolution out;
    out.value = Rational(1) / inv_w - shift;
    out.col_mix.assign(n, Rational(0));
    for (int i = 0; i < m; ++i)
        if (lp.basis[i] < n) out.col_mix[lp.basis[i]] = lp.t[i][n + m] / inv_w;
    out.row_mix.assign(m, Rational(0));
    for (int i = 0; i < m; ++i) out.row_mix[i] = lp.t[m][n + i] / inv_w;
    return out;
}

ApproxGameSolution solve_zero_sum_approx(const std::vector<std::vector<double>>& payoff) {
    if (payoff.empty() || payoff[0].empty())
        throw PreconditionError("solve_zero_sum_approx: empty strategy set");
    int m = int(payoff.size()), n = int(payoff[0].size());

    double lo = payoff[0][0];
    for (const auto& row : payoff)
        for (double v : row) lo = std::min(lo, v);
    double shift = 1.0 - lo;

    std::vector<std::vector<double>> b(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = payoff[i][j] + shift;

    auto extract = [&](GameLp<DoubleOps>& lp) {
        double inv_w = lp.t[m][n + m];
        ApproxGameSolution out;
        out.value = 1.0 / inv_w - shift;
        out.col_mix.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (lp.basis[i] < n) out.col_mix[lp.basis[i]] = lp.t[i][n + m] / inv_w;
        out.row_mix.assign(m, 0.0);
        for (int i = 0; i < m; ++i) out.row_mix[i] = lp.t[m][n + i] / inv_w;
        return out;
    };
    auto residual = [&](const ApproxGameSolution& s) {
        // equilibrium slack against the original payoff; positive means the
        // tableau drifted from the true solution
        double worst = 0;
        for (int i = 0; i < m; ++i) {
            double v = 0;
            for (int j = 0; j < n; ++j) v += payoff[i][j] * s.col_mix[j];
            worst = std::max(worst, v - s.value);
        }
        for (int j = 0; j < n; ++j) {
            double v = 0;
            for (int i = 0; i < m; ++i) v += payoff[i][j] * s.row_mix[i];
            worst = std::max(worst, s.value - v);
        }
        return worst;
    };

    // escalating rhs perturbation breaks the degenerate cycling that float
    // thresholds can cause; the basis-restore pass clears accumulated drift
    const double perturbs[] = {0.0, 1e-9, 1e-7, 1e-5};
    for (double eps : perturbs) {
        GameLp<DoubleOps> lp(b, eps);
        try {
            lp.solve();
            ApproxGameSolution out = extract(lp);
            for (int repair = 0; repair < 2 && residual(out) > 1e-9; ++repair) {
                std::vector<int> wanted = lp.basis;
                if (!lp.restore_basis(wanted, b)) lp = GameLp<DoubleOps>(b, eps);
                lp.solve();
                out = extract(lp);
            }
            if (residual(out) <= 1e-7 || eps == perturbs[3]) return out;
        } catch (const ConvergenceError&) {
            if (eps == perturbs[3]) throw;
        }
    }
    throw ConvergenceError("game LP: unable to stabilize");
}

}  // namespace logrank
