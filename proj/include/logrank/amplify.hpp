#pragma once

#include "logrank/discrepancy.hpp"
#include "logrank/errors.hpp"
#include "logrank/matrix.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace logrank {

/// Finitely supported distribution over rectangles.
struct RectangleDistribution {
    std::vector<std::pair<Rectangle, Rational>> support;  // weights sum to 1

    [[nodiscard]] Rational total_weight() const;
    /// Pr_{R ~ rho}[(i,j) in R], exact.
    [[nodiscard]] Rational inclusion_probability(int i, int j) const;
};

struct SeparationStats {
    Rational p;       // minimal inclusion probability over +1 cells
    Rational q;       // maximal inclusion probability over -1 cells
    Rational margin;  // p - q
    Rational delta_lb;
};

struct SeparatingBuild {
    RectangleDistribution rho;
    SeparationStats stats;
    bool converged = false;  // margin >= (2/3) delta_lb - tol reached
    int iterations = 0;
    bool support_capped = false;
};

/// The four rectangles A x B, A' x B, A x B', A' x B' induced by R = A x B
/// inside the ambient grid (complements taken per side). Members may be
/// empty.
[[nodiscard]] std::array<Rectangle, 4> four_split(const Rectangle& r, int n_rows, int n_cols);

/// Builds a rectangle distribution separating +1 cells from -1 cells:
///   min over (+cell, -cell) pairs of Pr[+cell in R] - Pr[-cell in R]
///     >= (2/3) delta_lb - tol.
/// Double oracle between rectangles and cell pairs; the rectangle best
/// response reuses the signed closure enumeration. Throws PreconditionError
/// for constant matrices (no opposite-sign pair exists).
[[nodiscard]] SeparatingBuild build_separating_distribution(const SignMatrix& f,
                                                            const Rational& delta_lb,
                                                            double tol = 1e-5,
                                                            int max_iters = 400);

/// Smallest t >= 1 with (q/p)^t <= eps/2 (t = 1 when q = 0).
[[nodiscard]] int choose_t(const SeparationStats& stats, const Rational& eps);

struct AmplifyOptions {
    Rational eps = Rational(1, 4);
    std::uint64_t seed = 0;
    int max_trials = 1000;
    /// Certified lower bound on disc(f); when absent amplify runs disc_game.
    std::optional<Rational> delta_lb;
    double disc_tol = 1e-4;
    int disc_max_iters = 500;
};

struct AmplifyResult {
    std::uint64_t seed = 0;  // echoed from the options for reproducibility
    Rectangle rect;
    int t = 1;
    Rational mu_mass;        // mu(R*)
    Rational minority_mass;  // mu(R* cap wrong-sign cells)
    Rational cond_avg;       // E_mu[f | R*], sign-corrected
    int trials_used = 0;
    int sign = 1;  // majority sign of the returned rectangle
    SeparationStats stats;
    bool support_capped = false;
    double size_floor_log2 = 0;  // -16 log2(1/eps) / delta_lb
};

/// Thrown when no trial passes both acceptance tests; carries the best
/// rectangle seen.
struct AmplifyExhausted : ConvergenceError {
    AmplifyResult best;
    explicit AmplifyExhausted(AmplifyResult b)
        : ConvergenceError("amplify: max_trials exhausted"), best(std::move(b)) {}
};

/// Lemma-style amplification: orient so E_mu[f] >= 0 (else run on -f and
/// flip the reported sign), build the separating distribution, pick t,
/// intersect t i.i.d. samples, and accept when
///   minority_mass <= eps * mu_mass   and   mu_mass >= p^t / 4.
/// Deterministic in (seed, trial index).
[[nodiscard]] AmplifyResult amplify(const SignMatrix& f, const EntryDistribution& mu,
                                    const AmplifyOptions& opt);

}  // namespace logrank
