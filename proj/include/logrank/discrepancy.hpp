#pragma once

#include "logrank/game.hpp"
#include "logrank/matrix.hpp"

#include <vector>

namespace logrank {

/// Per-cell real weights (exact rationals) for the rectangle search.
struct CellWeights {
    int n_rows = 0, n_cols = 0;
    std::vector<Rational> w;  // row-major

    CellWeights() = default;
    CellWeights(int n, int m) : n_rows(n), n_cols(m), w(std::size_t(n) * m) {}
    [[nodiscard]] const Rational& at(int i, int j) const {
        return w[std::size_t(i) * n_cols + j];
    }
    Rational& at(int i, int j) { return w[std::size_t(i) * n_cols + j]; }

    /// g(x,y) = mu(x,y) * f(x,y).
    [[nodiscard]] static CellWeights mu_times_f(const SignMatrix& f, const EntryDistribution& mu);
};

struct RectSearchResult {
    Rectangle rect;
    Rational value;
    int sign = 1;  // the sign s under which rect achieves |value|
};

/// Exact maximizer of |sum of g over R| over all rectangles. Enumerates
/// subsets of the smaller dimension (Gray-code incremental column sums); for
/// a fixed side and sign the optimal closure keeps exactly the strictly
/// sign-agreeing lines. Ties break to the lexicographically smallest row set,
/// then column set, then sign +1. Cap: min dimension <= 24.
[[nodiscard]] RectSearchResult best_rectangle(const CellWeights& g);

/// Same enumeration without the absolute value: maximizes the plain sum over
/// nonempty rectangles (the best-response oracle of the separating game).
[[nodiscard]] RectSearchResult best_rectangle_signed(const CellWeights& g);

/// Alternating-closure hill climbing. Fast, deterministic, not certified;
/// intended for matrices above the enumeration cap.
[[nodiscard]] RectSearchResult best_rectangle_heuristic(const CellWeights& g);

struct SignedRectangle {
    Rectangle rect;
    int sign = 1;

    friend bool operator==(const SignedRectangle& a, const SignedRectangle& b) {
        return a.sign == b.sign && a.rect == b.rect;
    }
};

/// disc_mu(f) with a witnessing signed rectangle, both exact.
struct DiscUnderResult {
    Rational value;
    SignedRectangle witness;
};
[[nodiscard]] DiscUnderResult disc_under(const SignMatrix& f, const EntryDistribution& mu);

struct DualAtom {
    SignedRectangle strategy;
    Rational weight;
};

/// Certified sandwich for disc(f) = min_mu disc_mu(f):
///  - upper is realized: disc_{argmin_mu}(f) == upper, via the exact oracle;
///  - lower is a dual certificate: every cell's payoff against `dual` is
///    >= lower, so disc_mu(f) >= lower for every distribution mu.
struct DiscrepancyCertificate {
    Rational lower;
    Rational upper;
    EntryDistribution argmin_mu;
    SignedRectangle witness;
    std::vector<DualAtom> dual;
    bool converged = false;
    int iterations = 0;
};

/// Double oracle over signed rectangles vs. cells; the restricted game is
/// solved exactly, the best response comes from best_rectangle. Returns the
/// best certificate found within max_iters when the gap target is not met
/// (converged = false), never throws for non-convergence.
[[nodiscard]] DiscrepancyCertificate disc_game(const SignMatrix& f, double tol = 1e-4,
                                               int max_iters = 500);

/// Exact re-check of both certificate invariants.
[[nodiscard]] bool verify_certificate(const SignMatrix& f, const DiscrepancyCertificate& cert);

struct DiscBoundReport {
    int rank = 0;
    DiscrepancyCertificate cert;
    double bound = 0;  // 1/(8 sqrt(r))
    bool upper_ge_bound = false;
};

/// Rank / discrepancy comparison: upper >= 1/(8 sqrt r) must always hold
/// since the true value lies inside the certificate interval.
[[nodiscard]] DiscBoundReport check_rank_disc_bound(const SignMatrix& f, double tol = 1e-4,
                                                    int max_iters = 500);

}  // namespace logrank
