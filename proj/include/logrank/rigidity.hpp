#pragma once

#include "logrank/matrix.hpp"

#include <optional>

namespace logrank {

enum class ZeroRectMode { kExact, kHeuristic };
enum class ZeroRectTarget { kMaxMinSide, kMaxArea };

struct ZeroRectReport {
    std::optional<Rectangle> rect;  // empty when the matrix has no zero cell
    std::size_t min_side = 0;
    std::size_t area = 0;
    Rational sparsity_exact;  // nonzero count / (n*m)
    double sparsity = 0;
    int rank = 0;
    double bound_ratio = 0;  // min_side / (n * exp(-sqrt(eps * r)))
    bool certified = false;  // exact mode
};

/// Largest all-zero rectangle of M under the chosen target. Exact mode
/// enumerates row subsets of the smaller side with column closure and
/// branch-and-bound pruning (cap: min dimension <= 24); heuristic mode is a
/// greedy grow with local improvement, not certified.
[[nodiscard]] ZeroRectReport zero_rectangle(const IntMatrix& m,
                                            ZeroRectMode mode = ZeroRectMode::kExact,
                                            ZeroRectTarget target = ZeroRectTarget::kMaxMinSide);

struct ConjectureReport {
    ZeroRectReport zero;
    Rational eps_exact;
    double eps = 0;
    int rank = 0;
};

/// Sparsity / rank / zero-rectangle summary. Reports the dimensionless
/// bound_ratio (constant 1 inside the exponential); deliberately never a
/// pass/fail verdict.
[[nodiscard]] ConjectureReport conjecture_check(const IntMatrix& m,
                                                std::optional<int> r_override = std::nullopt,
                                                ZeroRectMode mode = ZeroRectMode::kExact);

struct RigidityDecomposition {
    IntMatrix m, l, s;
};

struct DecompositionReport {
    bool sum_ok = false;  // M == L + S
    int rank_m = 0, rank_l = 0, rank_s = 0;
    std::size_t s_nonzeros = 0;
    bool subadditivity_ok = false;  // rank(S) <= rank(M) + rank(L)
    ZeroRectReport zero;            // zero rectangle of S
    bool m_equals_l_on_rect = false;
    bool triggered = false;          // min side >= r
    int restricted_rank_m = 0;       // rank of M on the zero rectangle
    bool contradiction_flag = false; // triggered && rank(L) < r && restricted minor full
};

/// Decomposition arithmetic: verifies M = L + S, the rank subadditivity
/// step, and the zero-rectangle transfer M = L on S's zero rectangle; flags
/// the low-rank contradiction when the minor there actually has rank >= r.
[[nodiscard]] DecompositionReport verify_rigidity_decomposition(const RigidityDecomposition& dec,
                                                                int r,
                                                                ZeroRectMode mode = ZeroRectMode::kExact);

struct SupportSplitReport {
    int r = 0, w = 0;
    int best_u = 0;               // support-side size maximizing the split
    std::size_t min_side = 0;     // min(C(u,w), C(r-u,w)) at best_u
    Rectangle witness;            // weight-w subsets of [0,u) x subsets of [u,r)
    bool witness_is_zero = false; // verified entrywise on M
    bool pattern_matches = false; // zero pattern == support disjointness
    std::size_t exhaustive_best = 0;  // max over all u; certified optimum
};

/// Certified maximum min-side zero rectangle for the N N^t construction: the
/// zero pattern is support disjointness (verified cell by cell), cross
/// disjointness forces the two sides to use disjoint ground coordinates, and
/// an exhaustive scan over the split size u yields the exact optimum.
[[nodiscard]] SupportSplitReport support_split_zero_rectangle(const IntMatrix& m, int r, int w);

// JSON for decompositions: {"M": matrix, "L": matrix, "S": matrix}.
[[nodiscard]] RigidityDecomposition decomposition_from_json(const std::string& text);
[[nodiscard]] std::string decomposition_to_json(const RigidityDecomposition& dec);

}  // namespace logrank
