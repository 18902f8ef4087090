#pragma once

#include "logrank/matrix.hpp"

#include <vector>

namespace logrank {

/// Trace of one monochromatic extraction, kept for auditability: the row
/// filter, the spanning basis rows, the all-agreeing column set, and the
/// final color-majority rectangle.
struct MonoExtraction {
    Rectangle input_rect;
    std::vector<int> a_prime;     // rows with few minority entries
    std::vector<int> basis_rows;  // subset of a_prime spanning its row space
    std::vector<int> b_prime;     // columns where every basis row agrees
    Rectangle output_rect;
    int color = 1;

    // per-run accounting
    Rational minority_fraction;  // fraction of minority entries inside input_rect
    int r_threshold = 1;         // the r used for the |B|/(2r) cutoffs
    int restricted_rank = 0;     // rank of the a_prime x B submatrix
};

/// Extract a monochromatic rectangle of at least 1/8 the input size from a
/// nearly monochromatic rectangle: filter rows with more than |B|/(2r)
/// minority entries, take columns where a spanning set of the remaining rows
/// is unanimous (each surviving row is then constant there), and keep the
/// larger color class. Requires |E[f|R]| >= 1 - 1/(2r) under uniform on R;
/// negative-leaning inputs run on -f with the color flipped.
[[nodiscard]] MonoExtraction extract_mono(const SignMatrix& f, const Rectangle& r, int r_param);

/// Maximum-area monochromatic rectangle by subset enumeration over the
/// smaller side with column closure and area pruning. Cap: min dim <= 20.
struct MaxMonoResult {
    Rectangle rect;
    int color = 1;
};
[[nodiscard]] MaxMonoResult brute_force_max_mono(const SignMatrix& f);

/// Greedy monochromatic rectangle: seed at the best row run and grow rows
/// while the area improves. Deterministic, always returns a valid
/// monochromatic rectangle, no optimality claim.
[[nodiscard]] MaxMonoResult greedy_mono(const SignMatrix& f);

}  // namespace logrank
