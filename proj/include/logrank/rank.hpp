#pragma once

#include "logrank/matrix.hpp"
#include "logrank/rational.hpp"

#include <vector>

namespace logrank {

/// Exact rank over the rationals via fraction-free (Bareiss) elimination.
/// For integer matrices this equals the rank over the reals.
[[nodiscard]] int rank_exact(const SignMatrix& m);
[[nodiscard]] int rank_exact(const IntMatrix& m);
[[nodiscard]] int rank_exact_bigint(std::vector<std::vector<BigInt>> a);

/// Incremental exact row basis: feeds rows one at a time, keeps the indices
/// of the rows that extend the span. Greedy by insertion order, so the first
/// linearly independent rows win.
class RowBasis {
  public:
    explicit RowBasis(int n_cols) : n_cols_(n_cols) {}

    /// Returns true when the row was independent of the current span.
    bool add_row(const std::vector<Rational>& row, int tag);

    [[nodiscard]] int rank() const { return int(tags_.size()); }
    [[nodiscard]] const std::vector<int>& tags() const { return tags_; }

  private:
    int n_cols_;
    std::vector<std::vector<Rational>> reduced_;  // echelon rows
    std::vector<int> pivot_col_;
    std::vector<int> tags_;
};

}  // namespace logrank
