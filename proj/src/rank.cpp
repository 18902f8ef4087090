#include "logrank/rank.hpp"

#include <utility>

namespace logrank {

// Bareiss fraction-free elimination with full pivoting on nonzero entries.
// Early exit once the remaining block is all zero, which keeps low-rank
// matrices cheap even when they are large.
int rank_exact_bigint(std::vector<std::vector<BigInt>> a) {
    if (a.empty() || a[0].empty()) return 0;
    int n = int(a.size()), m = int(a[0].size());
    BigInt prev_pivot(1);
    int rank = 0;
    for (int step = 0; rank < n && rank < m; ++step) {
        // find a nonzero pivot in the remaining block
        int pi = -1, pj = -1;
        for (int i = rank; i < n && pi < 0; ++i)
            for (int j = rank; j < m; ++j)
                if (!a[i][j].is_zero()) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0) break;  // remaining block is zero
        std::swap(a[rank], a[pi]);
        if (pj != rank)
            for (int i = 0; i < n; ++i) std::swap(a[i][rank], a[i][pj]);

        const BigInt& pivot = a[rank][rank];
        for (int i = rank + 1; i < n; ++i) {
            for (int j = rank + 1; j < m; ++j) {
                BigInt t = a[i][j] * pivot - a[i][rank] * a[rank][j];
                a[i][j] = BigInt::div_exact(t, prev_pivot);
            }
            a[i][rank] = BigInt(0);
        }
        prev_pivot = pivot;
        ++rank;
    }
    return rank;
}

int rank_exact(const SignMatrix& m) {
    std::vector<std::vector<BigInt>> a(m.n_rows(), std::vector<BigInt>(m.n_cols()));
    for (int i = 0; i < m.n_rows(); ++i)
        for (int j = 0; j < m.n_cols(); ++j) a[i][j] = BigInt(m.at(i, j));
    return rank_exact_bigint(std::move(a));
}

int rank_exact(const IntMatrix& m) {
    std::vector<std::vector<BigInt>> a(m.n_rows(), std::vector<BigInt>(m.n_cols()));
    for (int i = 0; i < m.n_rows(); ++i)
        for (int j = 0; j < m.n_cols(); ++j) a[i][j] = BigInt(m.at(i, j));
    return rank_exact_bigint(std::move(a));
}

bool RowBasis::add_row(const std::vector<Rational>& row, int tag) {
    std::vector<Rational> v = row;
    for (std::size_t k = 0; k < reduced_.size(); ++k) {
        int pc = pivot_col_[k];
        if (v[pc].is_zero()) continue;
        Rational factor = v[pc] / reduced_[k][pc];
        for (int j = 0; j < n_cols_; ++j) v[j] -= factor * reduced_[k][j];
    }
    int pc = -1;
    for (int j = 0; j < n_cols_; ++j)
        if (!v[j].is_zero()) {
            pc = j;
            break;
        }
    if (pc < 0) return false;
    reduced_.push_back(std::move(v));
    pivot_col_.push_back(pc);
    tags_.push_back(tag);
    return true;
}

}  // namespace logrank
