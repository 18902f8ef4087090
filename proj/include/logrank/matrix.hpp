#pragma once

#include "logrank/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logrank {

/// A combinatorial rectangle: a set of row indices times a set of column
/// indices. Index sets are kept sorted and duplicate-free. Empty sides are
/// representable (some operations return flagged empty parts); operations
/// that promise nonempty results enforce that themselves.
struct Rectangle {
    std::vector<int> rows;
    std::vector<int> cols;

    [[nodiscard]] bool empty() const { return rows.empty() || cols.empty(); }
    [[nodiscard]] std::size_t area() const { return rows.size() * cols.size(); }
    [[nodiscard]] bool contains(int r, int c) const;
    [[nodiscard]] bool contains_row(int r) const;
    [[nodiscard]] bool contains_col(int c) const;

    void normalize();  // sort + unique
    [[nodiscard]] static Rectangle full(int n_rows, int n_cols);

    friend bool operator==(const Rectangle& a, const Rectangle& b) {
        return a.rows == b.rows && a.cols == b.cols;
    }
};

/// Sorted complement of `s` within [0, n).
[[nodiscard]] std::vector<int> complement(const std::vector<int>& s, int n);

/// Lexicographic order on sorted index sequences.
[[nodiscard]] bool lex_less(const std::vector<int>& a, const std::vector<int>& b);

[[nodiscard]] std::vector<int> mask_to_indices(std::uint64_t mask);
[[nodiscard]] std::uint64_t indices_to_mask(const std::vector<int>& idx);

/// A total boolean function as an n x m matrix with entries in {-1,+1}.
class SignMatrix {
  public:
    SignMatrix() = default;
    SignMatrix(int n_rows, int n_cols, std::vector<std::int8_t> entries);
    /// Constant matrix.
    static SignMatrix constant(int n_rows, int n_cols, int value);

    [[nodiscard]] int n_rows() const { return n_rows_; }
    [[nodiscard]] int n_cols() const { return n_cols_; }
    [[nodiscard]] int at(int r, int c) const { return entries_[std::size_t(r) * n_cols_ + c]; }
    [[nodiscard]] std::size_t n_cells() const { return entries_.size(); }

    [[nodiscard]] SignMatrix transpose() const;
    [[nodiscard]] SignMatrix negated() const;
    [[nodiscard]] bool is_constant() const;
    /// Constant value if is_constant(), else 0.
    [[nodiscard]] int constant_value() const;
    [[nodiscard]] bool monochromatic_on(const Rectangle& r) const;

    friend bool operator==(const SignMatrix& a, const SignMatrix& b) {
        return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.entries_ == b.entries_;
    }

  private:
    int n_rows_ = 0, n_cols_ = 0;
    std::vector<std::int8_t> entries_;
};

/// Integer matrix with exact arithmetic; entries are 64-bit here (exact
/// elimination promotes to arbitrary precision internally).
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(int n_rows, int n_cols, std::vector<long long> entries);
    static IntMatrix zero(int n_rows, int n_cols);

    [[nodiscard]] int n_rows() const { return n_rows_; }
    [[nodiscard]] int n_cols() const { return n_cols_; }
    [[nodiscard]] long long at(int r, int c) const { return entries_[std::size_t(r) * n_cols_ + c]; }
    long long& at(int r, int c) { return entries_[std::size_t(r) * n_cols_ + c]; }

    [[nodiscard]] std::size_t nonzero_count() const;
    [[nodiscard]] bool zero_on(const Rectangle& r) const;

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.entries_ == b.entries_;
    }

  private:
    int n_rows_ = 0, n_cols_ = 0;
    std::vector<long long> entries_;
};

[[nodiscard]] IntMatrix to_int_matrix(const SignMatrix& m);

/// A probability distribution over matrix cells, exact rational weights.
class EntryDistribution {
  public:
    EntryDistribution() = default;
    /// Weights must be nonnegative and sum to exactly 1.
    EntryDistribution(int n_rows, int n_cols, std::vector<Rational> weights);
    static EntryDistribution uniform(int n_rows, int n_cols);
    /// Nonnegative weights normalized to total 1 (total must be positive).
    static EntryDistribution normalized(int n_rows, int n_cols, std::vector<Rational> weights);

    [[nodiscard]] int n_rows() const { return n_rows_; }
    [[nodiscard]] int n_cols() const { return n_cols_; }
    [[nodiscard]] const Rational& at(int r, int c) const {
        return weights_[std::size_t(r) * n_cols_ + c];
    }

    [[nodiscard]] Rational mass(const Rectangle& r) const;

  private:
    int n_rows_ = 0, n_cols_ = 0;
    std::vector<Rational> weights_;
};

// ---- matrix-core operations ----

/// Parse the '+'/'-' text format (one row per line), or whitespace-separated
/// "1"/"-1" tokens. Throws ParseError with a line number on ragged input.
[[nodiscard]] SignMatrix load_matrix(const std::string& text);
[[nodiscard]] std::string save_matrix(const SignMatrix& m);

struct DedupeResult {
    SignMatrix matrix;
    std::vector<int> row_map;  // original row -> row of `matrix`
    std::vector<int> col_map;
};

/// Remove duplicate rows and columns, first occurrence kept.
[[nodiscard]] DedupeResult dedupe(const SignMatrix& m);

/// Submatrix selected by a nonempty in-bounds rectangle.
[[nodiscard]] SignMatrix restrict(const SignMatrix& m, const Rectangle& r);
[[nodiscard]] IntMatrix restrict(const IntMatrix& m, const Rectangle& r);

/// E_mu[f | R]: conditional average of f on R. Throws PreconditionError when
/// mu(R) = 0 (conditioning on a null event).
[[nodiscard]] Rational average(const SignMatrix& f, const EntryDistribution& mu,
                               const Rectangle& r);

/// Inner product matrix: f(x,y) = (-1)^{<x,y> mod 2}, x,y over {0,1}^k in
/// lexicographic order. Full rank 2^k. Cap k <= 6.
[[nodiscard]] SignMatrix gen_inner_product(int k);

enum class LowRankMode {
    kPatternRows,  // duplicate r sampled sign rows; rank <= r by construction
    kBoolProduct,  // thresholded 0/1 factor product; rank checked post hoc
};

/// Deterministic low-rank sign matrix generator. kPatternRows guarantees
/// rank <= r structurally; kBoolProduct resamples until rank_exact <= r.
[[nodiscard]] SignMatrix gen_random_low_rank(int n, int m, int r, std::uint64_t seed,
                                             LowRankMode mode = LowRankMode::kPatternRows);

/// The N N^t construction: N has all weight-w 0/1 vectors of length r as rows
/// (lexicographic order). Result is C(r,w) x C(r,w), symmetric, diagonal w,
/// rank <= r. Cap: C(r,w) <= 5000.
[[nodiscard]] IntMatrix gen_rigidity_example(int r, int w);

/// All weight-w subsets of [0,r) in lexicographic order (as sorted index lists).
[[nodiscard]] std::vector<std::vector<int>> weight_w_subsets(int r, int w);

[[nodiscard]] std::uint64_t binomial(int n, int k);

// JSON (nlohmann) serialization: {"rows": n, "cols": m, "entries": [[...]]}.
[[nodiscard]] std::string matrix_to_json(const SignMatrix& m);
[[nodiscard]] std::string matrix_to_json(const IntMatrix& m);
[[nodiscard]] SignMatrix sign_matrix_from_json(const std::string& text);
[[nodiscard]] IntMatrix int_matrix_from_json(const std::string& text);

}  // namespace logrank
