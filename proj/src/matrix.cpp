#include "logrank/matrix.hpp"

#include "logrank/errors.hpp"
#include "logrank/rank.hpp"
#include "logrank/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace logrank {

using nlohmann::json;

// ---- Rectangle ----

namespace {
bool sorted_contains(const std::vector<int>& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
}
}  // namespace

bool Rectangle::contains(int r, int c) const {
    return sorted_contains(rows, r) && sorted_contains(cols, c);
}
bool Rectangle::contains_row(int r) const { return sorted_contains(rows, r); }
bool Rectangle::contains_col(int c) const { return sorted_contains(cols, c); }

void Rectangle::normalize() {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
}

Rectangle Rectangle::full(int n_rows, int n_cols) {
    Rectangle r;
    r.rows.resize(n_rows);
    r.cols.resize(n_cols);
    for (int i = 0; i < n_rows; ++i) r.rows[i] = i;
    for (int j = 0; j < n_cols; ++j) r.cols[j] = j;
    return r;
}

std::vector<int> complement(const std::vector<int>& s, int n) {
    std::vector<int> out;
    out.reserve(n - s.size());
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        if (k < s.size() && s[k] == i) {
            ++k;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<int> mask_to_indices(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        int b = __builtin_ctzll(mask);
        out.push_back(b);
        mask &= mask - 1;
    }
    return out;
}

std::uint64_t indices_to_mask(const std::vector<int>& idx) {
    std::uint64_t m = 0;
    for (int i : idx) m |= 1ull << i;
    return m;
}

// ---- SignMatrix ----

SignMatrix::SignMatrix(int n_rows, int n_cols, std::vector<std::int8_t> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)) {
    if (n_rows < 1 || n_cols < 1) throw PreconditionError("SignMatrix: dimensions must be >= 1");
    if (entries_.size() != std::size_t(n_rows) * n_cols)
        throw PreconditionError("SignMatrix: entry count does not match dimensions");
    for (std::int8_t e : entries_)
        if (e != 1 && e != -1) throw PreconditionError("SignMatrix: entries must be +1 or -1");
}

SignMatrix SignMatrix::constant(int n_rows, int n_cols, int value) {
    return SignMatrix(n_rows, n_cols,
                      std::vector<std::int8_t>(std::size_t(n_rows) * n_cols,
                                               static_cast<std::int8_t>(value)));
}

SignMatrix SignMatrix::transpose() const {
    std::vector<std::int8_t> e(entries_.size());
    for (int i = 0; i < n_rows_; ++i)
        for (int j = 0; j < n_cols_; ++j) e[std::size_t(j) * n_rows_ + i] = at(i, j);
    return SignMatrix(n_cols_, n_rows_, std::move(e));
}

SignMatrix SignMatrix::negated() const {
    std::vector<std::int8_t> e(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) e[i] = -entries_[i];
    return SignMatrix(n_rows_, n_cols_, std::move(e));
}

bool SignMatrix::is_constant() const {
    for (std::int8_t e : entries_)
        if (e != entries_[0]) return false;
    return true;
}

int SignMatrix::constant_value() const { return is_constant() ? entries_[0] : 0; }

bool SignMatrix::monochromatic_on(const Rectangle& r) const {
    if (r.empty()) return true;
    int v = at(r.rows[0], r.cols[0]);
    for (int i : r.rows)
        for (int j : r.cols)
            if (at(i, j) != v) return false;
    return true;
}

// ---- IntMatrix ----

IntMatrix::IntMatrix(int n_rows, int n_cols, std::vector<long long> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)) {
    if (n_rows < 1 || n_cols < 1) throw PreconditionError("IntMatrix: dimensions must be >= 1");
    if (entries_.size() != std::size_t(n_rows) * n_cols)
        throw PreconditionError("IntMatrix: entry count does not match dimensions");
}

IntMatrix IntMatrix::zero(int n_rows, int n_cols) {
    return IntMatrix(n_rows, n_cols, std::vector<long long>(std::size_t(n_rows) * n_cols, 0));
}

std::size_t IntMatrix::nonzero_count() const {
    std::size_t c = 0;
    for (long long e : entries_) c += e != 0;
    return c;
}

bool IntMatrix::zero_on(const Rectangle& r) const {
    for (int i : r.rows)
        for (int j : r.cols)
            if (at(i, j) != 0) return false;
    return true;
}

IntMatrix to_int_matrix(const SignMatrix& m) {
    std::vector<long long> e(m.n_cells());
    for (int i = 0; i < m.n_rows(); ++i)
        for (int j = 0; j < m.n_cols(); ++j) e[std::size_t(i) * m.n_cols() + j] = m.at(i, j);
    return IntMatrix(m.n_rows(), m.n_cols(), std::move(e));
}

// ---- EntryDistribution ----

EntryDistribution::EntryDistribution(int n_rows, int n_cols, std::vector<Rational> weights)
    : n_rows_(n_rows), n_cols_(n_cols), weights_(std::move(weights)) {
    if (weights_.size() != std::size_t(n_rows) * n_cols)
        throw PreconditionError("EntryDistribution: weight count does not match dimensions");
    Rational total;
    for (const Rational& w : weights_) {
        if (w.sign() < 0) throw PreconditionError("EntryDistribution: negative weight");
        total += w;
    }
    if (total != Rational(1)) throw PreconditionError("EntryDistribution: weights must sum to 1");
}

EntryDistribution EntryDistribution::uniform(int n_rows, int n_cols) {
    Rational w(1, static_cast<long long>(n_rows) * n_cols);
    return EntryDistribution(n_rows, n_cols,
                             std::vector<Rational>(std::size_t(n_rows) * n_cols, w));
}

EntryDistribution EntryDistribution::normalized(int n_rows, int n_cols,
                                                std::vector<Rational> weights) {
    Rational total;
    for (const Rational& w : weights) {
        if (w.sign() < 0) throw PreconditionError("EntryDistribution: negative weight");
        total += w;
    }
    if (total.sign() <= 0) throw PreconditionError("EntryDistribution: total weight must be > 0");
    for (Rational& w : weights) w /= total;
    return EntryDistribution(n_rows, n_cols, std::move(weights));
}

Rational EntryDistribution::mass(const Rectangle& r) const {
    Rational m;
    for (int i : r.rows)
        for (int j : r.cols) m += at(i, j);
    return m;
}

// ---- text format ----

SignMatrix load_matrix(const std::string& text) {
    std::vector<std::vector<std::int8_t>> rows;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip trailing CR and surrounding whitespace
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;  // blank line
        line = line.substr(start);

        std::vector<std::int8_t> row;
        if (line.find_first_of("01") == std::string::npos) {
            // compact +/- characters; spaces between symbols allowed
            for (char c : line) {
                if (c == '+') {
                    row.push_back(1);
                } else if (c == '-') {
                    row.push_back(-1);
                } else if (c == ' ' || c == '\t') {
                    continue;
                } else {
                    throw ParseError("load_matrix: unexpected symbol '" + std::string(1, c) +
                                     "' at line " + std::to_string(line_no));
                }
            }
        } else {
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                if (tok == "1" || tok == "+1") {
                    row.push_back(1);
                } else if (tok == "-1") {
                    row.push_back(-1);
                } else {
                    throw ParseError("load_matrix: unexpected token '" + tok + "' at line " +
                                     std::to_string(line_no));
                }
            }
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw ParseError("load_matrix: ragged row at line " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows[0].empty()) throw ParseError("load_matrix: empty input");
    std::vector<std::int8_t> flat;
    flat.reserve(rows.size() * rows[0].size());
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return SignMatrix(int(rows.size()), int(rows[0].size()), std::move(flat));
}

std::string save_matrix(const SignMatrix& m) {
    std::string out;
    out.reserve(m.n_cells() + m.n_rows());
    for (int i = 0; i < m.n_rows(); ++i) {
        for (int j = 0; j < m.n_cols(); ++j) out.push_back(m.at(i, j) > 0 ? '+' : '-');
        out.push_back('\n');
    }
    return out;
}

// ---- dedupe / restrict / average ----

DedupeResult dedupe(const SignMatrix& m) {
    std::vector<int> row_keep, row_map(m.n_rows());
    {
        std::map<std::vector<std::int8_t>, int> seen;
        for (int i = 0; i < m.n_rows(); ++i) {
            std::vector<std::int8_t> key(m.n_cols());
            for (int j = 0; j < m.n_cols(); ++j) key[j] = std::int8_t(m.at(i, j));
            auto [it, inserted] = seen.emplace(std::move(key), int(row_keep.size()));
            if (inserted) row_keep.push_back(i);
            row_map[i] = it->second;
        }
    }
    std::vector<int> col_keep, col_map(m.n_cols());
    {
        std::map<std::vector<std::int8_t>, int> seen;
        for (int j = 0; j < m.n_cols(); ++j) {
            std::vector<std::int8_t> key(row_keep.size());
            for (std::size_t i = 0; i < row_keep.size(); ++i)
                key[i] = std::int8_t(m.at(row_keep[i], j));
            auto [it, inserted] = seen.emplace(std::move(key), int(col_keep.size()));
            if (inserted) col_keep.push_back(j);
            col_map[j] = it->second;
        }
    }
    std::vector<std::int8_t> e;
    e.reserve(row_keep.size() * col_keep.size());
    for (int i : row_keep)
        for (int j : col_keep) e.push_back(std::int8_t(m.at(i, j)));
    return DedupeResult{SignMatrix(int(row_keep.size()), int(col_keep.size()), std::move(e)),
                        std::move(row_map), std::move(col_map)};
}

namespace {
void check_rect_bounds(const Rectangle& r, int n_rows, int n_cols, const char* who) {
    if (r.empty()) throw PreconditionError(std::string(who) + ": empty rectangle");
    for (int i : r.rows)
        if (i < 0 || i >= n_rows) throw PreconditionError(std::string(who) + ": row out of range");
    for (int j : r.cols)
        if (j < 0 || j >= n_cols) throw PreconditionError(std::string(who) + ": col out of range");
}
}  // namespace

SignMatrix restrict(const SignMatrix& m, const Rectangle& r) {
    check_rect_bounds(r, m.n_rows(), m.n_cols(), "restrict");
    std::vector<std::int8_t> e;
    e.reserve(r.area());
    for (int i : r.rows)
        for (int j : r.cols) e.push_back(std::int8_t(m.at(i, j)));
    return SignMatrix(int(r.rows.size()), int(r.cols.size()), std::move(e));
}

IntMatrix restrict(const IntMatrix& m, const Rectangle& r) {
    check_rect_bounds(r, m.n_rows(), m.n_cols(), "restrict");
    std::vector<long long> e;
    e.reserve(r.area());
    for (int i : r.rows)
        for (int j : r.cols) e.push_back(m.at(i, j));
    return IntMatrix(int(r.rows.size()), int(r.cols.size()), std::move(e));
}

Rational average(const SignMatrix& f, const EntryDistribution& mu, const Rectangle& r) {
    if (f.n_rows() != mu.n_rows() || f.n_cols() != mu.n_cols())
        throw PreconditionError("average: distribution dimensions do not match matrix");
    check_rect_bounds(r, f.n_rows(), f.n_cols(), "average");
    Rational mass, weighted;
    for (int i : r.rows) {
        for (int j : r.cols) {
            const Rational& w = mu.at(i, j);
            mass += w;
            if (f.at(i, j) > 0) {
                weighted += w;
            } else {
                weighted -= w;
            }
        }
    }
    if (mass.is_zero()) throw PreconditionError("average: conditioning on null event");
    return weighted / mass;
}

// ---- generators ----

SignMatrix gen_inner_product(int k) {
    if (k < 1) throw PreconditionError("gen_inner_product: k must be >= 1");
    if (k > 6) throw CapError("gen_inner_product: k > 6 exceeds the desk-scale cap");
    int n = 1 << k;
    std::vector<std::int8_t> e(std::size_t(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            e[std::size_t(x) * n + y] = (__builtin_popcount(unsigned(x & y)) % 2 == 0) ? 1 : -1;
    return SignMatrix(n, n, std::move(e));
}

SignMatrix gen_random_low_rank(int n, int m, int r, std::uint64_t seed, LowRankMode mode) {
    if (n < 1 || m < 1 || r < 1) throw PreconditionError("gen_random_low_rank: sizes must be >= 1");
    if (r > std::min(n, m)) throw PreconditionError("gen_random_low_rank: r > min(n, m)");

    if (mode == LowRankMode::kPatternRows) {
        SplitMix64 rng(derive_seed(seed, 0));
        std::vector<std::vector<std::int8_t>> patterns(r, std::vector<std::int8_t>(m));
        for (auto& p : patterns)
            for (auto& v : p) v = rng.next() & 1 ? 1 : -1;
        std::vector<std::int8_t> e;
        e.reserve(std::size_t(n) * m);
        for (int i = 0; i < n; ++i) {
            // make sure every pattern appears at least once so the realized
            // rank equals the patterns' rank
            const auto& p = i < r ? patterns[i] : patterns[rng.next_below(std::uint64_t(r))];
            e.insert(e.end(), p.begin(), p.end());
        }
        return SignMatrix(n, m, std::move(e));
    }

    // bool-product mode: threshold a 0/1 factor product, verify rank post hoc
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt == 64)
            throw ConvergenceError("gen_random_low_rank: bool-product mode failed to hit rank <= r");
        SplitMix64 rng(derive_seed(seed, 1 + attempt));
        std::vector<std::vector<int>> u(n, std::vector<int>(r)), v(r, std::vector<int>(m));
        for (auto& row : u)
            for (auto& x : row) x = int(rng.next() & 1);
        for (auto& row : v)
            for (auto& x : row) x = int(rng.next() & 1);
        std::vector<std::int8_t> e(std::size_t(n) * m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                int dot = 0;
                for (int t = 0; t < r; ++t) dot += u[i][t] * v[t][j];
                e[std::size_t(i) * m + j] = dot > 0 ? 1 : -1;
            }
        }
        SignMatrix out(n, m, std::move(e));
        if (rank_exact(out) <= r) return out;
    }
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    return r;
}

std::vector<std::vector<int>> weight_w_subsets(int r, int w) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(w);
    for (int i = 0; i < w; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = w - 1;
        while (i >= 0 && cur[i] == r - w + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < w; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

IntMatrix gen_rigidity_example(int r, int w) {
    if (w < 1 || w > r) throw PreconditionError("gen_rigidity_example: need 1 <= w <= r");
    std::uint64_t n = binomial(r, w);
    if (n > 5000) throw CapError("gen_rigidity_example: C(r,w) exceeds the 5000-row cap");
    auto subsets = weight_w_subsets(r, w);
    int sn = int(subsets.size());
    std::vector<long long> e(std::size_t(sn) * sn);
    for (int a = 0; a < sn; ++a) {
        for (int b = a; b < sn; ++b) {
            long long dot = 0;
            std::size_t ia = 0, ib = 0;
            while (ia < subsets[a].size() && ib < subsets[b].size()) {
                if (subsets[a][ia] == subsets[b][ib]) {
                    ++dot;
                    ++ia;
                    ++ib;
                } else if (subsets[a][ia] < subsets[b][ib]) {
                    ++ia;
                } else {
                    ++ib;
                }
            }
            e[std::size_t(a) * sn + b] = dot;
            e[std::size_t(b) * sn + a] = dot;
        }
    }
    return IntMatrix(sn, sn, std::move(e));
}

// ---- JSON ----

namespace {
json entries_to_json(int n_rows, int n_cols, auto&& get) {
    json rows = json::array();
    for (int i = 0; i < n_rows; ++i) {
        json row = json::array();
        for (int j = 0; j < n_cols; ++j) row.push_back(get(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void parse_dims(const json& j, int& n_rows, int& n_cols) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw ParseError("matrix JSON: expected {rows, cols, entries}");
    n_rows = j["rows"].get<int>();
    n_cols = j["cols"].get<int>();
    if (!j["entries"].is_array() || j["entries"].size() != std::size_t(n_rows))
        throw ParseError("matrix JSON: entries row count mismatch");
}
}  // namespace

std::string matrix_to_json(const SignMatrix& m) {
    json j{{"rows", m.n_rows()},
           {"cols", m.n_cols()},
           {"entries", entries_to_json(m.n_rows(), m.n_cols(), [&](int i, int k) {
                return m.at(i, k);
            })}};
    return j.dump();
}

std::string matrix_to_json(const IntMatrix& m) {
    json j{{"rows", m.n_rows()},
           {"cols", m.n_cols()},
           {"entries", entries_to_json(m.n_rows(), m.n_cols(), [&](int i, int k) {
                return m.at(i, k);
            })}};
    return j.dump();
}

SignMatrix sign_matrix_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("matrix JSON: ") + e.what());
    }
    int n_rows = 0, n_cols = 0;
    parse_dims(j, n_rows, n_cols);
    std::vector<std::int8_t> e;
    e.reserve(std::size_t(n_rows) * n_cols);
    for (const auto& row : j["entries"]) {
        if (!row.is_array() || row.size() != std::size_t(n_cols))
            throw ParseError("matrix JSON: ragged entries");
        for (const auto& v : row) {
            int x = v.get<int>();
            if (x != 1 && x != -1) throw ParseError("matrix JSON: entry outside {-1, +1}");
            e.push_back(std::int8_t(x));
        }
    }
    return SignMatrix(n_rows, n_cols, std::move(e));
}

IntMatrix int_matrix_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("matrix JSON: ") + e.what());
    }
    int n_rows = 0, n_cols = 0;
    parse_dims(j, n_rows, n_cols);
    std::vector<long long> e;
    e.reserve(std::size_t(n_rows) * n_cols);
    for (const auto& row : j["entries"]) {
        if (!row.is_array() || row.size() != std::size_t(n_cols))
            throw ParseError("matrix JSON: ragged entries");
        for (const auto& v : row) e.push_back(v.get<long long>());
    }
    return IntMatrix(n_rows, n_cols, std::move(e));
}

}  // namespace logrank
