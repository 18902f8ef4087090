#include "logrank/mono.hpp"

#include "logrank/errors.hpp"
#include "logrank/util.hpp"
#include "logrank/rank.hpp"

#include <algorithm>

namespace logrank {

MonoExtraction extract_mono(const SignMatrix& f, const Rectangle& r, int r_param) {
    if (r.empty()) throw PreconditionError("extract_mono: empty rectangle");
    if (r_param < 1) throw PreconditionError("extract_mono: r must be >= 1");

    const long long area = static_cast<long long>(r.area());
    long long minority_plus = 0;  // count of -1 entries
    for (int i : r.rows)
        for (int j : r.cols)
            if (f.at(i, j) < 0) ++minority_plus;

    // |E[f|R]| >= 1 - 1/(2r)  <=>  minority count <= |R| / (4r)
    const long long bound4r = area;  // compare c * 4r <= area
    bool plus_ok = minority_plus * 4 * r_param <= bound4r;
    bool minus_ok = (area - minority_plus) * 4 * r_param <= bound4r;
    if (!plus_ok && !minus_ok)
        throw PreconditionError("extract_mono: average below 1 - 1/2r on the rectangle");

    const bool flip = !plus_ok;  // orient so +1 is the majority
    auto val = [&](int i, int j) { return flip ? -f.at(i, j) : f.at(i, j); };
    const long long minority = flip ? area - minority_plus : minority_plus;

    MonoExtraction out;
    out.input_rect = r;
    out.r_threshold = r_param;
    out.minority_fraction = Rational(minority, area);

    // A' = rows with at most |B|/(2r) minority entries
    const long long ncols = static_cast<long long>(r.cols.size());
    for (int i : r.rows) {
        long long bad = 0;
        for (int j : r.cols)
            if (val(i, j) < 0) ++bad;
        if (bad * 2 * r_param <= ncols) out.a_prime.push_back(i);
    }
    // Markov: total minority <= |A||B|/(4r) forces at least half the rows through
    if (out.a_prime.size() * 2 < r.rows.size())
        throw VerificationError("extract_mono: internal invariant: |A'| < |A|/2");

    // basis rows spanning the A' x B submatrix, greedy by row index
    RowBasis basis(int(r.cols.size()));
    for (int i : out.a_prime) {
        std::vector<Rational> row(r.cols.size());
        for (std::size_t j = 0; j < r.cols.size(); ++j) row[j] = Rational(val(i, r.cols[j]));
        basis.add_row(row, i);
    }
    out.basis_rows = basis.tags();
    out.restricted_rank = basis.rank();

    // B' = columns where every basis row is +1
    for (int j : r.cols) {
        bool all_plus = true;
        for (int i : out.basis_rows)
            if (val(i, j) < 0) {
                all_plus = false;
                break;
            }
        if (all_plus) out.b_prime.push_back(j);
    }
    if (out.b_prime.empty())
        throw VerificationError("extract_mono: internal invariant: empty B' (r below rank?)");

    // every A' row is a combination of the basis rows, so it is constant on
    // B'; split by that constant and keep the larger class
    std::vector<int> plus_rows, minus_rows;
    for (int i : out.a_prime) {
        int first = val(i, out.b_prime[0]);
        for (int j : out.b_prime)
            if (val(i, j) != first)
                throw VerificationError("extract_mono: internal invariant: row not constant on B'");
        (first > 0 ? plus_rows : minus_rows).push_back(i);
    }
    // prefer +1 on ties
    bool take_plus = plus_rows.size() >= minus_rows.size();
    out.output_rect = Rectangle{take_plus ? plus_rows : minus_rows, out.b_prime};
    int oriented_color = take_plus ? 1 : -1;
    out.color = flip ? -oriented_color : oriented_color;
    if (out.output_rect.rows.empty())
        throw VerificationError("extract_mono: internal invariant: empty output row set");
    return out;
}

namespace {

// dynamic bitset helpers over the column side
using Blocks = std::vector<std::uint64_t>;

int popcount(const Blocks& b) {
    int c = 0;
    for (std::uint64_t w : b) c += __builtin_popcountll(w);
    return c;
}

struct MonoSearch {
    const std::vector<Blocks>& row_masks;  // per row: columns equal to the color
    int n_rows, n_cols;
    std::size_t best_area = 0;
    std::vector<int> best_rows;
    Blocks best_cols;

    void consider(const std::vector<int>& rows, const Blocks& cols) {
        std::size_t area = rows.size() * std::size_t(popcount(cols));
        if (area > best_area) {
            best_area = area;
            best_rows = rows;
            best_cols = cols;
        }
    }

    void expand(std::vector<int>& chosen, Blocks cols, int next) {
        int remaining = n_rows - next;
        int width = popcount(cols);
        if (width == 0) return;
        if ((chosen.size() + std::size_t(remaining)) * std::size_t(width) <= best_area)
            return;  // even taking everything left cannot beat the incumbent
        if (next == n_rows) return;

        // include `next`
        Blocks with = cols;
        for (std::size_t w = 0; w < with.size(); ++w) with[w] &= row_masks[std::size_t(next)][w];
        if (popcount(with) > 0) {
            chosen.push_back(next);
            consider(chosen, with);
            expand(chosen, std::move(with), next + 1);
            chosen.pop_back();
        }
        // skip `next`
        expand(chosen, std::move(cols), next + 1);
    }
};

}  // namespace

MaxMonoResult brute_force_max_mono(const SignMatrix& f) {
    const bool transpose = f.n_rows() > f.n_cols();
    const SignMatrix m = transpose ? f.transpose() : f;
    if (m.n_rows() > cap_from_env("LOGRANK_MONO_CAP", 20))
        throw CapError("brute_force_max_mono: min dimension exceeds the enumeration cap (20)");

    const std::size_t blocks = std::size_t(m.n_cols() + 63) / 64;
    MaxMonoResult best;
    std::size_t best_area = 0;

    for (int color : {1, -1}) {
        std::vector<Blocks> row_masks(std::size_t(m.n_rows()), Blocks(blocks, 0));
        for (int i = 0; i < m.n_rows(); ++i)
            for (int j = 0; j < m.n_cols(); ++j)
                if (m.at(i, j) == color)
                    row_masks[std::size_t(i)][std::size_t(j) / 64] |= 1ull << (j % 64);

        Blocks all(blocks, 0);
        for (int j = 0; j < m.n_cols(); ++j) all[std::size_t(j) / 64] |= 1ull << (j % 64);

        MonoSearch search{row_masks, m.n_rows(), m.n_cols(), 0, {}, {}};
        std::vector<int> chosen;
        search.expand(chosen, all, 0);

        if (search.best_area > best_area) {
            best_area = search.best_area;
            Rectangle r;
            r.rows = search.best_rows;
            for (int j = 0; j < m.n_cols(); ++j)
                if (search.best_cols[std::size_t(j) / 64] >> (j % 64) & 1) r.cols.push_back(j);
            if (transpose) std::swap(r.rows, r.cols);
            best.rect = std::move(r);
            best.color = color;
        }
    }
    if (best_area == 0) throw VerificationError("brute_force_max_mono: no cell found");
    return best;
}

MaxMonoResult greedy_mono(const SignMatrix& f) {
    MaxMonoResult best{Rectangle{{0}, {0}}, f.at(0, 0)};
    std::size_t best_area = 1;
    for (int color : {1, -1}) {
        // seed: row with the most `color` entries
        int seed = -1, seed_count = 0;
        for (int i = 0; i < f.n_rows(); ++i) {
            int c = 0;
            for (int j = 0; j < f.n_cols(); ++j)
                if (f.at(i, j) == color) ++c;
            if (c > seed_count) {
                seed_count = c;
                seed = i;
            }
        }
        if (seed < 0) continue;
        std::vector<int> rows{seed}, cols;
        for (int j = 0; j < f.n_cols(); ++j)
            if (f.at(seed, j) == color) cols.push_back(j);
        // add rows while the area does not shrink
        for (int i = 0; i < f.n_rows(); ++i) {
            if (i == seed) continue;
            std::vector<int> kept;
            for (int j : cols)
                if (f.at(i, j) == color) kept.push_back(j);
            if ((rows.size() + 1) * kept.size() >= rows.size() * cols.size() && !kept.empty()) {
                rows.push_back(i);
                cols = std::move(kept);
            }
        }
        std::sort(rows.begin(), rows.end());
        std::size_t area = rows.size() * cols.size();
        if (area > best_area) {
            best_area = area;
            best = MaxMonoResult{Rectangle{rows, cols}, color};
        }
    }
    return best;
}

}  // namespace logrank
