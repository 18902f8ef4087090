#include "logrank/rigidity.hpp"

#include "logrank/errors.hpp"
#include "logrank/util.hpp"
#include "logrank/rank.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace logrank {

using nlohmann::json;

namespace {

using Blocks = std::vector<std::uint64_t>;

int popcount(const Blocks& b) {
    int c = 0;
    for (std::uint64_t w : b) c += __builtin_popcountll(w);
    return c;
}

struct ZeroSearch {
    const std::vector<Blocks>& zero_masks;  // per row: columns with a zero entry
    int n_rows;
    ZeroRectTarget target;
    std::size_t best_score = 0;
    std::vector<int> best_rows;
    Blocks best_cols;

    std::size_t score(std::size_t rows, std::size_t cols) const {
        return target == ZeroRectTarget::kMaxMinSide ? std::min(rows, cols) : rows * cols;
    }
    std::size_t bound(std::size_t max_rows, std::size_t cols) const {
        return target == ZeroRectTarget::kMaxMinSide ? std::min(max_rows, cols) : max_rows * cols;
    }

    void consider(const std::vector<int>& rows, const Blocks& cols) {
        std::size_t cnt = std::size_t(popcount(cols));
        if (cnt == 0) return;
        std::size_t sc = score(rows.size(), cnt);
        if (sc > best_score) {
            best_score = sc;
            best_rows = rows;
            best_cols = cols;
        }
    }

    void expand(std::vector<int>& chosen, Blocks cols, int next) {
        int width = popcount(cols);
        if (width == 0) return;
        std::size_t max_rows = chosen.size() + std::size_t(n_rows - next);
        if (bound(max_rows, std::size_t(width)) <= best_score) return;
        if (next == n_rows) return;

        Blocks with = cols;
        for (std::size_t w = 0; w < with.size(); ++w) with[w] &= zero_masks[std::size_t(next)][w];
        if (popcount(with) > 0) {
            chosen.push_back(next);
            consider(chosen, with);
            expand(chosen, std::move(with), next + 1);
            chosen.pop_back();
        }
        expand(chosen, std::move(cols), next + 1);
    }
};

void finish_report(ZeroRectReport& rep, const IntMatrix& m) {
    const std::size_t cells = std::size_t(m.n_rows()) * m.n_cols();
    rep.sparsity_exact = Rational(static_cast<long long>(m.nonzero_count()),
                                  static_cast<long long>(cells));
    rep.sparsity = rep.sparsity_exact.to_double();
    rep.rank = rank_exact(m);
    if (rep.rect) {
        rep.min_side = std::min(rep.rect->rows.size(), rep.rect->cols.size());
        rep.area = rep.rect->area();
    }
    double n = double(std::min(m.n_rows(), m.n_cols()));
    double denom = n * std::exp(-std::sqrt(rep.sparsity * double(rep.rank)));
    rep.bound_ratio = denom > 0 ? double(rep.min_side) / denom : 0.0;
}

}  // namespace

ZeroRectReport zero_rectangle(const IntMatrix& m, ZeroRectMode mode, ZeroRectTarget target) {
    ZeroRectReport rep;

    const bool transpose = m.n_rows() > m.n_cols();
    const int rows = transpose ? m.n_cols() : m.n_rows();
    const int cols = transpose ? m.n_rows() : m.n_cols();
    auto zero_at = [&](int i, int j) { return (transpose ? m.at(j, i) : m.at(i, j)) == 0; };

    if (mode == ZeroRectMode::kExact && rows > cap_from_env("LOGRANK_ZERO_CAP", 24))
        throw CapError("zero_rectangle: min dimension exceeds the exact cap (24); "
                       "use the heuristic mode");

    const std::size_t blocks = std::size_t(cols + 63) / 64;
    std::vector<Blocks> zero_masks(static_cast<std::size_t>(rows), Blocks(blocks, 0));
    bool any_zero = false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (zero_at(i, j)) {
                zero_masks[std::size_t(i)][std::size_t(j) / 64] |= 1ull << (j % 64);
                any_zero = true;
            }
    if (!any_zero) {
        rep.certified = true;
        finish_report(rep, m);
        return rep;
    }

    std::vector<int> out_rows;
    Blocks out_cols;
    if (mode == ZeroRectMode::kExact) {
        Blocks all(blocks, 0);
        for (int j = 0; j < cols; ++j) all[std::size_t(j) / 64] |= 1ull << (j % 64);
        ZeroSearch search{zero_masks, rows, target, 0, {}, {}};
        std::vector<int> chosen;
        search.expand(chosen, all, 0);
        out_rows = search.best_rows;
        out_cols = search.best_cols;
        rep.certified = true;
    } else {
        // greedy row-add in decreasing zero-count order, keeping the prefix
        // that scores best
        std::vector<int> order(static_cast<std::size_t>(rows));
        for (int i = 0; i < rows; ++i) order[std::size_t(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return popcount(zero_masks[std::size_t(a)]) > popcount(zero_masks[std::size_t(b)]);
        });
        ZeroSearch scorer{zero_masks, rows, target, 0, {}, {}};
        std::vector<int> cur_rows;
        Blocks cur(blocks, 0);
        for (int j = 0; j < cols; ++j) cur[std::size_t(j) / 64] |= 1ull << (j % 64);
        std::size_t best = 0;
        for (int i : order) {
            Blocks with = cur;
            for (std::size_t w = 0; w < blocks; ++w) with[w] &= zero_masks[std::size_t(i)][w];
            std::size_t cnt = std::size_t(popcount(with));
            if (cnt == 0) continue;
            std::size_t sc = scorer.score(cur_rows.size() + 1, cnt);
            if (sc >= best) {
                cur_rows.push_back(i);
                cur = std::move(with);
                best = sc;
                out_rows = cur_rows;
                out_cols = cur;
            }
        }
        // local improvement: the row closure of the chosen columns may admit
        // extra rows for free; alternate closures to a fixpoint
        for (int round = 0; round < 8 && !out_rows.empty(); ++round) {
            std::vector<int> closure_rows;
            for (int i = 0; i < rows; ++i) {
                bool fits = true;
                for (std::size_t w = 0; w < blocks && fits; ++w)
                    if ((out_cols[w] & ~zero_masks[std::size_t(i)][w]) != 0) fits = false;
                if (fits) closure_rows.push_back(i);
            }
            if (closure_rows == out_rows) break;
            out_rows = std::move(closure_rows);
        }
        std::sort(out_rows.begin(), out_rows.end());
        rep.certified = false;
    }

    if (!out_rows.empty()) {
        Rectangle r;
        r.rows = out_rows;
        for (int j = 0; j < cols; ++j)
            if (out_cols[std::size_t(j) / 64] >> (j % 64) & 1) r.cols.push_back(j);
        if (transpose) std::swap(r.rows, r.cols);
        if (!m.zero_on(r)) throw VerificationError("zero_rectangle: result re-scan failed");
        rep.rect = std::move(r);
    }
    finish_report(rep, m);
    return rep;
}

ConjectureReport conjecture_check(const IntMatrix& m, std::optional<int> r_override,
                                  ZeroRectMode mode) {
    ConjectureReport rep;
    rep.zero = zero_rectangle(m, mode, ZeroRectTarget::kMaxMinSide);
    rep.eps_exact = rep.zero.sparsity_exact;
    rep.eps = rep.zero.sparsity;
    rep.rank = r_override.value_or(rep.zero.rank);
    if (r_override) {
        // recompute the ratio with the override
        double n = double(std::min(m.n_rows(), m.n_cols()));
        double denom = n * std::exp(-std::sqrt(rep.eps * double(rep.rank)));
        rep.zero.bound_ratio = denom > 0 ? double(rep.zero.min_side) / denom : 0.0;
    }
    return rep;
}

DecompositionReport verify_rigidity_decomposition(const RigidityDecomposition& dec, int r,
                                                  ZeroRectMode mode) {
    const IntMatrix &m = dec.m, &l = dec.l, &s = dec.s;
    if (m.n_rows() != l.n_rows() || m.n_cols() != l.n_cols() || m.n_rows() != s.n_rows() ||
        m.n_cols() != s.n_cols())
        throw PreconditionError("verify_rigidity_decomposition: dimension mismatch");

    DecompositionReport rep;
    rep.sum_ok = true;
    for (int i = 0; i < m.n_rows() && rep.sum_ok; ++i)
        for (int j = 0; j < m.n_cols(); ++j)
            if (m.at(i, j) != l.at(i, j) + s.at(i, j)) {
                rep.sum_ok = false;
                break;
            }
    if (!rep.sum_ok) throw PreconditionError("verify_rigidity_decomposition: M != L + S");

    rep.rank_m = rank_exact(m);
    rep.rank_l = rank_exact(l);
    rep.rank_s = rank_exact(s);
    rep.s_nonzeros = s.nonzero_count();
    rep.subadditivity_ok = rep.rank_s <= rep.rank_m + rep.rank_l;

    rep.zero = zero_rectangle(s, mode, ZeroRectTarget::kMaxMinSide);
    if (rep.zero.rect) {
        const Rectangle& zr = *rep.zero.rect;
        rep.m_equals_l_on_rect = true;
        for (int i : zr.rows)
            for (int j : zr.cols)
                if (m.at(i, j) != l.at(i, j)) rep.m_equals_l_on_rect = false;
        rep.triggered = rep.zero.min_side >= std::size_t(r);
        rep.restricted_rank_m = rank_exact(restrict(m, zr));
        rep.contradiction_flag = rep.triggered && rep.rank_l < r && rep.restricted_rank_m >= r;
    }
    return rep;
}

SupportSplitReport support_split_zero_rectangle(const IntMatrix& m, int r, int w) {
    SupportSplitReport rep;
    rep.r = r;
    rep.w = w;
    auto subsets = weight_w_subsets(r, w);
    if (std::size_t(m.n_rows()) != subsets.size() || std::size_t(m.n_cols()) != subsets.size())
        throw PreconditionError("support_split_zero_rectangle: dimensions do not match C(r,w)");

    // the whole argument rests on: M[a][b] = 0 iff supports are disjoint
    rep.pattern_matches = true;
    for (std::size_t a = 0; a < subsets.size() && rep.pattern_matches; ++a) {
        for (std::size_t b = 0; b < subsets.size(); ++b) {
            bool disjoint = true;
            std::size_t ia = 0, ib = 0;
            while (ia < subsets[a].size() && ib < subsets[b].size()) {
                if (subsets[a][ia] == subsets[b][ib]) {
                    disjoint = false;
                    break;
                }
                if (subsets[a][ia] < subsets[b][ib]) ++ia;
                else ++ib;
            }
            if ((m.at(int(a), int(b)) == 0) != disjoint) {
                rep.pattern_matches = false;
                break;
            }
        }
    }
    if (!rep.pattern_matches) return rep;

    // any cross-disjoint family pair uses disjoint coordinate sets U and V,
    // so |A| <= C(|U|, w) and |B| <= C(r - |U|, w); scanning u is exhaustive
    for (int u = w; u + w <= r; ++u) {
        std::size_t side = std::min(binomial(u, w), binomial(r - u, w));
        if (side > rep.exhaustive_best) {
            rep.exhaustive_best = side;
            rep.best_u = u;
        }
    }
    rep.min_side = rep.exhaustive_best;

    // witness at the best split: subsets inside [0,u) vs inside [u,r)
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        if (subsets[k].back() < rep.best_u) rep.witness.rows.push_back(int(k));
        if (subsets[k].front() >= rep.best_u) rep.witness.cols.push_back(int(k));
    }
    rep.witness_is_zero = m.zero_on(rep.witness);
    return rep;
}

RigidityDecomposition decomposition_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("decomposition JSON: ") + e.what());
    }
    if (!j.contains("M") || !j.contains("L") || !j.contains("S"))
        throw ParseError("decomposition JSON: expected {M, L, S}");
    return RigidityDecomposition{int_matrix_from_json(j["M"].dump()),
                                 int_matrix_from_json(j["L"].dump()),
                                 int_matrix_from_json(j["S"].dump())};
}

std::string decomposition_to_json(const RigidityDecomposition& dec) {
    json j{{"M", json::parse(matrix_to_json(dec.m))},
           {"L", json::parse(matrix_to_json(dec.l))},
           {"S", json::parse(matrix_to_json(dec.s))}};
    return j.dump();
}

}  // namespace logrank
