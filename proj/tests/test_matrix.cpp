#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logrank/errors.hpp"
#include "logrank/matrix.hpp"
#include "logrank/rank.hpp"
#include "logrank/util.hpp"

#include <cmath>
#include <vector>

using namespace logrank;

namespace {

// Floating-point rank oracle: Gaussian elimination with partial pivoting and
// a fixed threshold. Test-only; independent of the exact path.
int float_rank(const SignMatrix& m, double threshold = 1e-9) {
    int n = m.n_rows(), c = m.n_cols();
    std::vector<std::vector<double>> a(n, std::vector<double>(c));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) a[i][j] = m.at(i, j);
    int rank = 0;
    for (int col = 0; col < c && rank < n; ++col) {
        int piv = -1;
        double best = threshold;
        for (int i = rank; i < n; ++i)
            if (std::fabs(a[i][col]) > best) {
                best = std::fabs(a[i][col]);
                piv = i;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int i = rank + 1; i < n; ++i) {
            double f = a[i][col] / a[rank][col];
            for (int j = col; j < c; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

SignMatrix mk(int n, int m, std::initializer_list<int> vals) {
    std::vector<std::int8_t> e;
    for (int v : vals) e.push_back(std::int8_t(v));
    return SignMatrix(n, m, std::move(e));
}

}  // namespace

TEST_CASE("load_matrix parses the +/- format") {
    SignMatrix m = load_matrix("+-\n-+\n");
    CHECK(m.n_rows() == 2);
    CHECK(m.n_cols() == 2);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == -1);
    CHECK(m.at(1, 0) == -1);
    CHECK(m.at(1, 1) == 1);

    SignMatrix ones = load_matrix("++\n++");
    CHECK(ones.is_constant());
    CHECK(ones.constant_value() == 1);

    SignMatrix tok = load_matrix("1 -1\n-1 1\n");
    CHECK(tok == m);
}

TEST_CASE("load_matrix error paths") {
    CHECK_THROWS_AS((void)load_matrix("+-\n-"), ParseError);
    CHECK_THROWS_AS((void)load_matrix(""), ParseError);
    CHECK_THROWS_AS((void)load_matrix("+?\n"), ParseError);
    try {
        (void)load_matrix("+-\n-");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("save/load round trip") {
    SignMatrix m = gen_inner_product(2);
    CHECK(load_matrix(save_matrix(m)) == m);
}

TEST_CASE("rank_exact basics") {
    CHECK(rank_exact(SignMatrix::constant(4, 4, 1)) == 1);
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    CHECK(rank_exact(ip1) == 2);
    // duplicate rows do not change rank
    SignMatrix dup = mk(3, 2, {1, -1, 1, -1, -1, 1});
    CHECK(rank_exact(dup) == rank_exact(mk(2, 2, {1, -1, -1, 1})));
}

TEST_CASE("rank_exact matches floating rank on IP_2 and random matrices") {
    SignMatrix ip2 = gen_inner_product(2);
    CHECK(rank_exact(ip2) == 4);
    CHECK(float_rank(ip2) == 4);
    SplitMix64 rng(3);
    for (int it = 0; it < 40; ++it) {
        int n = 2 + int(rng.next() % 6), m = 2 + int(rng.next() % 6);
        std::vector<std::int8_t> e(std::size_t(n) * m);
        for (auto& x : e) x = rng.next() & 1 ? 1 : -1;
        SignMatrix f(n, m, std::move(e));
        CHECK(rank_exact(f) == float_rank(f));
    }
}

TEST_CASE("rank is hereditary and transpose-invariant") {
    SplitMix64 rng(17);
    for (int it = 0; it < 30; ++it) {
        SignMatrix f = gen_random_low_rank(6, 7, 1 + int(rng.next() % 4), rng.next());
        CHECK(rank_exact(f) == rank_exact(f.transpose()));
        Rectangle r;
        for (int i = 0; i < 6; ++i)
            if (rng.next() & 1) r.rows.push_back(i);
        for (int j = 0; j < 7; ++j)
            if (rng.next() & 1) r.cols.push_back(j);
        if (r.empty()) continue;
        CHECK(rank_exact(restrict(f, r)) <= rank_exact(f));
    }
}

TEST_CASE("dedupe removes duplicates and preserves rank") {
    SignMatrix allsame = SignMatrix::constant(2, 2, 1);
    DedupeResult d = dedupe(allsame);
    CHECK(d.matrix.n_rows() == 1);
    CHECK(d.matrix.n_cols() == 1);
    CHECK(d.row_map == std::vector<int>{0, 0});

    SignMatrix distinct = gen_inner_product(2);
    DedupeResult d2 = dedupe(distinct);
    CHECK(d2.matrix == distinct);
    CHECK(d2.row_map == std::vector<int>{0, 1, 2, 3});

    SignMatrix rrs = mk(3, 2, {1, -1, 1, -1, -1, 1});
    DedupeResult d3 = dedupe(rrs);
    CHECK(d3.matrix.n_rows() == 2);
    CHECK(d3.row_map == std::vector<int>{0, 0, 1});

    SplitMix64 rng(23);
    for (int it = 0; it < 20; ++it) {
        SignMatrix f = gen_random_low_rank(8, 8, 1 + int(rng.next() % 3), rng.next());
        DedupeResult dd = dedupe(f);
        int r = rank_exact(f);
        CHECK(rank_exact(dd.matrix) == r);
        // deduped sign matrices have at most 2^{2r} rows and columns
        CHECK(dd.matrix.n_rows() <= (1 << (2 * r)));
        CHECK(dd.matrix.n_cols() <= (1 << (2 * r)));
        for (int i = 0; i < f.n_rows(); ++i)
            for (int j = 0; j < f.n_cols(); ++j)
                CHECK(f.at(i, j) == dd.matrix.at(dd.row_map[i], dd.col_map[j]));
    }
}

TEST_CASE("restrict basics") {
    SignMatrix m = mk(2, 2, {1, -1, -1, 1});
    CHECK(restrict(m, Rectangle::full(2, 2)) == m);
    Rectangle r{{0}, {0, 1}};
    SignMatrix sub = restrict(m, r);
    CHECK(sub.n_rows() == 1);
    CHECK(sub.at(0, 0) == 1);
    CHECK(sub.at(0, 1) == -1);
    CHECK_THROWS_AS((void)restrict(m, Rectangle{}), PreconditionError);
    CHECK_THROWS_AS((void)restrict(m, Rectangle{{0, 5}, {0}}), PreconditionError);
}

TEST_CASE("average basics") {
    SignMatrix ones = SignMatrix::constant(3, 3, 1);
    EntryDistribution mu = EntryDistribution::uniform(3, 3);
    CHECK(average(ones, mu, Rectangle::full(3, 3)) == Rational(1));

    SignMatrix m = mk(2, 2, {1, -1, -1, 1});
    EntryDistribution u = EntryDistribution::uniform(2, 2);
    CHECK(average(m, u, Rectangle::full(2, 2)).is_zero());
    CHECK(average(m, u, Rectangle{{0}, {0, 1}}).is_zero());

    // conditioning on a null event
    std::vector<Rational> w(4);
    w[0] = Rational(1);
    EntryDistribution point(2, 2, w);
    CHECK_THROWS_AS((void)average(m, point, Rectangle{{1}, {1}}), PreconditionError);
}

TEST_CASE("gen_inner_product") {
    SignMatrix ip1 = gen_inner_product(1);
    CHECK(ip1 == mk(2, 2, {1, 1, 1, -1}));
    for (int k = 1; k <= 4; ++k) {
        SignMatrix ip = gen_inner_product(k);
        CHECK(rank_exact(ip) == (1 << k));
        for (int y = 0; y < ip.n_cols(); ++y) CHECK(ip.at(0, y) == 1);  // x = 0 row
    }
    CHECK_THROWS_AS((void)gen_inner_product(7), CapError);
}

TEST_CASE("gen_random_low_rank") {
    SignMatrix one = gen_random_low_rank(5, 6, 1, 99);
    CHECK(rank_exact(one) == 1);
    SplitMix64 rng(31);
    for (int it = 0; it < 20; ++it) {
        int n = 3 + int(rng.next() % 8), m = 3 + int(rng.next() % 8);
        int r = 1 + int(rng.next() % std::min(n, m));
        std::uint64_t seed = rng.next();
        SignMatrix a = gen_random_low_rank(n, m, r, seed);
        CHECK(rank_exact(a) <= r);
        CHECK(a == gen_random_low_rank(n, m, r, seed));  // determinism
        SignMatrix b = gen_random_low_rank(n, m, r, seed, LowRankMode::kBoolProduct);
        CHECK(rank_exact(b) <= r);
        CHECK(b == gen_random_low_rank(n, m, r, seed, LowRankMode::kBoolProduct));
    }
    CHECK_THROWS_AS((void)gen_random_low_rank(3, 3, 4, 0), PreconditionError);
}

TEST_CASE("gen_rigidity_example") {
    IntMatrix i4 = gen_rigidity_example(4, 1);
    CHECK(i4.n_rows() == 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(i4.at(a, b) == (a == b ? 1 : 0));

    IntMatrix m = gen_rigidity_example(4, 2);
    CHECK(m.n_rows() == 6);
    // disjoint supports: {0,1} vs {2,3} -> index 0 and index 5 in lex order
    CHECK(m.at(0, 5) == 0);
    CHECK(m.at(5, 0) == 0);
    for (int a = 0; a < 6; ++a) CHECK(m.at(a, a) == 2);
    CHECK(rank_exact(m) <= 4);

    IntMatrix big = gen_rigidity_example(16, 2);
    CHECK(big.n_rows() == 120);
    CHECK(rank_exact(big) == 16);
    CHECK_THROWS_AS((void)gen_rigidity_example(40, 6), CapError);
}

TEST_CASE("JSON round trip") {
    SignMatrix m = gen_inner_product(2);
    CHECK(sign_matrix_from_json(matrix_to_json(m)) == m);
    IntMatrix im = gen_rigidity_example(4, 2);
    CHECK(int_matrix_from_json(matrix_to_json(im)) == im);
    CHECK_THROWS_AS((void)sign_matrix_from_json("{"), ParseError);
    CHECK_THROWS_AS((void)sign_matrix_from_json(R"({"rows":1,"cols":1,"entries":[[2]]})"), ParseError);
}

TEST_CASE("weight_w_subsets and binomial") {
    auto s = weight_w_subsets(4, 2);
    CHECK(s.size() == 6);
    CHECK(s[0] == std::vector<int>{0, 1});
    CHECK(s[5] == std::vector<int>{2, 3});
    CHECK(binomial(16, 2) == 120);
    CHECK(binomial(8, 2) == 28);
}

TEST_CASE("rectangle helpers") {
    Rectangle r{{2, 0, 2}, {1}};
    r.normalize();
    CHECK(r.rows == std::vector<int>{0, 2});
    CHECK(complement(r.rows, 4) == std::vector<int>{1, 3});
    CHECK(lex_less({0, 2}, {1, 2}));
    CHECK(lex_less({0}, {0, 1}));
    CHECK(!lex_less({0, 1}, {0}));
    CHECK(mask_to_indices(0b1010) == std::vector<int>{1, 3});
    CHECK(indices_to_mask({1, 3}) == 0b1010u);
}
