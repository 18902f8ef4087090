#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logrank/errors.hpp"
#include "logrank/mono.hpp"
#include "logrank/protocol.hpp"
#include "logrank/rank.hpp"
#include "logrank/util.hpp"

using namespace logrank;

namespace {

SignMatrix mk(int n, int m, std::initializer_list<int> vals) {
    std::vector<std::int8_t> e;
    for (int v : vals) e.push_back(std::int8_t(v));
    return SignMatrix(n, m, std::move(e));
}

// finder backed by the exhaustive monochromatic search
Rectangle brute_finder(const SignMatrix& f, const Rectangle& domain) {
    SignMatrix sub = restrict(f, domain);
    MaxMonoResult r = brute_force_max_mono(sub);
    Rectangle out;
    for (int i : r.rect.rows) out.rows.push_back(domain.rows[std::size_t(i)]);
    for (int j : r.rect.cols) out.cols.push_back(domain.cols[std::size_t(j)]);
    return out;
}

// comb-shaped tree over a 1 x m all-ones matrix: depth = leaves - 1
ProtocolTree comb_tree(int m) {
    ProtocolTree t;
    // peel one column at a time
    std::function<int(std::vector<int>)> rec = [&](std::vector<int> cols) -> int {
        Rectangle dom{{0}, cols};
        if (cols.size() == 1) return t.add_leaf(dom, 1);
        std::vector<int> first{cols.front()};
        std::vector<int> rest(cols.begin() + 1, cols.end());
        int c0 = t.add_leaf(Rectangle{{0}, first}, 1);
        int c1 = rec(rest);
        return t.add_internal(dom, 1, first, rest, c0, c1);
    };
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
    t.set_root(rec(all));
    return t;
}

}  // namespace

TEST_CASE("constant matrix builds a single leaf") {
    SignMatrix ones = SignMatrix::constant(1, 1, 1);
    BuildResult b = build_protocol(ones, brute_finder);
    CHECK(b.tree.leaf_count() == 1);
    CHECK(b.tree.depth() == 0);
    CHECK(verify_protocol(ones, b.tree).pass);
    CHECK(run_protocol(b.tree, 0, 0).value == 1);
    CHECK(run_protocol(b.tree, 0, 0).transcript.empty());
}

TEST_CASE("IP_1 protocol: at most 3 leaves, verified, exact_cc = 2") {
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    BuildResult b = build_protocol(ip1, brute_finder);
    CHECK(b.tree.leaf_count() <= 3);
    VerifyReport rep = verify_protocol(ip1, b.tree);
    CHECK(rep.pass);
    CHECK(exact_cc(ip1) == 2);
    CHECK(exact_cc(ip1) <= b.tree.depth());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            RunResult r = run_protocol(b.tree, x, y);
            CHECK(r.value == ip1.at(x, y));
            CHECK(int(r.transcript.size()) <= b.tree.depth());
        }
}

TEST_CASE("build requires deduped input") {
    SignMatrix dup = mk(2, 2, {1, 1, 1, 1});
    CHECK_THROWS_AS((void)build_protocol(dup, brute_finder), PreconditionError);
}

TEST_CASE("rank split invariant holds at every internal node") {
    SplitMix64 rng(8);
    for (int it = 0; it < 10; ++it) {
        SignMatrix raw = gen_random_low_rank(7, 7, 2 + int(rng.next() % 3), rng.next());
        SignMatrix f = dedupe(raw).matrix;
        if (f.n_rows() < 2 || f.n_cols() < 2) continue;
        BuildResult b = build_protocol(f, brute_finder);
        CHECK(verify_protocol(f, b.tree).pass);
        for (const BuildNodeStats& st : b.stats) {
            CHECK(st.rank_s + st.rank_p <= st.rank + 1);
            CHECK(st.chosen_half_rank <= 1 + (st.row_split ? st.rank_s : st.rank_p));
        }
    }
}

TEST_CASE("balance keeps the function and compresses a comb") {
    ProtocolTree comb = comb_tree(8);
    SignMatrix row_ones = SignMatrix::constant(1, 8, 1);
    REQUIRE(verify_protocol(row_ones, comb).pass);
    CHECK(comb.depth() == 7);
    CHECK(comb.leaf_count() == 8);

    ProtocolTree bal = balance(comb);
    CHECK(verify_protocol(row_ones, bal).pass);
    // type-level bound: K ceil(log2 leaves) + K with K = 3
    CHECK(bal.depth() <= 3 * 3 + 3);
    // the stated balance bound with the log_{3/2} window
    CHECK(bal.depth() <= 18);
    for (int y = 0; y < 8; ++y)
        CHECK(run_protocol(bal, 0, y).value == run_protocol(comb, 0, y).value);

    // balancing twice still computes the same function
    ProtocolTree bal2 = balance(bal);
    CHECK(verify_protocol(row_ones, bal2).pass);
}

TEST_CASE("balance on a single leaf is a no-op") {
    ProtocolTree t;
    t.set_root(t.add_leaf(Rectangle::full(2, 2), -1));
    ProtocolTree b = balance(t);
    CHECK(b.leaf_count() == 1);
    CHECK(b.depth() == 0);
}

TEST_CASE("balance preserves extensional behavior on built protocols") {
    SplitMix64 rng(21);
    for (int it = 0; it < 8; ++it) {
        SignMatrix f = dedupe(gen_random_low_rank(8, 8, 3, rng.next())).matrix;
        if (f.n_rows() < 2 || f.n_cols() < 2) continue;
        BuildResult b = build_protocol(f, brute_finder);
        ProtocolTree bal = balance(b.tree);
        CHECK(verify_protocol(f, bal).pass);
        for (int x = 0; x < f.n_rows(); ++x)
            for (int y = 0; y < f.n_cols(); ++y)
                CHECK(run_protocol(bal, x, y).value == run_protocol(b.tree, x, y).value);
        CHECK(bal.depth() <= 3 * int(std::ceil(std::log2(double(b.tree.leaf_count())))) + 3);
    }
}

TEST_CASE("verify catches a flipped leaf") {
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    BuildResult b = build_protocol(ip1, brute_finder);
    // round-trip through JSON, then tamper with a leaf value
    std::string js = b.tree.to_json();
    ProtocolTree copy = ProtocolTree::from_json(js);
    REQUIRE(verify_protocol(ip1, copy).pass);

    std::size_t pos = js.find("\"leaf\":1");
    REQUIRE(pos != std::string::npos);
    std::string bad = js;
    bad.replace(pos, 8, "\"leaf\":-1");
    ProtocolTree tampered = ProtocolTree::from_json(bad);
    VerifyReport rep = verify_protocol(ip1, tampered);
    CHECK(!rep.pass);
    CHECK(rep.counterexample.has_value());
}

TEST_CASE("verify catches structural damage") {
    // overlapping children: both parts claim column 0
    ProtocolTree t;
    SignMatrix f = mk(1, 2, {1, -1});
    int c0 = t.add_leaf(Rectangle{{0}, {0}}, 1);
    int c1 = t.add_leaf(Rectangle{{0}, {0, 1}}, -1);
    t.set_root(t.add_internal(Rectangle::full(1, 2), 1, {0}, {0, 1}, c0, c1));
    VerifyReport rep = verify_protocol(f, t);
    CHECK(!rep.pass);
    CHECK(rep.reason.find("partition") != std::string::npos);
}

TEST_CASE("exact_cc basics") {
    CHECK(exact_cc(SignMatrix::constant(4, 4, -1)) == 0);
    CHECK(exact_cc(mk(2, 2, {1, 1, 1, -1})) == 2);
    CHECK_THROWS_AS((void)exact_cc(SignMatrix::constant(9, 9, 1)), CapError);
    // one split suffices when one side is constant after a row bit
    SignMatrix two_rows = mk(2, 2, {1, 1, -1, -1});
    CHECK(exact_cc(two_rows) == 1);
}

TEST_CASE("exact_cc lower-bounds every verified protocol") {
    SplitMix64 rng(55);
    for (int it = 0; it < 8; ++it) {
        SignMatrix f = dedupe(gen_random_low_rank(6, 6, 2 + int(rng.next() % 2), rng.next())).matrix;
        if (f.n_rows() < 2 || f.n_cols() < 2) continue;
        BuildResult b = build_protocol(f, brute_finder);
        ProtocolTree bal = balance(b.tree);
        int cc = exact_cc(f);
        CHECK(cc <= b.tree.depth());
        CHECK(cc <= bal.depth());
    }
}

TEST_CASE("complexity report fields") {
    SignMatrix ip2 = gen_inner_product(2);
    BuildResult b = build_protocol(ip2, brute_finder);
    ProtocolTree bal = balance(b.tree);
    ComplexityReport rep = complexity_report(ip2, b, bal);
    CHECK(rep.rank == 4);
    CHECK(rep.leaves <= (1 << rep.depth));
    CHECK(rep.exact_cc.has_value());
    CHECK(*rep.exact_cc <= rep.balanced_depth);
    CHECK(rep.sqrt_bound == doctest::Approx(32.0 * 2.0 * std::log2(5.0)));
    CHECK(rep.nw_bound > 0);
    CHECK(rep.c_meas.size() == 3);  // phases 0..ceil(log2 4)

    SignMatrix ones = SignMatrix::constant(1, 1, 1);
    BuildResult bc = build_protocol(ones, brute_finder);
    ComplexityReport rc = complexity_report(ones, bc, balance(bc.tree));
    CHECK(rc.depth == 0);
    CHECK(rc.leaves == 1);
}

TEST_CASE("protocol JSON round trip") {
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    BuildResult b = build_protocol(ip1, brute_finder);
    ProtocolTree copy = ProtocolTree::from_json(b.tree.to_json());
    CHECK(verify_protocol(ip1, copy).pass);
    CHECK(copy.leaf_count() == b.tree.leaf_count());
    CHECK(copy.depth() == b.tree.depth());
    CHECK_THROWS_AS((void)ProtocolTree::from_json("{}"), ParseError);
    CHECK_THROWS_AS((void)ProtocolTree::from_json("not json"), ParseError);
}

TEST_CASE("build rejects a finder that returns non-monochromatic rectangles") {
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    MonoFinder broken = [](const SignMatrix&, const Rectangle& domain) { return domain; };
    CHECK_THROWS_AS((void)build_protocol(ip1, broken), VerificationError);
}

TEST_CASE("balance stress: random trees stay equivalent and shallow") {
    SplitMix64 rng(909);
    for (int it = 0; it < 25; ++it) {
        int n = 2 + int(rng.next() % 6), m = 2 + int(rng.next() % 6);
        std::vector<std::int8_t> e(std::size_t(n) * m);
        for (auto& x : e) x = rng.next() & 1 ? 1 : -1;
        SignMatrix f(n, m, std::move(e));

        // random valid protocol tree: split on a random side at a random
        // point until the domain is monochromatic
        ProtocolTree t;
        std::function<int(Rectangle)> grow = [&](Rectangle dom) -> int {
            if (f.monochromatic_on(dom)) return t.add_leaf(dom, f.at(dom.rows[0], dom.cols[0]));
            bool row_side = dom.rows.size() >= 2 && (dom.cols.size() < 2 || (rng.next() & 1));
            const std::vector<int>& side = row_side ? dom.rows : dom.cols;
            std::size_t cut = 1 + rng.next_below(side.size() - 1);
            std::vector<int> part0(side.begin(), side.begin() + long(cut));
            std::vector<int> part1(side.begin() + long(cut), side.end());
            Rectangle d0 = row_side ? Rectangle{part0, dom.cols} : Rectangle{dom.rows, part0};
            Rectangle d1 = row_side ? Rectangle{part1, dom.cols} : Rectangle{dom.rows, part1};
            int c0 = grow(d0);
            int c1 = grow(d1);
            return t.add_internal(dom, row_side ? 0 : 1, std::move(part0), std::move(part1), c0,
                                  c1);
        };
        t.set_root(grow(Rectangle::full(n, m)));
        REQUIRE(verify_protocol(f, t).pass);

        ProtocolTree bal = balance(t);
        CHECK(verify_protocol(f, bal).pass);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < m; ++y)
                CHECK(run_protocol(bal, x, y).value == run_protocol(t, x, y).value);
        int leaves = t.leaf_count();
        CHECK(bal.depth() <= 3 * int(std::ceil(std::log2(double(std::max(leaves, 2))))) + 3);
    }
}
