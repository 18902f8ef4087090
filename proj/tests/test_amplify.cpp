#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logrank/amplify.hpp"
#include "logrank/errors.hpp"
#include "logrank/game.hpp"
#include "logrank/util.hpp"

#include <algorithm>
#include <map>

using namespace logrank;

namespace {

SignMatrix mk(int n, int m, std::initializer_list<int> vals) {
    std::vector<std::int8_t> e;
    for (int v : vals) e.push_back(std::int8_t(v));
    return SignMatrix(n, m, std::move(e));
}

}  // namespace

TEST_CASE("four_split covers the grid disjointly") {
    Rectangle full = Rectangle::full(3, 4);
    auto parts = four_split(full, 3, 4);
    CHECK(parts[0] == full);
    CHECK(parts[1].empty());
    CHECK(parts[2].empty());
    CHECK(parts[3].empty());

    Rectangle cell{{0}, {0}};
    auto p2 = four_split(cell, 2, 2);
    for (const auto& p : p2) CHECK(p.area() == 1);

    SplitMix64 rng(13);
    for (int it = 0; it < 20; ++it) {
        int n = 2 + int(rng.next() % 4), m = 2 + int(rng.next() % 4);
        Rectangle r;
        for (int i = 0; i < n; ++i)
            if (rng.next() & 1) r.rows.push_back(i);
        for (int j = 0; j < m; ++j)
            if (rng.next() & 1) r.cols.push_back(j);
        auto parts3 = four_split(r, n, m);
        std::size_t total = 0;
        std::map<std::pair<int, int>, int> seen;
        for (const auto& p : parts3) {
            total += p.area();
            for (int i : p.rows)
                for (int j : p.cols) seen[{i, j}]++;
        }
        CHECK(total == std::size_t(n) * m);
        for (auto& [cell2, count] : seen) CHECK(count == 1);
    }
}

TEST_CASE("four_split average consistency") {
    // mu-weighted averages over the four parts recombine to the global average
    SplitMix64 rng(77);
    SignMatrix f = gen_random_low_rank(4, 5, 2, 5);
    EntryDistribution mu = EntryDistribution::uniform(4, 5);
    Rectangle r{{0, 2}, {1, 3, 4}};
    auto parts = four_split(r, 4, 5);
    Rational total;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        Rational mass = mu.mass(p);
        if (mass.is_zero()) continue;
        total += mass * average(f, mu, p);
    }
    Rational global;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 5; ++j)
            global += f.at(i, j) > 0 ? mu.at(i, j) : -mu.at(i, j);
    CHECK(total == global);
    (void)rng;
}

TEST_CASE("choose_t examples") {
    SeparationStats s;
    s.p = Rational(1);
    s.q = Rational(0);
    CHECK(choose_t(s, Rational(1, 2)) == 1);

    s.p = Rational(1);
    s.q = Rational(1, 2);
    CHECK(choose_t(s, Rational(1, 2)) == 2);  // smallest t with 2^-t <= 1/4

    s.p = Rational(9, 10);
    s.q = Rational(6, 10);
    CHECK(choose_t(s, Rational(1, 100)) == 14);  // smallest t with (2/3)^t <= 1/200

    s.p = Rational(1, 2);
    s.q = Rational(1, 2);
    CHECK_THROWS_AS(choose_t(s, Rational(1, 4)), PreconditionError);
}

TEST_CASE("separating distribution for an almost-constant matrix") {
    // one -1 cell: rectangles containing all +1 cells except that cell's
    // row/column give margin 1
    SignMatrix f = mk(2, 2, {1, 1, 1, -1});
    SeparatingBuild b = build_separating_distribution(f, Rational(1, 2));
    CHECK(b.converged);
    CHECK(b.stats.margin >= Rational(2, 3) * Rational(1, 2) - Rational(1, 100000));
    CHECK(b.stats.margin <= Rational(1));
    // stats consistency: recompute p and q from the support
    Rational p(1), q(0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Rational v = b.rho.inclusion_probability(i, j);
            if (f.at(i, j) > 0) p = std::min(p, v);
            else q = std::max(q, v);
        }
    CHECK(p == b.stats.p);
    CHECK(q == b.stats.q);
    CHECK(b.rho.total_weight() == Rational(1));
}

TEST_CASE("separating distribution margin vs exact pair-game value on IP_1") {
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    DiscrepancyCertificate cert = disc_game(ip1, 1e-9, 200);
    SeparatingBuild b = build_separating_distribution(ip1, cert.lower);
    CHECK(b.converged);
    CHECK(b.stats.margin >= Rational(2, 3) * cert.lower - Rational::from_double(1e-4));

    // ground truth: the full rectangle-vs-pair game solved exactly
    std::vector<std::pair<int, int>> plus, minus;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            (ip1.at(i, j) > 0 ? plus : minus).push_back({i, j});
    std::vector<std::vector<Rational>> payoff;
    for (std::uint64_t rm = 1; rm < 4; ++rm) {
        for (std::uint64_t cm = 1; cm < 4; ++cm) {
            Rectangle r{mask_to_indices(rm), mask_to_indices(cm)};
            std::vector<Rational> row;
            for (const auto& pc : plus)
                for (const auto& mc : minus)
                    row.push_back(Rational(int(r.contains(pc.first, pc.second)) -
                                           int(r.contains(mc.first, mc.second))));
            payoff.push_back(std::move(row));
        }
    }
    Rational game_value = solve_zero_sum(payoff).value;
    // the achieved margin can never beat the game value
    CHECK(b.stats.margin <= game_value);
    CHECK(game_value >= Rational(2, 3) * cert.lower);
}

TEST_CASE("margin never exceeds 1") {
    SplitMix64 rng(5);
    for (int it = 0; it < 6; ++it) {
        SignMatrix f = gen_random_low_rank(4, 4, 2, rng.next());
        if (f.is_constant()) continue;
        SeparatingBuild b = build_separating_distribution(f, Rational(1, 10));
        CHECK(b.stats.margin <= Rational(1));
        CHECK(b.stats.p <= Rational(1));
        CHECK(b.stats.q >= Rational(0));
    }
}

TEST_CASE("amplify on constant matrices returns the full rectangle") {
    EntryDistribution mu = EntryDistribution::uniform(3, 3);
    AmplifyOptions opt;
    opt.eps = Rational(1, 4);

    AmplifyResult plus = amplify(SignMatrix::constant(3, 3, 1), mu, opt);
    CHECK(plus.rect == Rectangle::full(3, 3));
    CHECK(plus.mu_mass == Rational(1));
    CHECK(plus.cond_avg == Rational(1));

    AmplifyResult minus = amplify(SignMatrix::constant(3, 3, -1), mu, opt);
    CHECK(minus.rect == Rectangle::full(3, 3));
    CHECK(minus.cond_avg == Rational(-1));
    CHECK(minus.sign == -1);
}

TEST_CASE("amplify on IP_2 satisfies both acceptance predicates") {
    SignMatrix ip2 = gen_inner_product(2);
    EntryDistribution mu = EntryDistribution::uniform(4, 4);
    AmplifyOptions opt;
    opt.eps = Rational(1, 4);
    opt.seed = 42;
    AmplifyResult r = amplify(ip2, mu, opt);
    CHECK(r.minority_mass <= opt.eps * r.mu_mass);
    CHECK(r.mu_mass >= pow(r.stats.p, unsigned(r.t)) / Rational(4));
    CHECK(r.cond_avg.abs() >= Rational(1) - Rational(2) * opt.eps);
    CHECK(!r.rect.empty());
    // determinism
    AmplifyResult r2 = amplify(ip2, mu, opt);
    CHECK(r2.rect == r.rect);
    CHECK(r2.trials_used == r.trials_used);
    CHECK(r2.mu_mass == r.mu_mass);
}

TEST_CASE("amplify respects the orientation reduction") {
    // mostly -1 matrix: E[f] < 0, so the result is a mostly -1 rectangle
    SignMatrix f = mk(3, 3, {-1, -1, -1, -1, -1, -1, -1, -1, 1});
    EntryDistribution mu = EntryDistribution::uniform(3, 3);
    AmplifyOptions opt;
    opt.eps = Rational(1, 8);
    opt.seed = 7;
    AmplifyResult r = amplify(f, mu, opt);
    CHECK(r.sign == -1);
    CHECK(r.cond_avg <= Rational(-3, 4));
    CHECK(r.minority_mass <= opt.eps * r.mu_mass);
}

TEST_CASE("amplify intersection masses are monotone along the sample path") {
    SignMatrix ip2 = gen_inner_product(2);
    SeparatingBuild b = build_separating_distribution(ip2, disc_game(ip2).lower);
    // direct check of the monotone-intersection invariant on a fixed path
    SplitMix64 rng(99);
    EntryDistribution mu = EntryDistribution::uniform(4, 4);
    Rectangle acc = Rectangle::full(4, 4);
    Rational last(1);
    for (int k = 0; k < 4; ++k) {
        std::size_t pick = rng.next_below(b.rho.support.size());
        Rectangle nxt;
        const Rectangle& s = b.rho.support[pick].first;
        std::set_intersection(acc.rows.begin(), acc.rows.end(), s.rows.begin(), s.rows.end(),
                              std::back_inserter(nxt.rows));
        std::set_intersection(acc.cols.begin(), acc.cols.end(), s.cols.begin(), s.cols.end(),
                              std::back_inserter(nxt.cols));
        acc = nxt;
        Rational mass = acc.empty() ? Rational(0) : mu.mass(acc);
        CHECK(mass <= last);
        last = mass;
    }
}

TEST_CASE("derandomized existence check on a small matrix") {
    // enumerate all t-tuples of support rectangles with multiplicity and
    // confirm some tuple achieves T > 0, realizing E[T] >= p^t/4 > 0
    SignMatrix ip1 = mk(2, 2, {1, 1, 1, -1});
    DiscrepancyCertificate cert = disc_game(ip1, 1e-9, 200);
    SeparatingBuild b = build_separating_distribution(ip1, cert.lower);
    SeparationStats s = b.stats;
    Rational eps(1, 4);
    int t = choose_t(s, eps);
    REQUIRE(t <= 6);
    REQUIRE(b.rho.support.size() <= 12);

    EntryDistribution mu = EntryDistribution::uniform(2, 2);
    std::vector<std::size_t> idx(std::size_t(t), 0);
    Rational expected_T;
    bool exists_positive = false;
    while (true) {
        Rational prob(1);
        Rectangle acc = Rectangle::full(2, 2);
        for (int k = 0; k < t; ++k) {
            const auto& [r, w] = b.rho.support[idx[std::size_t(k)]];
            prob *= w;
            Rectangle nxt;
            std::set_intersection(acc.rows.begin(), acc.rows.end(), r.rows.begin(), r.rows.end(),
                                  std::back_inserter(nxt.rows));
            std::set_intersection(acc.cols.begin(), acc.cols.end(), r.cols.begin(), r.cols.end(),
                                  std::back_inserter(nxt.cols));
            acc = nxt;
        }
        Rational mass, minority;
        for (int i : acc.rows)
            for (int j : acc.cols) {
                mass += mu.at(i, j);
                if (ip1.at(i, j) < 0) minority += mu.at(i, j);
            }
        Rational T = mass - minority / eps;
        expected_T += prob * T;
        if (T.sign() > 0) exists_positive = true;

        int k = t - 1;
        while (k >= 0 && idx[std::size_t(k)] + 1 == b.rho.support.size()) {
            idx[std::size_t(k)] = 0;
            --k;
        }
        if (k < 0) break;
        ++idx[std::size_t(k)];
    }
    CHECK(exists_positive);
    CHECK(expected_T >= pow(s.p, unsigned(t)) / Rational(4));
}

TEST_CASE("constant matrix rejects separation build") {
    CHECK_THROWS_AS(
        (void)build_separating_distribution(SignMatrix::constant(2, 2, 1), Rational(1, 2)),
        PreconditionError);
}

TEST_CASE("amplify exhaustion carries the best attempt") {
    SignMatrix ip2 = gen_inner_product(2);
    EntryDistribution mu = EntryDistribution::uniform(4, 4);
    AmplifyOptions opt;
    opt.eps = Rational(1, 4);
    opt.seed = 1;
    opt.max_trials = 0;
    try {
        (void)amplify(ip2, mu, opt);
        FAIL("expected AmplifyExhausted");
    } catch (const AmplifyExhausted& ex) {
        CHECK(ex.best.t >= 1);
        CHECK(ex.best.trials_used == 0);
    }
}
