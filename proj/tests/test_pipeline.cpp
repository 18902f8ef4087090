#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logrank/pipeline.hpp"
#include "logrank/rank.hpp"

#include <json.hpp>

#include <set>

using namespace logrank;

TEST_CASE("standard corpus shape") {
    std::vector<CorpusEntry> corpus = standard_corpus();
    CHECK(corpus.size() >= 50);
    std::set<int> ranks;
    std::set<std::string> names;
    for (const CorpusEntry& e : corpus) {
        CHECK(e.matrix.n_rows() <= 12);
        CHECK(e.matrix.n_cols() <= 12);
        int r = rank_exact(e.matrix);
        CHECK(r <= 8);
        ranks.insert(r);
        CHECK(names.insert(e.name).second);  // unique names
    }
    for (int r = 1; r <= 8; ++r) CHECK(ranks.count(r) == 1);

    // deterministic regeneration
    std::vector<CorpusEntry> again = standard_corpus();
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i].matrix == again[i].matrix);
}

TEST_CASE("prove on a constant matrix") {
    ProveReport rep = prove(SignMatrix::constant(3, 4, 1));
    CHECK(rep.rows == 1);
    CHECK(rep.cols == 1);
    CHECK(rep.rank == 1);
    CHECK(rep.verify_built.pass);
    CHECK(rep.verify_balanced.pass);
    CHECK(rep.complexity.depth == 0);
    CHECK(rep.complexity.leaves == 1);
}

TEST_CASE("prove on IP_2 produces a verified protocol with full reporting") {
    ProveReport rep = prove(gen_inner_product(2));
    CHECK(rep.rank == 4);
    CHECK(rep.eps == Rational(1, 8));
    CHECK(rep.disc.converged);
    CHECK(rep.verify_built.pass);
    CHECK(rep.verify_balanced.pass);
    REQUIRE(rep.complexity.exact_cc.has_value());
    CHECK(*rep.complexity.exact_cc <= rep.complexity.balanced_depth);
    CHECK(rep.amplified.minority_mass * Rational(4 * rep.rank) <= rep.amplified.mu_mass);
    CHECK(rep.extraction.output_rect.area() * 8 >= rep.amplified.rect.area());
    CHECK(rep.complexity.balanced_depth <= rep.complexity.sqrt_bound);

    // the JSON summary parses and carries the key fields
    nlohmann::json j = nlohmann::json::parse(prove_report_to_json(rep, "ip2"));
    CHECK(j["kind"] == "prove");
    CHECK(j["rank"] == 4);
    CHECK(j["verified"] == true);
    CHECK(j["balanced_depth"].get<int>() >= 1);
    CHECK(j["tree"].contains("children"));
}

TEST_CASE("prove is deterministic for a fixed seed") {
    SignMatrix f = gen_random_low_rank(6, 6, 3, 77);
    ProveOptions opt;
    opt.seed = 5;
    ProveReport a = prove(f, opt);
    ProveReport b = prove(f, opt);
    CHECK(a.amplified.rect == b.amplified.rect);
    CHECK(a.complexity.depth == b.complexity.depth);
    CHECK(a.complexity.balanced_depth == b.complexity.balanced_depth);
    CHECK(prove_report_to_json(a, "x") == prove_report_to_json(b, "x"));
}

TEST_CASE("pipeline finder resolves nodes and maps coordinates correctly") {
    SignMatrix f = dedupe(gen_random_low_rank(7, 7, 3, 11)).matrix;
    FinderStats stats;
    BuildResult b = build_protocol(f, pipeline_mono_finder(3, &stats));
    CHECK(verify_protocol(f, b.tree).pass);
    CHECK(stats.pipeline_nodes + stats.fallback_nodes >= 1);
}

TEST_CASE("round12 snaps to 12 significant digits") {
    CHECK(round12(0.3333333333333333) == doctest::Approx(0.333333333333).epsilon(1e-15));
    CHECK(round12(1.0) == 1.0);
    CHECK(round12(0.125) == 0.125);
}
