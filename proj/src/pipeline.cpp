#include "logrank/pipeline.hpp"

#include "logrank/errors.hpp"
#include "logrank/rank.hpp"
#include "logrank/util.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace logrank {

using nlohmann::json;

std::vector<CorpusEntry> standard_corpus() {
    std::vector<CorpusEntry> out;
    auto fixture = [&](const std::string& name, const char* text) {
        out.push_back(CorpusEntry{name, load_matrix(text), 0, 0});
    };

    for (int k = 1; k <= 3; ++k)
        out.push_back(CorpusEntry{"ip" + std::to_string(k), gen_inner_product(k), 1 << k, 0});

    fixture("ones4", "++++\n++++\n++++\n++++\n");
    fixture("minus3x5", "-----\n-----\n-----\n");
    fixture("diag3", "+--\n-+-\n--+\n");
    fixture("xor2", "+-\n-+\n");
    fixture("band4", "++--\n-++-\n--++\n+--+\n");
    fixture("rect2x3", "++-\n-++\n");
    fixture("row1x4", "+-+-\n");
    fixture("steps5", "+++++\n-++++\n--+++\n---++\n----+\n");

    struct GenSpec {
        int n, m, r;
        std::uint64_t seed;
        LowRankMode mode;
    };
    const GenSpec specs[] = {
        {4, 4, 1, 101, LowRankMode::kPatternRows},
        {4, 4, 2, 102, LowRankMode::kPatternRows},
        {4, 6, 3, 103, LowRankMode::kPatternRows},
        {5, 4, 2, 104, LowRankMode::kPatternRows},
        {5, 5, 3, 105, LowRankMode::kPatternRows},
        {5, 5, 4, 106, LowRankMode::kPatternRows},
        {5, 7, 2, 107, LowRankMode::kPatternRows},
        {6, 5, 4, 108, LowRankMode::kPatternRows},
        {6, 6, 2, 109, LowRankMode::kPatternRows},
        {6, 6, 5, 110, LowRankMode::kPatternRows},
        {6, 8, 3, 111, LowRankMode::kPatternRows},
        {7, 6, 5, 112, LowRankMode::kPatternRows},
        {7, 7, 4, 113, LowRankMode::kPatternRows},
        {7, 7, 6, 114, LowRankMode::kPatternRows},
        {7, 9, 2, 115, LowRankMode::kPatternRows},
        {8, 6, 4, 116, LowRankMode::kPatternRows},
        {8, 8, 3, 117, LowRankMode::kPatternRows},
        {8, 8, 5, 118, LowRankMode::kPatternRows},
        {8, 8, 7, 119, LowRankMode::kPatternRows},
        {8, 10, 4, 120, LowRankMode::kPatternRows},
        {9, 7, 5, 121, LowRankMode::kPatternRows},
        {9, 9, 2, 122, LowRankMode::kPatternRows},
        {9, 9, 6, 123, LowRankMode::kPatternRows},
        {9, 11, 4, 124, LowRankMode::kPatternRows},
        {10, 8, 6, 125, LowRankMode::kPatternRows},
        {10, 10, 3, 126, LowRankMode::kPatternRows},
        {10, 10, 5, 127, LowRankMode::kPatternRows},
        {10, 10, 7, 128, LowRankMode::kPatternRows},
        {10, 12, 4, 129, LowRankMode::kPatternRows},
        {11, 9, 5, 130, LowRankMode::kPatternRows},
        {11, 11, 4, 131, LowRankMode::kPatternRows},
        {11, 11, 8, 132, LowRankMode::kPatternRows},
        {12, 10, 6, 133, LowRankMode::kPatternRows},
        {12, 12, 5, 134, LowRankMode::kPatternRows},
        {12, 12, 8, 135, LowRankMode::kPatternRows},
        {4, 4, 2, 201, LowRankMode::kBoolProduct},
        {5, 6, 3, 202, LowRankMode::kBoolProduct},
        {6, 6, 4, 203, LowRankMode::kBoolProduct},
        {7, 7, 3, 204, LowRankMode::kBoolProduct},
        {8, 8, 5, 205, LowRankMode::kBoolProduct},
        {9, 9, 4, 206, LowRankMode::kBoolProduct},
    };
    for (const GenSpec& g : specs) {
        std::string mode = g.mode == LowRankMode::kPatternRows ? "lr" : "bp";
        std::string name = mode + std::to_string(g.n) + "x" + std::to_string(g.m) + "r" +
                           std::to_string(g.r) + "s" + std::to_string(g.seed);
        out.push_back(CorpusEntry{name, gen_random_low_rank(g.n, g.m, g.r, g.seed, g.mode), g.r,
                                  g.seed});
    }
    return out;
}

MonoFinder brute_mono_finder() {
    return [](const SignMatrix& f, const Rectangle& domain) {
        SignMatrix sub = restrict(f, domain);
        MaxMonoResult r = brute_force_max_mono(sub);
        Rectangle out;
        for (int i : r.rect.rows) out.rows.push_back(domain.rows[std::size_t(i)]);
        for (int j : r.rect.cols) out.cols.push_back(domain.cols[std::size_t(j)]);
        return out;
    };
}

MonoFinder greedy_mono_finder() {
    return [](const SignMatrix& f, const Rectangle& domain) {
        SignMatrix sub = restrict(f, domain);
        MaxMonoResult r = greedy_mono(sub);
        Rectangle out;
        for (int i : r.rect.rows) out.rows.push_back(domain.rows[std::size_t(i)]);
        for (int j : r.rect.cols) out.cols.push_back(domain.cols[std::size_t(j)]);
        return out;
    };
}

MonoFinder pipeline_mono_finder(std::uint64_t seed, FinderStats* stats, double disc_tol,
                                int disc_iters) {
    auto counter = std::make_shared<int>(0);
    return [seed, stats, disc_tol, disc_iters, counter](const SignMatrix& f,
                                                        const Rectangle& domain) {
        SignMatrix sub = restrict(f, domain);
        const int node = (*counter)++;
        auto map_back = [&](const Rectangle& local) {
            Rectangle out;
            for (int i : local.rows) out.rows.push_back(domain.rows[std::size_t(i)]);
            for (int j : local.cols) out.cols.push_back(domain.cols[std::size_t(j)]);
            return out;
        };
        try {
            int r = std::max(1, rank_exact(sub));
            DiscrepancyCertificate cert = disc_game(sub, disc_tol, disc_iters);
            if (cert.lower.sign() <= 0)
                throw ConvergenceError("pipeline finder: no positive discrepancy bound");
            AmplifyOptions opt;
            // eps = 1/(4r): an accepted rectangle then meets extract_mono's
            // minority bar directly
            opt.eps = Rational(1, 4ll * r);
            opt.seed = derive_seed(seed, std::uint64_t(node));
            opt.max_trials = 400;
            opt.delta_lb = cert.lower;
            EntryDistribution unif = EntryDistribution::uniform(sub.n_rows(), sub.n_cols());
            AmplifyResult am = amplify(sub, unif, opt);
            MonoExtraction ex = extract_mono(sub, am.rect, r);
            if (stats) ++stats->pipeline_nodes;
            return map_back(ex.output_rect);
        } catch (const Error&) {
            if (stats) ++stats->fallback_nodes;
            MaxMonoResult r = std::min(sub.n_rows(), sub.n_cols()) <= 20 ? brute_force_max_mono(sub)
                                                                         : greedy_mono(sub);
            return map_back(r.rect);
        }
    };
}

ProveReport prove(const SignMatrix& f, const ProveOptions& opt) {
    ProveReport rep;
    rep.seed = opt.seed;
    rep.original_rows = f.n_rows();
    rep.original_cols = f.n_cols();

    DedupeResult dd = dedupe(f);
    const SignMatrix& g = dd.matrix;
    rep.rows = g.n_rows();
    rep.cols = g.n_cols();
    rep.rank = rank_exact(g);

    rep.disc = disc_game(g, opt.tol, opt.max_iters);
    if (rep.disc.lower.sign() <= 0)
        throw ConvergenceError("prove: disc stage produced no positive lower bound");

    rep.eps = opt.eps.value_or(Rational(1, 2ll * rep.rank));
    EntryDistribution unif = EntryDistribution::uniform(g.n_rows(), g.n_cols());

    // amplify with the requested eps; tighten until the extraction bar
    // (minority fraction <= 1/(4r)) holds on the returned rectangle
    Rational eps = rep.eps;
    for (int halving = 0;; ++halving) {
        AmplifyOptions aopt;
        aopt.eps = eps;
        aopt.seed = opt.seed;
        aopt.max_trials = opt.max_trials;
        aopt.delta_lb = rep.disc.lower;
        rep.amplified = amplify(g, unif, aopt);
        if (rep.amplified.minority_mass * Rational(4ll * rep.rank) <= rep.amplified.mu_mass) break;
        if (halving >= 6)
            throw ConvergenceError("prove: could not reach the extraction bar by halving eps");
        eps /= Rational(2);
        ++rep.eps_halvings;
    }
    rep.extraction = extract_mono(g, rep.amplified.rect, rep.rank);

    rep.built = build_protocol(g, pipeline_mono_finder(opt.seed, &rep.finder));
    rep.balanced = balance(rep.built.tree);
    rep.verify_built = verify_protocol(g, rep.built.tree);
    rep.verify_balanced = verify_protocol(g, rep.balanced);
    rep.complexity = complexity_report(g, rep.built, rep.balanced);
    return rep;
}

double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::atof(buf);
}

namespace {

json rect_to_json(const Rectangle& r) { return json{{"rows", r.rows}, {"cols", r.cols}}; }

json rational_json(const Rational& r) { return r.to_string(); }

}  // namespace

std::string disc_report_to_json(const DiscBoundReport& rep, const std::string& name) {
    json j{{"kind", "disc"},
           {"name", name},
           {"rank", rep.rank},
           {"lower", rational_json(rep.cert.lower)},
           {"upper", rational_json(rep.cert.upper)},
           {"lower_f", round12(rep.cert.lower.to_double())},
           {"upper_f", round12(rep.cert.upper.to_double())},
           {"bound", round12(rep.bound)},
           {"upper_ge_bound", rep.upper_ge_bound},
           {"converged", rep.cert.converged},
           {"iterations", rep.cert.iterations},
           {"witness", rect_to_json(rep.cert.witness.rect)},
           {"witness_sign", rep.cert.witness.sign}};
    json mu = json::array();
    for (int i = 0; i < rep.cert.argmin_mu.n_rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < rep.cert.argmin_mu.n_cols(); ++c)
            row.push_back(rational_json(rep.cert.argmin_mu.at(i, c)));
        mu.push_back(std::move(row));
    }
    j["mu"] = std::move(mu);
    return j.dump();
}

std::string amplify_result_to_json(const AmplifyResult& rep, const std::string& name) {
    json j{{"kind", "amplify"},
           {"name", name},
           {"seed", rep.seed},
           {"rect", rect_to_json(rep.rect)},
           {"t", rep.t},
           {"mu_mass", rational_json(rep.mu_mass)},
           {"minority_mass", rational_json(rep.minority_mass)},
           {"cond_avg", rational_json(rep.cond_avg)},
           {"mu_mass_f", round12(rep.mu_mass.to_double())},
           {"cond_avg_f", round12(rep.cond_avg.to_double())},
           {"trials_used", rep.trials_used},
           {"sign", rep.sign},
           {"p", rational_json(rep.stats.p)},
           {"q", rational_json(rep.stats.q)},
           {"margin", rational_json(rep.stats.margin)},
           {"delta_lb", rational_json(rep.stats.delta_lb)},
           {"support_capped", rep.support_capped},
           {"size_floor_log2", round12(rep.size_floor_log2)}};
    return j.dump();
}

std::string mono_extraction_to_json(const MonoExtraction& rep) {
    json j{{"kind", "mono"},
           {"input_rect", rect_to_json(rep.input_rect)},
           {"a_prime", rep.a_prime},
           {"basis_rows", rep.basis_rows},
           {"b_prime", rep.b_prime},
           {"output_rect", rect_to_json(rep.output_rect)},
           {"color", rep.color},
           {"minority_fraction", rational_json(rep.minority_fraction)},
           {"r_threshold", rep.r_threshold},
           {"restricted_rank", rep.restricted_rank}};
    return j.dump();
}

std::string prove_report_to_json(const ProveReport& rep, const std::string& name) {
    json j{{"kind", "prove"},
           {"name", name},
           {"seed", rep.seed},
           {"original_rows", rep.original_rows},
           {"original_cols", rep.original_cols},
           {"rows", rep.rows},
           {"cols", rep.cols},
           {"rank", rep.rank},
           {"disc_lower", rational_json(rep.disc.lower)},
           {"disc_upper", rational_json(rep.disc.upper)},
           {"disc_lower_f", round12(rep.disc.lower.to_double())},
           {"disc_upper_f", round12(rep.disc.upper.to_double())},
           {"disc_converged", rep.disc.converged},
           {"rank_bound", round12(1.0 / (8.0 * std::sqrt(double(rep.rank))))},
           {"eps", rational_json(rep.eps)},
           {"eps_halvings", rep.eps_halvings},
           {"amplify", json::parse(amplify_result_to_json(rep.amplified, name))},
           {"extraction", json::parse(mono_extraction_to_json(rep.extraction))},
           {"mono_size_ratio",
            round12(double(rep.extraction.output_rect.area()) /
                    double(rep.extraction.input_rect.area()))},
           {"depth", rep.complexity.depth},
           {"leaves", rep.complexity.leaves},
           {"balanced_depth", rep.complexity.balanced_depth},
           {"nw_bound", round12(rep.complexity.nw_bound)},
           {"sqrt_bound", round12(rep.complexity.sqrt_bound)},
           {"verified", rep.verify_built.pass && rep.verify_balanced.pass},
           {"finder_pipeline_nodes", rep.finder.pipeline_nodes},
           {"finder_fallback_nodes", rep.finder.fallback_nodes},
           {"tree", json::parse(rep.built.tree.to_json())},
           {"balanced_tree", json::parse(rep.balanced.to_json())}};
    if (rep.complexity.exact_cc) j["exact_cc"] = *rep.complexity.exact_cc;
    json cm = json::array();
    for (double c : rep.complexity.c_meas) cm.push_back(round12(c));
    j["c_meas"] = std::move(cm);
    return j.dump();
}

}  // namespace logrank
