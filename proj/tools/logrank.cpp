// logrank: command-line front end for the sign-matrix toolkit.
//
// Subcommands: rank, disc, amplify, mono, protocol, rigidity, prove,
// corpus, report. Exit codes: 0 ok, 1 unexpected/IO, 2 parse,
// 3 precondition, 4 cap, 5 convergence, 6 verification.

#include "logrank/amplify.hpp"
#include "logrank/discrepancy.hpp"
#include "logrank/errors.hpp"
#include "logrank/matrix.hpp"
#include "logrank/mono.hpp"
#include "logrank/pipeline.hpp"
#include "logrank/protocol.hpp"
#include "logrank/rank.hpp"
#include "logrank/rigidity.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace logrank;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << content << "\n";
}

struct MatrixInput {
    std::optional<SignMatrix> sign;
    std::optional<IntMatrix> ints;
};

std::map<std::string, std::string> parse_kv(const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("generator spec: expected key=value in " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("generator spec: missing " + key);
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw ParseError("generator spec: bad integer for " + key);
    }
}

MatrixInput parse_gen(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("generator spec: expected kind:args");
    std::string kind = spec.substr(0, colon);
    auto kv = parse_kv(spec.substr(colon + 1));
    MatrixInput out;
    if (kind == "ip") {
        out.sign = gen_inner_product(int(kv_int(kv, "k")));
    } else if (kind == "lowrank") {
        LowRankMode mode = LowRankMode::kPatternRows;
        auto it = kv.find("mode");
        if (it != kv.end()) {
            if (it->second == "bool") mode = LowRankMode::kBoolProduct;
            else if (it->second != "pattern") throw ParseError("generator spec: unknown mode");
        }
        std::uint64_t seed = kv.count("seed") ? std::uint64_t(kv_int(kv, "seed")) : 0;
        out.sign = gen_random_low_rank(int(kv_int(kv, "n")), int(kv_int(kv, "m")),
                                       int(kv_int(kv, "r")), seed, mode);
    } else if (kind == "rigidity") {
        out.ints = gen_rigidity_example(int(kv_int(kv, "r")), int(kv_int(kv, "w")));
    } else {
        throw ParseError("generator spec: unknown kind " + kind);
    }
    return out;
}

MatrixInput load_input(const std::string& input, const std::string& gen) {
    if (!gen.empty()) return parse_gen(gen);
    if (input.empty()) throw ParseError("need --input or --gen");
    std::string text = read_file(input);
    MatrixInput out;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // JSON: prefer the sign-matrix reading, fall back to integers
        try {
            out.sign = sign_matrix_from_json(text);
        } catch (const ParseError&) {
            out.ints = int_matrix_from_json(text);
        }
    } else {
        out.sign = load_matrix(text);
    }
    return out;
}

SignMatrix need_sign(const MatrixInput& in) {
    if (!in.sign) throw PreconditionError("this command needs a sign matrix input");
    return *in.sign;
}

IntMatrix need_int(const MatrixInput& in) {
    if (in.ints) return *in.ints;
    if (in.sign) return to_int_matrix(*in.sign);
    throw PreconditionError("this command needs a matrix input");
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return Rational(BigInt::from_string(s.substr(0, slash)),
                        BigInt::from_string(s.substr(slash + 1)));
    try {
        return Rational::from_double(std::stod(s));
    } catch (const std::exception&) {
        throw ParseError("expected a rational (p/q) or decimal: " + s);
    }
}

std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (...) {
            throw ParseError("bad index list: " + s);
        }
    }
    return out;
}

json zero_report_json(const ZeroRectReport& rep, const std::string& name) {
    json j{{"kind", "rigidity-zero"},
           {"name", name},
           {"min_side", rep.min_side},
           {"area", rep.area},
           {"sparsity", rep.sparsity_exact.to_string()},
           {"sparsity_f", round12(rep.sparsity)},
           {"rank", rep.rank},
           {"bound_ratio", round12(rep.bound_ratio)},
           {"certified", rep.certified}};
    if (rep.rect) j["rect"] = json{{"rows", rep.rect->rows}, {"cols", rep.rect->cols}};
    return j;
}

}  // namespace

int dispatch(int argc, char** argv) {
    CLI::App app{"logrank: rank, discrepancy, amplification, protocol and rigidity toolkit"};
    app.require_subcommand(1);

    std::string input, gen, out_path, format = "json";
    double tol = 1e-4;
    int max_iters = 500;
    std::uint64_t seed = 1;

    auto add_io = [&](CLI::App* cmd, bool with_gen = true) {
        cmd->add_option("--input", input, "matrix file (text +/- rows or JSON)");
        if (with_gen) cmd->add_option("--gen", gen, "generator spec: ip:k=2 | lowrank:n=..,m=..,r=..,seed=.. | rigidity:r=..,w=..");
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    // rank
    auto* c_rank = app.add_subcommand("rank", "exact rank over the rationals");
    add_io(c_rank);
    c_rank->callback([&] {
        MatrixInput in = load_input(input, gen);
        int r = in.sign ? rank_exact(*in.sign) : rank_exact(*in.ints);
        json j{{"kind", "rank"}, {"rank", r}};
        if (in.sign) {
            j["rows"] = in.sign->n_rows();
            j["cols"] = in.sign->n_cols();
        } else {
            j["rows"] = in.ints->n_rows();
            j["cols"] = in.ints->n_cols();
        }
        write_output(out_path, format == "json" ? j.dump() : std::to_string(r));
    });

    // disc
    auto* c_disc = app.add_subcommand("disc", "certified discrepancy interval and rank bound");
    add_io(c_disc);
    c_disc->add_option("--tol", tol, "target certificate gap");
    c_disc->add_option("--max-iters", max_iters, "double-oracle round cap");
    bool disc_failed = false;
    c_disc->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        DiscBoundReport rep = check_rank_disc_bound(f, tol, max_iters);
        write_output(out_path, disc_report_to_json(rep, input.empty() ? gen : input));
        disc_failed = !rep.cert.converged;
    });

    // amplify
    auto* c_amp = app.add_subcommand("amplify", "large nearly-monochromatic rectangle");
    add_io(c_amp);
    std::string eps_str = "1/4";
    int max_trials = 1000;
    c_amp->add_option("--eps", eps_str, "target minority fraction (p/q or decimal)");
    c_amp->add_option("--seed", seed, "sampling seed");
    c_amp->add_option("--max-trials", max_trials, "intersection attempts");
    c_amp->add_option("--tol", tol, "disc certificate gap");
    c_amp->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        AmplifyOptions opt;
        opt.eps = parse_rational(eps_str);
        opt.seed = seed;
        opt.max_trials = max_trials;
        opt.disc_tol = tol;
        AmplifyResult rep = amplify(f, EntryDistribution::uniform(f.n_rows(), f.n_cols()), opt);
        write_output(out_path, amplify_result_to_json(rep, input.empty() ? gen : input));
    });

    // mono
    auto* c_mono = app.add_subcommand("mono", "monochromatic rectangles");
    std::string rect_rows, rect_cols;
    int mono_r = 0;
    auto* c_mx = c_mono->add_subcommand("extract", "extraction from a nearly monochromatic rectangle");
    add_io(c_mx);
    c_mx->add_option("--rect-rows", rect_rows, "row indices, comma separated (default all)");
    c_mx->add_option("--rect-cols", rect_cols, "column indices, comma separated (default all)");
    c_mx->add_option("--r", mono_r, "rank threshold r (default rank of the restriction)");
    c_mx->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        Rectangle r;
        r.rows = rect_rows.empty() ? Rectangle::full(f.n_rows(), f.n_cols()).rows
                                   : parse_index_list(rect_rows);
        r.cols = rect_cols.empty() ? Rectangle::full(f.n_rows(), f.n_cols()).cols
                                   : parse_index_list(rect_cols);
        r.normalize();
        int rr = mono_r > 0 ? mono_r : std::max(1, rank_exact(restrict(f, r)));
        MonoExtraction e = extract_mono(f, r, rr);
        write_output(out_path, mono_extraction_to_json(e));
    });
    auto* c_mb = c_mono->add_subcommand("brute", "maximum-area monochromatic rectangle");
    add_io(c_mb);
    c_mb->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        MaxMonoResult r = brute_force_max_mono(f);
        json j{{"kind", "mono-brute"},
               {"rect", {{"rows", r.rect.rows}, {"cols", r.rect.cols}}},
               {"color", r.color},
               {"area", r.rect.area()}};
        write_output(out_path, j.dump());
    });
    c_mono->require_subcommand(1);

    // protocol
    auto* c_proto = app.add_subcommand("protocol", "protocol trees");
    std::string tree_path, finder_name = "pipeline";
    int run_x = 0, run_y = 0;
    auto make_finder = [&](FinderStats* stats) -> MonoFinder {
        if (finder_name == "brute") return brute_mono_finder();
        if (finder_name == "greedy") return greedy_mono_finder();
        if (finder_name == "pipeline") return pipeline_mono_finder(seed, stats);
        throw ParseError("unknown finder: " + finder_name);
    };
    auto* c_pb = c_proto->add_subcommand("build", "build a protocol tree");
    add_io(c_pb);
    c_pb->add_option("--finder", finder_name, "pipeline | brute | greedy");
    c_pb->add_option("--seed", seed, "finder seed");
    c_pb->callback([&] {
        SignMatrix f = dedupe(need_sign(load_input(input, gen))).matrix;
        FinderStats stats;
        BuildResult b = build_protocol(f, make_finder(&stats));
        write_output(out_path, b.tree.to_json());
    });
    auto* c_pbal = c_proto->add_subcommand("balance", "balance a protocol tree");
    c_pbal->add_option("--tree", tree_path, "tree JSON file")->required();
    c_pbal->add_option("--out", out_path, "output file (default stdout)");
    c_pbal->callback([&] {
        ProtocolTree t = ProtocolTree::from_json(read_file(tree_path));
        write_output(out_path, balance(t).to_json());
    });
    auto* c_prun = c_proto->add_subcommand("run", "evaluate the protocol on one input");
    c_prun->add_option("--tree", tree_path, "tree JSON file")->required();
    c_prun->add_option("--x", run_x, "row index")->required();
    c_prun->add_option("--y", run_y, "column index")->required();
    c_prun->add_option("--out", out_path, "output file (default stdout)");
    c_prun->callback([&] {
        ProtocolTree t = ProtocolTree::from_json(read_file(tree_path));
        RunResult r = run_protocol(t, run_x, run_y);
        json j{{"kind", "protocol-run"},
               {"value", r.value},
               {"transcript", r.transcript},
               {"bits", r.transcript.size()}};
        write_output(out_path, j.dump());
    });
    bool verify_failed = false;
    auto* c_pver = c_proto->add_subcommand("verify", "verify a tree against a matrix");
    add_io(c_pver);
    c_pver->add_option("--tree", tree_path, "tree JSON file")->required();
    c_pver->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        ProtocolTree t = ProtocolTree::from_json(read_file(tree_path));
        VerifyReport rep = verify_protocol(f, t);
        json j{{"kind", "protocol-verify"}, {"pass", rep.pass}, {"reason", rep.reason}};
        if (rep.counterexample)
            j["counterexample"] = {rep.counterexample->first, rep.counterexample->second};
        write_output(out_path, j.dump());
        verify_failed = !rep.pass;
    });
    auto* c_prep = c_proto->add_subcommand("report", "build, balance and report complexity");
    add_io(c_prep);
    c_prep->add_option("--finder", finder_name, "pipeline | brute | greedy");
    c_prep->add_option("--seed", seed, "finder seed");
    c_prep->callback([&] {
        SignMatrix f = dedupe(need_sign(load_input(input, gen))).matrix;
        FinderStats stats;
        BuildResult b = build_protocol(f, make_finder(&stats));
        ProtocolTree bal = balance(b.tree);
        ComplexityReport rep = complexity_report(f, b, bal);
        json j{{"kind", "protocol-report"},
               {"depth", rep.depth},
               {"leaves", rep.leaves},
               {"balanced_depth", rep.balanced_depth},
               {"rank", rep.rank},
               {"nw_bound", round12(rep.nw_bound)},
               {"sqrt_bound", round12(rep.sqrt_bound)},
               {"finder_pipeline_nodes", stats.pipeline_nodes},
               {"finder_fallback_nodes", stats.fallback_nodes}};
        if (rep.exact_cc) j["exact_cc"] = *rep.exact_cc;
        write_output(out_path, j.dump());
    });
    c_proto->require_subcommand(1);

    // rigidity
    auto* c_rig = app.add_subcommand("rigidity", "zero rectangles and decompositions");
    std::string mode_str = "exact", target_str = "min-side";
    int r_override = 0;
    auto parse_mode = [&] {
        if (mode_str == "exact") return ZeroRectMode::kExact;
        if (mode_str == "heuristic") return ZeroRectMode::kHeuristic;
        throw ParseError("unknown mode: " + mode_str);
    };
    auto parse_target = [&] {
        if (target_str == "min-side") return ZeroRectTarget::kMaxMinSide;
        if (target_str == "area") return ZeroRectTarget::kMaxArea;
        throw ParseError("unknown target: " + target_str);
    };
    auto* c_rz = c_rig->add_subcommand("zero-rect", "largest zero rectangle");
    add_io(c_rz);
    c_rz->add_option("--mode", mode_str, "exact | heuristic");
    c_rz->add_option("--target", target_str, "min-side | area");
    c_rz->callback([&] {
        IntMatrix m = need_int(load_input(input, gen));
        ZeroRectReport rep = zero_rectangle(m, parse_mode(), parse_target());
        write_output(out_path, zero_report_json(rep, input.empty() ? gen : input).dump());
    });
    auto* c_rc = c_rig->add_subcommand("check", "sparsity / rank / zero-rectangle ratios");
    add_io(c_rc);
    c_rc->add_option("--mode", mode_str, "exact | heuristic");
    c_rc->add_option("--r", r_override, "rank override");
    c_rc->callback([&] {
        IntMatrix m = need_int(load_input(input, gen));
        ConjectureReport rep = conjecture_check(
            m, r_override > 0 ? std::optional<int>(r_override) : std::nullopt, parse_mode());
        json j = zero_report_json(rep.zero, input.empty() ? gen : input);
        j["kind"] = "rigidity-check";
        j["eps"] = rep.eps_exact.to_string();
        j["eps_f"] = round12(rep.eps);
        j["rank_used"] = rep.rank;
        // when the input is the N N^t generator, add the certified optimum
        if (!gen.empty() && gen.rfind("rigidity:", 0) == 0) {
            auto kv = parse_kv(gen.substr(9));
            SupportSplitReport split =
                support_split_zero_rectangle(m, int(kv_int(kv, "r")), int(kv_int(kv, "w")));
            j["support_split"] = {{"pattern_matches", split.pattern_matches},
                                  {"best_u", split.best_u},
                                  {"min_side", split.min_side},
                                  {"witness_is_zero", split.witness_is_zero}};
        }
        write_output(out_path, j.dump());
    });
    auto* c_rv = c_rig->add_subcommand("verify-decomp", "verify M = L + S rigidity arithmetic");
    c_rv->add_option("--input", input, "decomposition JSON {M,L,S}")->required();
    c_rv->add_option("--r", r_override, "target rank r")->required();
    c_rv->add_option("--mode", mode_str, "exact | heuristic");
    c_rv->add_option("--out", out_path, "output file (default stdout)");
    c_rv->callback([&] {
        RigidityDecomposition dec = decomposition_from_json(read_file(input));
        DecompositionReport rep = verify_rigidity_decomposition(dec, r_override, parse_mode());
        json j{{"kind", "rigidity-decomp"},
               {"sum_ok", rep.sum_ok},
               {"rank_m", rep.rank_m},
               {"rank_l", rep.rank_l},
               {"rank_s", rep.rank_s},
               {"s_nonzeros", rep.s_nonzeros},
               {"subadditivity_ok", rep.subadditivity_ok},
               {"zero_min_side", rep.zero.min_side},
               {"m_equals_l_on_rect", rep.m_equals_l_on_rect},
               {"triggered", rep.triggered},
               {"restricted_rank_m", rep.restricted_rank_m},
               {"contradiction_flag", rep.contradiction_flag}};
        write_output(out_path, j.dump());
    });
    c_rig->require_subcommand(1);

    // prove
    bool prove_failed = false;
    auto* c_prove = app.add_subcommand("prove", "end-to-end pipeline to a verified protocol");
    add_io(c_prove);
    std::string prove_eps;
    c_prove->add_option("--eps", prove_eps, "amplification eps (default 1/(2 rank))");
    c_prove->add_option("--seed", seed, "sampling seed");
    c_prove->add_option("--tol", tol, "disc certificate gap");
    c_prove->add_option("--max-iters", max_iters, "double-oracle round cap");
    c_prove->add_option("--max-trials", max_trials, "amplify attempts");
    c_prove->callback([&] {
        SignMatrix f = need_sign(load_input(input, gen));
        ProveOptions opt;
        opt.tol = tol;
        // prove wants more double-oracle headroom than disc's default
        opt.max_iters = c_prove->count("--max-iters") > 0 ? max_iters : 1000;
        opt.seed = seed;
        opt.max_trials = max_trials;
        if (!prove_eps.empty()) opt.eps = parse_rational(prove_eps);
        ProveReport rep = prove(f, opt);
        write_output(out_path, prove_report_to_json(rep, input.empty() ? gen : input));
        prove_failed = !(rep.verify_built.pass && rep.verify_balanced.pass);
    });

    // corpus
    auto* c_corpus = app.add_subcommand("corpus", "write the benchmark corpus with a manifest");
    std::string out_dir = "corpus";
    c_corpus->add_option("--out-dir", out_dir, "output directory");
    c_corpus->callback([&] {
        fs::create_directories(out_dir);
        json manifest = json::array();
        for (const CorpusEntry& e : standard_corpus()) {
            std::string file = e.name + ".txt";
            std::ofstream fout(fs::path(out_dir) / file, std::ios::binary);
            fout << save_matrix(e.matrix);
            manifest.push_back(json{{"name", e.name},
                                    {"file", file},
                                    {"rows", e.matrix.n_rows()},
                                    {"cols", e.matrix.n_cols()},
                                    {"rank", rank_exact(e.matrix)},
                                    {"target_rank", e.target_rank},
                                    {"seed", e.seed},
                                    {"kind", "sign"}});
        }
        // inner product k=4 and the extremal integer examples
        {
            SignMatrix ip4 = gen_inner_product(4);
            std::ofstream fout(fs::path(out_dir) / "ip4.txt", std::ios::binary);
            fout << save_matrix(ip4);
            manifest.push_back(json{{"name", "ip4"},
                                    {"file", "ip4.txt"},
                                    {"rows", 16},
                                    {"cols", 16},
                                    {"rank", rank_exact(ip4)},
                                    {"target_rank", 16},
                                    {"seed", 0},
                                    {"kind", "sign"}});
        }
        for (auto [r, w] : std::vector<std::pair<int, int>>{{6, 2}, {8, 2}, {16, 2}}) {
            IntMatrix m = gen_rigidity_example(r, w);
            std::string name = "nnt_r" + std::to_string(r) + "w" + std::to_string(w);
            std::ofstream fout(fs::path(out_dir) / (name + ".json"), std::ios::binary);
            fout << matrix_to_json(m);
            manifest.push_back(json{{"name", name},
                                    {"file", name + ".json"},
                                    {"rows", m.n_rows()},
                                    {"cols", m.n_cols()},
                                    {"rank", rank_exact(m)},
                                    {"target_rank", r},
                                    {"seed", 0},
                                    {"kind", "int"}});
        }
        std::ofstream mout(fs::path(out_dir) / "manifest.json", std::ios::binary);
        mout << manifest.dump(2) << "\n";
        std::cout << "wrote " << manifest.size() << " matrices to " << out_dir << "\n";
    });

    // report
    auto* c_report = app.add_subcommand("report", "aggregate JSON reports into a table");
    std::string in_dir = ".";
    c_report->add_option("--in-dir", in_dir, "directory of report JSON files");
    c_report->add_option("--out", out_path, "output file (default stdout)");
    c_report->add_option("--format", format, "json | csv");
    c_report->callback([&] {
        std::map<std::string, std::vector<json>> by_kind;
        if (fs::exists(in_dir)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(in_dir))
                if (entry.path().extension() == ".json" &&
                    entry.path().filename() != "manifest.json")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const fs::path& p : files) {
                json j;
                try {
                    j = json::parse(read_file(p.string()));
                } catch (...) {
                    continue;  // not a report
                }
                if (!j.is_object() || !j.contains("kind")) continue;
                json flat = json::object();
                flat["file"] = p.filename().string();
                for (auto& [key, value] : j.items())
                    if (value.is_primitive()) flat[key] = value;
                by_kind[j["kind"].get<std::string>()].push_back(std::move(flat));
            }
        }
        if (format == "json") {
            json out = json::object();
            for (auto& [kind, rows] : by_kind) out[kind] = rows;
            write_output(out_path, out.dump(2));
            return;
        }
        // csv: one block per kind, union of columns
        std::ostringstream csv;
        for (auto& [kind, rows] : by_kind) {
            std::vector<std::string> cols;
            for (const json& row : rows)
                for (auto& [key, value] : row.items())
                    if (std::find(cols.begin(), cols.end(), key) == cols.end())
                        cols.push_back(key);
            std::sort(cols.begin(), cols.end());
            csv << "# " << kind << "\n";
            for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c];
            csv << "\n";
            for (const json& row : rows) {
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    if (c) csv << ",";
                    if (row.contains(cols[c])) {
                        const json& v = row[cols[c]];
                        if (v.is_string()) csv << v.get<std::string>();
                        else csv << v.dump();
                    }
                }
                csv << "\n";
            }
        }
        write_output(out_path, csv.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (disc_failed) return 5;
    if (verify_failed || prove_failed) return 6;
    return 0;
}

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const CapError& e) {
        std::cerr << "cap error: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 5;
    } catch (const VerificationError& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
