#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logrank/matrix.hpp"
#include "logrank/rank.hpp"
#include "logrank/rigidity.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace logrank;

namespace {

const std::string kBin = LOGRANK_BIN;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("logrank_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& redirect = "") {
    std::string cmd = kBin + " " + args;
    if (!redirect.empty()) cmd += " > " + redirect + " 2>/dev/null";
    else cmd += " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("rank on text, JSON and generated inputs") {
    Sandbox sb;
    spit(sb.path("m.txt"), "+-\n-+\n");
    CHECK(run("rank --input " + sb.path("m.txt") + " --out " + sb.path("r1.json")) == 0);
    CHECK(json::parse(slurp(sb.path("r1.json")))["rank"] == 1);

    spit(sb.path("m.json"), matrix_to_json(gen_inner_product(2)));
    CHECK(run("rank --input " + sb.path("m.json") + " --out " + sb.path("r2.json")) == 0);
    CHECK(json::parse(slurp(sb.path("r2.json")))["rank"] == 4);

    CHECK(run("rank --gen rigidity:r=4,w=2 --out " + sb.path("r3.json")) == 0);
    CHECK(json::parse(slurp(sb.path("r3.json")))["rank"] == 4);
}

TEST_CASE("exit codes per failure class") {
    Sandbox sb;
    spit(sb.path("ragged.txt"), "+-\n-\n");
    CHECK(run("rank --input " + sb.path("ragged.txt")) == 2);
    CHECK(run("rank --input " + sb.path("nope.txt")) == 1);
    CHECK(run("rank --bogus-flag") == 2);
    // cap: exact zero-rect above min-dim 24
    CHECK(run("rigidity zero-rect --gen rigidity:r=8,w=2 --mode exact") == 4);
    // precondition: lowrank with r > min(n,m)
    CHECK(run("rank --gen lowrank:n=3,m=3,r=9,seed=1") == 3);
}

TEST_CASE("disc report") {
    Sandbox sb;
    CHECK(run("disc --gen ip:k=1 --tol 1e-6 --out " + sb.path("d.json")) == 0);
    json j = json::parse(slurp(sb.path("d.json")));
    CHECK(j["kind"] == "disc");
    CHECK(j["converged"] == true);
    CHECK(j["upper_ge_bound"] == true);
    CHECK(j["lower"] == "1/3");
}

TEST_CASE("amplify and mono commands") {
    Sandbox sb;
    CHECK(run("amplify --gen ip:k=2 --eps 0.25 --seed 5 --out " + sb.path("a.json")) == 0);
    json a = json::parse(slurp(sb.path("a.json")));
    CHECK(a["kind"] == "amplify");
    CHECK(a["t"].get<int>() >= 1);

    spit(sb.path("near.txt"), "++++\n++++\n++++\n+++-\n");
    CHECK(run("mono extract --input " + sb.path("near.txt") + " --r 2 --out " + sb.path("e.json")) ==
          0);
    json e = json::parse(slurp(sb.path("e.json")));
    CHECK(e["color"] == 1);

    CHECK(run("mono brute --input " + sb.path("near.txt") + " --out " + sb.path("b.json")) == 0);
    json b = json::parse(slurp(sb.path("b.json")));
    CHECK(b["area"].get<int>() >= 12);
}

TEST_CASE("protocol build / balance / run / verify round trip") {
    Sandbox sb;
    spit(sb.path("f.txt"), "++\n+-\n");
    CHECK(run("protocol build --input " + sb.path("f.txt") + " --finder brute --out " +
              sb.path("tree.json")) == 0);
    CHECK(run("protocol balance --tree " + sb.path("tree.json") + " --out " + sb.path("bal.json")) ==
          0);
    CHECK(run("protocol verify --input " + sb.path("f.txt") + " --tree " + sb.path("bal.json")) ==
          0);
    CHECK(run("protocol run --tree " + sb.path("bal.json") + " --x 1 --y 1 --out " +
              sb.path("run.json")) == 0);
    CHECK(json::parse(slurp(sb.path("run.json")))["value"] == -1);

    // verifying against the wrong matrix fails with the verification code
    spit(sb.path("g.txt"), "--\n-+\n");
    CHECK(run("protocol verify --input " + sb.path("g.txt") + " --tree " + sb.path("bal.json")) ==
          6);

    CHECK(run("protocol report --input " + sb.path("f.txt") + " --finder pipeline --out " +
              sb.path("rep.json")) == 0);
    json rep = json::parse(slurp(sb.path("rep.json")));
    CHECK(rep["exact_cc"] == 2);
}

TEST_CASE("rigidity commands") {
    Sandbox sb;
    CHECK(run("rigidity zero-rect --gen rigidity:r=6,w=2 --out " + sb.path("z.json")) == 0);
    json z = json::parse(slurp(sb.path("z.json")));
    CHECK(z["min_side"] == 3);
    CHECK(z["certified"] == true);

    CHECK(run("rigidity check --gen rigidity:r=6,w=2 --out " + sb.path("c.json")) == 0);
    json c = json::parse(slurp(sb.path("c.json")));
    CHECK(c["support_split"]["min_side"] == 3);
    CHECK(c["support_split"]["pattern_matches"] == true);

    IntMatrix m = gen_rigidity_example(4, 2);
    RigidityDecomposition dec{m, m, IntMatrix::zero(6, 6)};
    spit(sb.path("dec.json"), decomposition_to_json(dec));
    CHECK(run("rigidity verify-decomp --input " + sb.path("dec.json") + " --r 2 --out " +
              sb.path("v.json")) == 0);
    json v = json::parse(slurp(sb.path("v.json")));
    CHECK(v["sum_ok"] == true);
    CHECK(v["subadditivity_ok"] == true);
}

TEST_CASE("prove end to end via the CLI") {
    Sandbox sb;
    CHECK(run("prove --gen lowrank:n=5,m=5,r=2,seed=4 --seed 2 --out " + sb.path("p.json")) == 0);
    json p = json::parse(slurp(sb.path("p.json")));
    CHECK(p["verified"] == true);
    CHECK(p["kind"] == "prove");
    CHECK(p.contains("balanced_depth"));
}

TEST_CASE("corpus is byte-identical across runs and manifest ranks are correct") {
    Sandbox sb;
    CHECK(run("corpus --out-dir " + sb.path("c1")) == 0);
    CHECK(run("corpus --out-dir " + sb.path("c2")) == 0);
    json manifest = json::parse(slurp(sb.path("c1") + "/manifest.json"));
    CHECK(manifest.size() >= 50);
    int checked = 0;
    for (const auto& e : manifest) {
        std::string f1 = sb.path("c1") + "/" + e["file"].get<std::string>();
        std::string f2 = sb.path("c2") + "/" + e["file"].get<std::string>();
        CHECK(slurp(f1) == slurp(f2));
        if (e["kind"] == "sign" && checked < 5) {
            SignMatrix m = load_matrix(slurp(f1));
            CHECK(rank_exact(m) == e["rank"].get<int>());
            ++checked;
        }
    }
}

TEST_CASE("report aggregates prior outputs") {
    Sandbox sb;
    fs::create_directories(sb.path("runs"));
    CHECK(run("disc --gen ip:k=1 --out " + sb.path("runs/d1.json")) == 0);
    CHECK(run("prove --gen lowrank:n=4,m=4,r=2,seed=3 --out " + sb.path("runs/p1.json")) == 0);
    CHECK(run("report --in-dir " + sb.path("runs") + " --format csv --out " + sb.path("t.csv")) ==
          0);
    std::string csv = slurp(sb.path("t.csv"));
    CHECK(csv.find("# disc") != std::string::npos);
    CHECK(csv.find("# prove") != std::string::npos);
    CHECK(csv.find("balanced_depth") != std::string::npos);

    // empty input dir: empty table, success
    fs::create_directories(sb.path("empty"));
    CHECK(run("report --in-dir " + sb.path("empty") + " --format csv --out " + sb.path("e.csv")) ==
          0);
}
