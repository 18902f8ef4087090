#pragma once

#include "logrank/amplify.hpp"
#include "logrank/discrepancy.hpp"
#include "logrank/mono.hpp"
#include "logrank/protocol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logrank {

struct CorpusEntry {
    std::string name;
    SignMatrix matrix;
    int target_rank = 1;     // generator parameter; the realized rank may be lower
    std::uint64_t seed = 0;  // 0 for deterministic fixtures
};

/// Fixed benchmark corpus: inner products k = 1..3, hand fixtures, and
/// seeded low-rank matrices. Dims <= 12x12, ranks 1..8, > 50 entries,
/// byte-stable across runs.
[[nodiscard]] std::vector<CorpusEntry> standard_corpus();

// finders for build_protocol
[[nodiscard]] MonoFinder brute_mono_finder();
[[nodiscard]] MonoFinder greedy_mono_finder();

struct FinderStats {
    int pipeline_nodes = 0;  // nodes resolved by disc -> amplify -> extract
    int fallback_nodes = 0;  // nodes that needed the exhaustive/greedy fallback
};

/// The end-to-end finder: per sub-rectangle, certify a discrepancy lower
/// bound, amplify with eps = 1/(4r), and extract a monochromatic rectangle.
/// Falls back to the exhaustive search (or greedy above its cap) when a
/// stage fails; `stats` (optional) counts both paths.
[[nodiscard]] MonoFinder pipeline_mono_finder(std::uint64_t seed, FinderStats* stats = nullptr,
                                              double disc_tol = 1e-3, int disc_iters = 400);

struct ProveOptions {
    double tol = 1e-4;
    int max_iters = 1000;
    std::optional<Rational> eps;  // defaults to 1/(2 rank)
    std::uint64_t seed = 1;
    int max_trials = 1000;
};

struct ProveReport {
    std::uint64_t seed = 0;
    int original_rows = 0, original_cols = 0;
    int rows = 0, cols = 0;  // after dedupe
    int rank = 0;
    DiscrepancyCertificate disc;
    Rational eps;
    int eps_halvings = 0;  // times eps was halved to meet the extraction bar
    AmplifyResult amplified;
    MonoExtraction extraction;
    BuildResult built;
    ProtocolTree balanced;
    VerifyReport verify_built;
    VerifyReport verify_balanced;
    ComplexityReport complexity;
    FinderStats finder;
};

/// dedupe -> disc_game -> amplify(eps) -> extract_mono -> build_protocol
/// (pipeline finder) -> balance -> verify -> complexity.
[[nodiscard]] ProveReport prove(const SignMatrix& f, const ProveOptions& opt = {});

// JSON summaries (floats rounded to 12 significant digits, rationals "p/q")
[[nodiscard]] std::string prove_report_to_json(const ProveReport& rep, const std::string& name);
[[nodiscard]] std::string disc_report_to_json(const DiscBoundReport& rep, const std::string& name);
[[nodiscard]] std::string amplify_result_to_json(const AmplifyResult& rep, const std::string& name);
[[nodiscard]] std::string mono_extraction_to_json(const MonoExtraction& rep);

/// Round a double to 12 significant digits (serialization policy).
[[nodiscard]] double round12(double v);

}  // namespace logrank
