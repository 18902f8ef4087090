#pragma once

#include "logrank/matrix.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace logrank {

/// One node of a deterministic protocol tree. Internal nodes split the
/// current domain along one player's side; leaves carry the output value.
struct ProtocolNode {
    Rectangle domain;
    int leaf_value = 0;  // +1/-1 for leaves, 0 for internal nodes
    int speaker = -1;    // 0 = row player, 1 = col player
    std::array<std::vector<int>, 2> split;
    std::array<int, 2> child{-1, -1};

    [[nodiscard]] bool is_leaf() const { return leaf_value != 0; }
};

class ProtocolTree {
  public:
    [[nodiscard]] int root() const { return root_; }
    [[nodiscard]] int size() const { return int(nodes_.size()); }
    [[nodiscard]] const ProtocolNode& node(int id) const { return nodes_[std::size_t(id)]; }

    [[nodiscard]] int leaf_count() const;
    /// Maximum number of bits sent on any root-to-leaf path.
    [[nodiscard]] int depth() const;

    int add_leaf(Rectangle domain, int value);
    int add_internal(Rectangle domain, int speaker, std::vector<int> part0, std::vector<int> part1,
                     int child0, int child1);
    void set_root(int id) { root_ = id; }

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] static ProtocolTree from_json(const std::string& text);

  private:
    std::vector<ProtocolNode> nodes_;
    int root_ = -1;
};

/// Produces a monochromatic rectangle inside `domain` (coordinates of f).
using MonoFinder = std::function<Rectangle(const SignMatrix& f, const Rectangle& domain)>;

struct BuildNodeStats {
    int node_id = -1;
    int rank = 0;    // rank of the domain submatrix
    int rank_s = 0;  // rank of A x (cols \ B)
    int rank_p = 0;  // rank of (rows \ A) x B
    int chosen_half_rank = 0;
    bool row_split = false;
    std::size_t domain_area = 0;
    std::size_t mono_area = 0;
};

struct BuildResult {
    ProtocolTree tree;
    std::vector<BuildNodeStats> stats;  // one entry per internal node
};

/// Rank-halving recursion: find a monochromatic rectangle A x B in the
/// current domain, compute the ranks of the adjacent blocks S = A x (B-comp)
/// and P = (A-comp) x B, and let the player whose block has small rank split
/// off the monochromatic side. Requires f deduped (no repeated rows or
/// columns). Verifies rank(S) + rank(P) <= rank + 1 at every node.
[[nodiscard]] BuildResult build_protocol(const SignMatrix& f, const MonoFinder& finder);

/// Depth reduction: repeatedly query a subtree holding between 1/3 and 2/3
/// of the leaves (both players announce consistency with its domain), so the
/// balanced tree computes the same function with depth O(log leaves).
[[nodiscard]] ProtocolTree balance(const ProtocolTree& tree);

struct RunResult {
    int value = 0;
    std::string transcript;  // one char per bit sent
};
[[nodiscard]] RunResult run_protocol(const ProtocolTree& tree, int x, int y);

struct VerifyReport {
    bool pass = false;
    std::string reason;
    std::optional<std::pair<int, int>> counterexample;
};
/// Structural checks (partitions, domains, leaf monochromaticity) plus full
/// extensional agreement with f.
[[nodiscard]] VerifyReport verify_protocol(const SignMatrix& f, const ProtocolTree& tree);

/// Exact deterministic communication complexity by memoized recursion over
/// (row set, column set) states. Cap: 8x8.
[[nodiscard]] int exact_cc(const SignMatrix& f);

struct ComplexityReport {
    int depth = 0;
    int leaves = 0;
    int balanced_depth = 0;
    int rank = 0;
    double nw_bound = 0;    // 4 (log2 r)^2 + 4 sum_i c_meas(r / 2^i)
    double sqrt_bound = 0;  // 32 sqrt(r) log2(r+1)
    std::optional<int> exact_cc;
    std::vector<double> c_meas;  // measured per rank-halving phase
};

[[nodiscard]] ComplexityReport complexity_report(const SignMatrix& f, const BuildResult& built,
                                                 const ProtocolTree& balanced);

}  // namespace logrank
