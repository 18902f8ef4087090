#include "logrank/protocol.hpp"

#include "logrank/errors.hpp"
#include "logrank/util.hpp"
#include "logrank/rank.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace logrank {

using nlohmann::json;

int ProtocolTree::leaf_count() const {
    int c = 0;
    for (const auto& n : nodes_) c += n.is_leaf();
    return c;
}

int ProtocolTree::depth() const {
    if (root_ < 0) return 0;
    // iterative DFS carrying the bit count
    int best = 0;
    std::vector<std::pair<int, int>> stack{{root_, 0}};
    while (!stack.empty()) {
        auto [id, bits] = stack.back();
        stack.pop_back();
        const ProtocolNode& n = node(id);
        if (n.is_leaf()) {
            best = std::max(best, bits);
        } else {
            stack.push_back({n.child[0], bits + 1});
            stack.push_back({n.child[1], bits + 1});
        }
    }
    return best;
}

int ProtocolTree::add_leaf(Rectangle domain, int value) {
    ProtocolNode n;
    n.domain = std::move(domain);
    n.leaf_value = value;
    nodes_.push_back(std::move(n));
    return int(nodes_.size()) - 1;
}

int ProtocolTree::add_internal(Rectangle domain, int speaker, std::vector<int> part0,
                               std::vector<int> part1, int child0, int child1) {
    ProtocolNode n;
    n.domain = std::move(domain);
    n.speaker = speaker;
    n.split[0] = std::move(part0);
    n.split[1] = std::move(part1);
    n.child = {child0, child1};
    nodes_.push_back(std::move(n));
    return int(nodes_.size()) - 1;
}

// ---- build ----

namespace {

Rectangle subrect(const Rectangle& domain, std::vector<int> rows, std::vector<int> cols) {
    Rectangle r;
    r.rows = std::move(rows);
    r.cols = std::move(cols);
    (void)domain;
    return r;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

int rank_of(const SignMatrix& f, const Rectangle& r) {
    if (r.empty()) return 0;
    return rank_exact(restrict(f, r));
}

struct Builder {
    const SignMatrix& f;
    const MonoFinder& finder;
    ProtocolTree tree;
    std::vector<BuildNodeStats> stats;

    int build(const Rectangle& domain) {
        if (f.monochromatic_on(domain))
            return tree.add_leaf(domain, f.at(domain.rows[0], domain.cols[0]));

        Rectangle mono = finder(f, domain);
        mono.normalize();
        if (mono.empty() || !subset_of(mono.rows, domain.rows) ||
            !subset_of(mono.cols, domain.cols) || !f.monochromatic_on(mono))
            throw VerificationError(
                "build_protocol: finder returned an invalid rectangle for a domain of " +
                std::to_string(domain.rows.size()) + "x" + std::to_string(domain.cols.size()));

        std::vector<int> rows_rest = set_minus(domain.rows, mono.rows);
        std::vector<int> cols_rest = set_minus(domain.cols, mono.cols);

        BuildNodeStats st;
        st.rank = rank_of(f, domain);
        st.rank_s = cols_rest.empty() ? 0 : rank_of(f, subrect(domain, mono.rows, cols_rest));
        st.rank_p = rows_rest.empty() ? 0 : rank_of(f, subrect(domain, rows_rest, mono.cols));
        st.domain_area = domain.area();
        st.mono_area = mono.area();
        if (st.rank_s + st.rank_p > st.rank + 1)
            throw VerificationError("build_protocol: rank(S) + rank(P) > r + 1");

        const bool row_valid = !rows_rest.empty();
        const bool col_valid = !cols_rest.empty();
        // at least one side is proper: the domain is not monochromatic, so the
        // finder cannot have returned the full domain
        bool row_split;
        if (!row_valid) {
            row_split = false;
        } else if (!col_valid) {
            row_split = true;
        } else {
            // the proof's rule: the player whose adjacent block has rank at
            // most r/2 + 1 splits off the monochromatic side; when both
            // qualify take the smaller, preferring the row player
            bool s_ok = 2 * st.rank_s <= st.rank + 2;
            bool p_ok = 2 * st.rank_p <= st.rank + 2;
            if (s_ok && p_ok) {
                row_split = st.rank_s <= st.rank_p;
            } else if (s_ok) {
                row_split = true;
            } else if (p_ok) {
                row_split = false;
            } else {
                row_split = st.rank_s <= st.rank_p;  // cannot happen; keep total
            }
        }
        st.row_split = row_split;

        Rectangle half0, half1;
        int speaker;
        std::vector<int> part0, part1;
        if (row_split) {
            speaker = 0;
            part0 = mono.rows;
            part1 = rows_rest;
            half0 = subrect(domain, mono.rows, domain.cols);
            half1 = subrect(domain, rows_rest, domain.cols);
        } else {
            speaker = 1;
            part0 = mono.cols;
            part1 = cols_rest;
            half0 = subrect(domain, domain.rows, mono.cols);
            half1 = subrect(domain, domain.rows, cols_rest);
        }
        st.chosen_half_rank = rank_of(f, half0);
        if (st.chosen_half_rank > 1 + (row_split ? st.rank_s : st.rank_p))
            throw VerificationError("build_protocol: chosen half rank above 1 + block rank");

        int c0 = build(half0);
        int c1 = build(half1);
        int id = tree.add_internal(domain, speaker, std::move(part0), std::move(part1), c0, c1);
        st.node_id = id;
        stats.push_back(std::move(st));
        return id;
    }
};

}  // namespace

BuildResult build_protocol(const SignMatrix& f, const MonoFinder& finder) {
    DedupeResult d = dedupe(f);
    if (d.matrix.n_rows() != f.n_rows() || d.matrix.n_cols() != f.n_cols())
        throw PreconditionError("build_protocol: matrix has repeated rows or columns (dedupe first)");
    Builder b{f, finder, {}, {}};
    int root = b.build(Rectangle::full(f.n_rows(), f.n_cols()));
    b.tree.set_root(root);
    return BuildResult{std::move(b.tree), std::move(b.stats)};
}

// ---- balance ----

namespace {

struct BNode {
    const ProtocolNode* src;
    std::shared_ptr<const BNode> child0, child1;
    int leaves = 1;
};
using BPtr = std::shared_ptr<const BNode>;

BPtr to_bnodes(const ProtocolTree& t, int id) {
    const ProtocolNode& n = t.node(id);
    auto b = std::make_shared<BNode>();
    b->src = &n;
    if (!n.is_leaf()) {
        b->child0 = to_bnodes(t, n.child[0]);
        b->child1 = to_bnodes(t, n.child[1]);
        b->leaves = b->child0->leaves + b->child1->leaves;
    }
    return b;
}

// heavy-path descent to a subtree holding between 1/3 and 2/3 of the leaves
std::vector<BPtr> find_weighted(const BPtr& root) {
    std::vector<BPtr> path{root};
    int total = root->leaves;
    BPtr cur = root;
    while (3 * cur->leaves > 2 * total) {
        cur = cur->child0->leaves >= cur->child1->leaves ? cur->child0 : cur->child1;
        path.push_back(cur);
    }
    return path;
}

// remove v's subtree by replacing its parent with the sibling subtree
BPtr splice(const std::vector<BPtr>& path) {
    std::size_t k = path.size() - 2;
    const BNode* parent = path[k].get();
    BPtr cur = parent->child0.get() == path[k + 1].get() ? parent->child1 : parent->child0;
    while (k-- > 0) {
        const BNode* anc = path[k].get();
        auto nn = std::make_shared<BNode>(*anc);
        if (anc->child0.get() == path[k + 1].get()) {
            nn->child0 = cur;
        } else {
            nn->child1 = cur;
        }
        nn->leaves = nn->child0->leaves + nn->child1->leaves;
        cur = nn;
    }
    return cur;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct Balancer {
    ProtocolTree out;

    int emit(const BPtr& t, const Rectangle& d) {
        if (t->src->is_leaf()) return out.add_leaf(d, t->src->leaf_value);

        std::vector<BPtr> path = find_weighted(t);
        const BPtr& v = path.back();
        const Rectangle& rv = v->src->domain;
        BPtr t_out = splice(path);

        std::vector<int> rows_in = intersect_sorted(d.rows, rv.rows);
        std::vector<int> rows_out = set_minus(d.rows, rv.rows);

        if (rows_in.empty()) return emit(t_out, d);
        if (rows_out.empty()) return emit_col_bit(v, t_out, d);
        Rectangle d_in{rows_in, d.cols}, d_out{rows_out, d.cols};
        int c0 = emit_col_bit(v, t_out, d_in);
        int c1 = emit(t_out, d_out);
        return out.add_internal(d, 0, std::move(rows_in), std::move(rows_out), c0, c1);
    }

    // rows already consistent with v; ask the column player
    int emit_col_bit(const BPtr& v, const BPtr& t_out, const Rectangle& d) {
        const Rectangle& rv = v->src->domain;
        std::vector<int> cols_in = intersect_sorted(d.cols, rv.cols);
        std::vector<int> cols_out = set_minus(d.cols, rv.cols);
        if (cols_in.empty()) return emit(t_out, d);
        if (cols_out.empty()) return emit(v, d);
        Rectangle d_in{d.rows, cols_in}, d_out{d.rows, cols_out};
        int c0 = emit(v, d_in);
        int c1 = emit(t_out, d_out);
        return out.add_internal(d, 1, std::move(cols_in), std::move(cols_out), c0, c1);
    }
};

}  // namespace

ProtocolTree balance(const ProtocolTree& tree) {
    if (tree.root() < 0) throw PreconditionError("balance: empty tree");
    BPtr root = to_bnodes(tree, tree.root());
    Balancer b;
    int new_root = b.emit(root, tree.node(tree.root()).domain);
    b.out.set_root(new_root);
    return std::move(b.out);
}

// ---- run / verify ----

RunResult run_protocol(const ProtocolTree& tree, int x, int y) {
    if (tree.root() < 0) throw PreconditionError("run_protocol: empty tree");
    const ProtocolNode* n = &tree.node(tree.root());
    if (!n->domain.contains(x, y)) throw PreconditionError("run_protocol: input outside the domain");
    RunResult r;
    while (!n->is_leaf()) {
        int idx = n->speaker == 0 ? x : y;
        bool in0 = std::binary_search(n->split[0].begin(), n->split[0].end(), idx);
        r.transcript.push_back(in0 ? '0' : '1');
        n = &tree.node(n->child[in0 ? 0 : 1]);
    }
    r.value = n->leaf_value;
    return r;
}

VerifyReport verify_protocol(const SignMatrix& f, const ProtocolTree& tree) {
    VerifyReport rep;
    if (tree.root() < 0) {
        rep.reason = "empty tree";
        return rep;
    }
    const Rectangle full = Rectangle::full(f.n_rows(), f.n_cols());
    if (!(tree.node(tree.root()).domain == full)) {
        rep.reason = "root domain is not the full matrix";
        return rep;
    }
    // structural pass
    std::vector<int> stack{tree.root()};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const ProtocolNode& n = tree.node(id);
        if (n.is_leaf()) {
            if (n.domain.empty()) {
                rep.reason = "empty leaf domain at node " + std::to_string(id);
                return rep;
            }
            for (int i : n.domain.rows)
                for (int j : n.domain.cols)
                    if (f.at(i, j) != n.leaf_value) {
                        rep.reason = "leaf not monochromatic at node " + std::to_string(id);
                        rep.counterexample = {{i, j}};
                        return rep;
                    }
            continue;
        }
        if (n.child[0] < 0 || n.child[1] < 0 || n.child[0] >= tree.size() ||
            n.child[1] >= tree.size()) {
            rep.reason = "missing child at node " + std::to_string(id);
            return rep;
        }
        const std::vector<int>& side = n.speaker == 0 ? n.domain.rows : n.domain.cols;
        std::vector<int> merged = n.split[0];
        merged.insert(merged.end(), n.split[1].begin(), n.split[1].end());
        std::sort(merged.begin(), merged.end());
        if (n.split[0].empty() || n.split[1].empty() || merged != side) {
            rep.reason = "split does not partition the speaker side at node " + std::to_string(id);
            return rep;
        }
        for (int k = 0; k < 2; ++k) {
            const Rectangle& cd = tree.node(n.child[k]).domain;
            Rectangle expected = n.speaker == 0 ? Rectangle{n.split[std::size_t(k)], n.domain.cols}
                                                : Rectangle{n.domain.rows, n.split[std::size_t(k)]};
            if (!(cd == expected)) {
                rep.reason = "child domain mismatch at node " + std::to_string(id);
                return rep;
            }
            stack.push_back(n.child[k]);
        }
    }
    // extensional pass
    for (int i = 0; i < f.n_rows(); ++i)
        for (int j = 0; j < f.n_cols(); ++j)
            if (run_protocol(tree, i, j).value != f.at(i, j)) {
                rep.reason = "protocol output differs from f";
                rep.counterexample = {{i, j}};
                return rep;
            }
    rep.pass = true;
    return rep;
}

// ---- exact_cc ----

int exact_cc(const SignMatrix& f) {
    const int cc_cap = cap_from_env("LOGRANK_CC_CAP", 8);
    if (f.n_rows() > cc_cap || f.n_cols() > cc_cap)
        throw CapError("exact_cc: matrices larger than 8x8");
    const int n = f.n_rows(), m = f.n_cols();
    std::vector<std::int8_t> memo(std::size_t(1) << (n + m), std::int8_t(-1));

    auto key = [&](unsigned rm, unsigned cm) { return std::size_t(rm) | (std::size_t(cm) << n); };

    auto mono = [&](unsigned rm, unsigned cm) {
        int first = 0;
        for (int i = 0; i < n; ++i) {
            if (!(rm >> i & 1)) continue;
            for (int j = 0; j < m; ++j) {
                if (!(cm >> j & 1)) continue;
                if (first == 0) first = f.at(i, j);
                else if (f.at(i, j) != first) return false;
            }
        }
        return true;
    };

    std::function<int(unsigned, unsigned)> solve = [&](unsigned rm, unsigned cm) -> int {
        std::int8_t& slot = memo[key(rm, cm)];
        if (slot >= 0) return slot;
        if (mono(rm, cm)) return slot = 0;
        int best = 127;
        unsigned low_r = rm & (~rm + 1);
        if (__builtin_popcount(rm) >= 2) {
            for (unsigned s = (rm - 1) & rm; s; s = (s - 1) & rm) {
                if (!(s & low_r)) continue;  // each bipartition once
                best = std::min(best, 1 + std::max(solve(s, cm), solve(rm ^ s, cm)));
            }
        }
        unsigned low_c = cm & (~cm + 1);
        if (__builtin_popcount(cm) >= 2) {
            for (unsigned s = (cm - 1) & cm; s; s = (s - 1) & cm) {
                if (!(s & low_c)) continue;
                best = std::min(best, 1 + std::max(solve(rm, s), solve(rm, cm ^ s)));
            }
        }
        return slot = std::int8_t(best);
    };

    return solve((1u << n) - 1, (1u << m) - 1);
}

// ---- complexity ----

ComplexityReport complexity_report(const SignMatrix& f, const BuildResult& built,
                                   const ProtocolTree& balanced) {
    ComplexityReport rep;
    rep.depth = built.tree.depth();
    rep.leaves = built.tree.leaf_count();
    rep.balanced_depth = balanced.depth();
    rep.rank = rank_exact(f);

    int phases = rep.rank <= 1 ? 0 : int(std::ceil(std::log2(double(rep.rank))));
    rep.c_meas.assign(std::size_t(phases) + 1, 0.0);
    for (const BuildNodeStats& st : built.stats) {
        if (st.rank < 1) continue;
        // phase i collects nodes whose rank lies in (r/2^{i+1}, r/2^i]
        int i = 0;
        while (i < phases && st.rank * (1ll << (i + 1)) <= rep.rank) ++i;
        double c = std::log2(double(st.domain_area) / double(std::max<std::size_t>(st.mono_area, 1)));
        rep.c_meas[std::size_t(i)] = std::max(rep.c_meas[std::size_t(i)], c);
    }
    double lg = rep.rank >= 1 ? std::log2(double(rep.rank)) : 0.0;
    double sum = 0;
    for (double c : rep.c_meas) sum += c;
    rep.nw_bound = 4.0 * lg * lg + 4.0 * sum;
    rep.sqrt_bound = 32.0 * std::sqrt(double(rep.rank)) * std::log2(double(rep.rank) + 1.0);
    if (f.n_rows() <= 8 && f.n_cols() <= 8) rep.exact_cc = exact_cc(f);
    return rep;
}

// ---- JSON ----

namespace {

json node_to_json(const ProtocolTree& t, int id) {
    const ProtocolNode& n = t.node(id);
    json dom{{"rows", n.domain.rows}, {"cols", n.domain.cols}};
    if (n.is_leaf()) return json{{"domain", dom}, {"leaf", n.leaf_value}};
    return json{{"domain", dom},
                {"speaker", n.speaker == 0 ? "row" : "col"},
                {"split", json::array({n.split[0], n.split[1]})},
                {"children", json::array({node_to_json(t, n.child[0]), node_to_json(t, n.child[1])})}};
}

int node_from_json(const json& j, ProtocolTree& t) {
    if (!j.is_object() || !j.contains("domain"))
        throw ParseError("protocol JSON: node must have a domain");
    Rectangle dom;
    dom.rows = j["domain"]["rows"].get<std::vector<int>>();
    dom.cols = j["domain"]["cols"].get<std::vector<int>>();
    dom.normalize();
    if (j.contains("leaf")) {
        int v = j["leaf"].get<int>();
        if (v != 1 && v != -1) throw ParseError("protocol JSON: leaf value must be +1/-1");
        return t.add_leaf(std::move(dom), v);
    }
    if (!j.contains("speaker") || !j.contains("split") || !j.contains("children"))
        throw ParseError("protocol JSON: internal node needs speaker/split/children");
    std::string sp = j["speaker"].get<std::string>();
    if (sp != "row" && sp != "col") throw ParseError("protocol JSON: speaker must be row or col");
    auto split0 = j["split"][0].get<std::vector<int>>();
    auto split1 = j["split"][1].get<std::vector<int>>();
    // index sets: order within a part carries no meaning
    std::sort(split0.begin(), split0.end());
    std::sort(split1.begin(), split1.end());
    int c0 = node_from_json(j["children"][0], t);
    int c1 = node_from_json(j["children"][1], t);
    return t.add_internal(std::move(dom), sp == "row" ? 0 : 1, std::move(split0), std::move(split1),
                          c0, c1);
}

}  // namespace

std::string ProtocolTree::to_json() const {
    if (root_ < 0) throw PreconditionError("ProtocolTree::to_json: empty tree");
    return node_to_json(*this, root_).dump();
}

ProtocolTree ProtocolTree::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("protocol JSON: ") + e.what());
    }
    ProtocolTree t;
    try {
        t.set_root(node_from_json(j, t));
    } catch (const json::exception& e) {
        throw ParseError(std::string("protocol JSON: ") + e.what());
    }
    return t;
}

}  // namespace logrank
