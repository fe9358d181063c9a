#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "permlab/pattern.hpp"
#include "permlab/property.hpp"
#include "permlab/rational.hpp"

namespace permlab {

/// One node of a k-branching: its pattern, badness verdict, children (in
/// the deterministic reduction enumeration order) and integer weight.
struct BranchingNode {
    KPattern pattern;
    BadnessVerdict verdict;
    std::vector<std::unique_ptr<BranchingNode>> children;
    Int weight;

    bool is_leaf() const { return children.empty(); }
};

/// The k-branching of a hereditary property: the unique rooted tree grown
/// from the basic k-pattern by P-reductions, with bottom-up weights.
struct BranchingTree {
    std::unique_ptr<BranchingNode> root;
    int k = 0;
    int m_max = 0;       // verdict scan bound used; GoodUpTo leaves are conditional on it
    int depth = 0;       // maximum number of vertices on a root-leaf path
    Int root_weight;
    std::size_t node_count = 0;
};

namespace detail {

inline std::unique_ptr<BranchingNode> build_node(const KPattern& pattern,
                                                 const PropertyOracle& oracle, int k, int m_max,
                                                 long long node_budget, std::size_t node_cap,
                                                 Int child_cap, std::size_t& nodes, int& depth,
                                                 int level) {
    if (++nodes > node_cap) throw NodeCapExceeded("branching exceeds node cap");
    depth = std::max(depth, level);
    auto node = std::make_unique<BranchingNode>(
        BranchingNode{pattern, decide_pattern(pattern, oracle, m_max, node_budget), {}, Int(0)});
    if (!node->verdict.is_bad()) {
        node->weight = 1;
        return node;
    }
    const int order = node->verdict.value;
    if (pattern.is_simple()) {
        node->weight = Int(k) * order;
        return node;
    }
    const auto parent_score = score(pattern);
    Int max_child_weight = 0;
    for (const auto& child_pattern : reductions(pattern, order, child_cap)) {
        // the well-ordering that makes the tree finite; asserted, not assumed
        if (!score_less(score(child_pattern), parent_score))
            throw InternalContradiction("reduction does not decrease the score");
        auto child = build_node(child_pattern, oracle, k, m_max, node_budget, node_cap, child_cap,
                                nodes, depth, level + 1);
        max_child_weight = std::max(max_child_weight, child->weight);
        node->children.push_back(std::move(child));
    }
    node->weight = Int(order) * k * max_child_weight;
    return node;
}

}  // namespace detail

/// Builds the k-branching of the property.  Verdicts are budgeted: a
/// pattern whose goodness could not be decided within m_max raises
/// BudgetExhausted rather than guessing.
inline BranchingTree build_branching(const PropertyOracle& oracle, int k, int m_max = 4,
                                     long long node_budget = 1'000'000,
                                     std::size_t node_cap = 100'000,
                                     Int child_cap = Int(200'000)) {
    if (k < 1) throw Error("build_branching requires k >= 1");
    BranchingTree tree;
    tree.k = k;
    tree.m_max = m_max;
    tree.root = detail::build_node(KPattern::basic(k), oracle, k, m_max, node_budget, node_cap,
                                   child_cap, tree.node_count, tree.depth, 1);
    tree.root_weight = tree.root->weight;
    return tree;
}

/// The constant K = ceil(d * w0 / eps) from the walk guarantee.
struct WalkConstants {
    int depth;
    Int root_weight;
    Int K;
};

inline WalkConstants walk_parameters(const BranchingTree& tree, const Rational& eps) {
    if (eps <= 0 || eps > 1) throw Error("epsilon must lie in (0,1]");
    WalkConstants c{tree.depth, tree.root_weight, 0};
    c.K = ceil_rat(Rational(Int(tree.depth) * tree.root_weight) / eps);
    return c;
}

// ---- serialization -------------------------------------------------------

inline nlohmann::json pattern_to_json(const KPattern& a) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : a.sets()) sets.push_back(s);
    return nlohmann::json{{"k", a.k()}, {"sets", sets}};
}

inline KPattern pattern_from_json(const nlohmann::json& j) {
    return KPattern(j.at("k").get<int>(), j.at("sets").get<std::vector<std::vector<int>>>());
}

inline nlohmann::json verdict_to_json(const BadnessVerdict& v) {
    if (v.is_bad()) return nlohmann::json{{"bad", v.value}};
    return nlohmann::json{{"good_up_to", v.value}};
}

inline BadnessVerdict verdict_from_json(const nlohmann::json& j) {
    if (j.contains("bad")) return BadnessVerdict::bad(j.at("bad").get<int>());
    return BadnessVerdict::good_up_to(j.at("good_up_to").get<int>());
}

inline nlohmann::json node_to_json(const BranchingNode& node) {
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : node.children) children.push_back(node_to_json(*c));
    return nlohmann::json{{"pattern", pattern_to_json(node.pattern)},
                          {"verdict", verdict_to_json(node.verdict)},
                          {"weight", node.weight.str()},
                          {"children", children}};
}

inline std::unique_ptr<BranchingNode> node_from_json(const nlohmann::json& j) {
    auto node = std::make_unique<BranchingNode>(BranchingNode{
        pattern_from_json(j.at("pattern")), verdict_from_json(j.at("verdict")), {},
        Int(j.at("weight").get<std::string>())});
    for (const auto& c : j.at("children")) node->children.push_back(node_from_json(c));
    return node;
}

inline nlohmann::json tree_to_json(const BranchingTree& tree) {
    return nlohmann::json{{"k", tree.k},
                          {"m_max", tree.m_max},
                          {"depth", tree.depth},
                          {"root_weight", tree.root_weight.str()},
                          {"node_count", tree.node_count},
                          {"root", node_to_json(*tree.root)}};
}

inline BranchingTree tree_from_json(const nlohmann::json& j) {
    BranchingTree tree;
    tree.k = j.at("k").get<int>();
    tree.m_max = j.at("m_max").get<int>();
    tree.depth = j.at("depth").get<int>();
    tree.root_weight = Int(j.at("root_weight").get<std::string>());
    tree.node_count = j.at("node_count").get<std::size_t>();
    tree.root = node_from_json(j.at("root"));
    return tree;
}

}  // namespace permlab
