#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "permlab/branching.hpp"
#include "permlab/property.hpp"

using namespace permlab;

namespace {

PropertyOracle av21() { return av_oracle(Basis({make_permutation({2, 1})})); }

void check_weights(const BranchingNode& node, int k) {
    if (node.is_leaf()) {
        if (node.verdict.is_bad()) {
            REQUIRE(node.pattern.is_simple());
            REQUIRE(node.weight == Int(k) * node.verdict.value);
        } else {
            REQUIRE(node.weight == 1);
        }
        return;
    }
    REQUIRE(node.verdict.is_bad());
    Int max_child = 0;
    for (const auto& c : node.children) {
        REQUIRE(node.weight >= c->weight);
        max_child = std::max(max_child, c->weight);
        check_weights(*c, k);
    }
    REQUIRE(node.weight == Int(node.verdict.value) * k * max_child);
}

}  // namespace

TEST_CASE("Av(21) k=1 branching is a single good leaf") {
    const auto tree = build_branching(av21(), 1, 4);
    CHECK(tree.node_count == 1);
    CHECK(tree.depth == 1);
    CHECK(tree.root_weight == 1);
    CHECK_FALSE(tree.root->verdict.is_bad());
}

TEST_CASE("Av(21) k=2 branching regression") {
    const auto tree = build_branching(av21(), 2, 4);
    CHECK(tree.node_count == 31);
    CHECK(tree.depth == 2);
    CHECK(tree.root_weight == 8);
    REQUIRE(tree.root->verdict == BadnessVerdict::bad(2));
    REQUIRE(tree.root->children.size() == 30);
    const auto root_score = score(tree.root->pattern);
    int bad = 0, good = 0;
    for (const auto& child : tree.root->children) {
        REQUIRE(child->is_leaf());
        REQUIRE(child->pattern.is_simple());
        REQUIRE(score_less(score(child->pattern), root_score));
        if (child->verdict.is_bad()) {
            REQUIRE(child->verdict.value == 1);
            REQUIRE(child->weight == 2);
            ++bad;
        } else {
            REQUIRE(child->weight == 1);
            ++good;
        }
        // a simple child over {1,2} is good iff its symbol sequence never descends
        bool descends = false;
        const auto& sets = child->pattern.sets();
        for (std::size_t i = 0; i + 1 < sets.size(); ++i)
            if (sets[i][0] > sets[i + 1][0]) descends = true;
        REQUIRE(child->verdict.is_bad() == descends);
    }
    CHECK(bad + good == 30);
    check_weights(*tree.root, 2);
}

TEST_CASE("all-permutations branching is a single node for any k") {
    for (int k = 1; k <= 4; ++k) {
        const auto tree = build_branching(all_permutations_oracle(), k, 3);
        CHECK(tree.node_count == 1);
        CHECK(tree.depth == 1);
        CHECK(tree.root_weight == 1);
    }
}

TEST_CASE("rebuild determinism") {
    const auto a = build_branching(av21(), 2, 4);
    const auto b = build_branching(av21(), 2, 4);
    CHECK(tree_to_json(a) == tree_to_json(b));
}

TEST_CASE("node cap") {
    CHECK_THROWS_AS(build_branching(av21(), 2, 4, 1'000'000, 10), NodeCapExceeded);
}

TEST_CASE("walk_parameters") {
    const auto tree = build_branching(av21(), 2, 4);
    CHECK(walk_parameters(tree, Rational(1, 10)).K == 160);
    CHECK(walk_parameters(tree, Rational(3, 100)).K == 534);  // ceil(1600/3)
    const auto trivial = build_branching(all_permutations_oracle(), 1, 2);
    CHECK(walk_parameters(trivial, Rational(1)).K == 1);
    CHECK_THROWS_AS(walk_parameters(tree, Rational(0)), Error);
}

TEST_CASE("tree JSON round trip") {
    const auto tree = build_branching(av21(), 2, 3);
    const auto j = tree_to_json(tree);
    const auto back = tree_from_json(j);
    CHECK(tree_to_json(back) == j);
    CHECK(back.root_weight == tree.root_weight);
    CHECK(back.node_count == tree.node_count);
}
