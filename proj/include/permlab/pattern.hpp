#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/permutation.hpp"
#include "permlab/property.hpp"
#include "permlab/rational.hpp"

namespace permlab {

/// A k-pattern: a non-empty sequence of non-empty subsets of [k].  Each set
/// is stored sorted ascending.  Also used for the K-patterns of the grid
/// machinery (with k = K).
class KPattern {
public:
    KPattern(int k, std::vector<std::vector<int>> sets) : k_(k), sets_(std::move(sets)) {
        if (k_ < 1) throw Error("k-pattern requires k >= 1");
        if (sets_.empty()) throw Error("k-pattern requires at least one set");
        for (auto& s : sets_) {
            if (s.empty()) throw Error("k-pattern sets must be non-empty");
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            for (int x : s)
                if (x < 1 || x > k_)
                    throw Error("k-pattern element " + std::to_string(x) + " outside [1," +
                                std::to_string(k_) + "]");
        }
    }

    /// The basic k-pattern: the single set [k].
    static KPattern basic(int k) {
        std::vector<int> all(k);
        std::iota(all.begin(), all.end(), 1);
        return KPattern(k, {all});
    }

    int k() const { return k_; }
    int length() const { return static_cast<int>(sets_.size()); }
    const std::vector<std::vector<int>>& sets() const { return sets_; }
    const std::vector<int>& set(int i) const { return sets_[i - 1]; }  // 1-indexed

    /// |A|_i = |A_1| + ... + |A_i|, with |A|_0 = 0.
    int prefix_size(int i) const {
        int s = 0;
        for (int t = 0; t < i; ++t) s += static_cast<int>(sets_[t].size());
        return s;
    }
    int total_size() const { return prefix_size(length()); }

    bool is_basic() const {
        return length() == 1 && static_cast<int>(sets_[0].size()) == k_;
    }
    bool is_simple() const {
        return std::all_of(sets_.begin(), sets_.end(),
                           [](const auto& s) { return s.size() == 1; });
    }
    /// Monotone: elements of earlier sets are strictly smaller than
    /// elements of later sets.
    bool is_monotone() const {
        for (std::size_t i = 0; i + 1 < sets_.size(); ++i)
            if (sets_[i].back() >= sets_[i + 1].front()) return false;
        return true;
    }

    bool contains(int i, int x) const {
        return std::binary_search(sets_[i - 1].begin(), sets_[i - 1].end(), x);
    }

    bool operator==(const KPattern& o) const = default;
    bool operator<(const KPattern& o) const {
        if (k_ != o.k_) return k_ < o.k_;
        return sets_ < o.sets_;
    }

private:
    int k_;
    std::vector<std::vector<int>> sets_;
};

/// Badness verdict of a pattern under a property: either Bad with the exact
/// order (the least m admitting no member m-expansion), or GoodUpTo the
/// scan bound (member expansions found for every m up to it).
struct BadnessVerdict {
    enum class Kind { Bad, GoodUpTo };
    Kind kind;
    int value;  // Bad: the order <A>; GoodUpTo: m_max

    static BadnessVerdict bad(int order) { return {Kind::Bad, order}; }
    static BadnessVerdict good_up_to(int m_max) { return {Kind::GoodUpTo, m_max}; }
    bool is_bad() const { return kind == Kind::Bad; }
    bool operator==(const BadnessVerdict&) const = default;
};

/// The symbol function g^{A,m} : [m*|A|_{|A|}] -> [k].  Block i covers
/// positions (m*|A|_{i-1}, m*|A|_i] and cycles through the sorted elements
/// of A_i.
inline int g_value(const KPattern& a, int m, int j) {
    const int total = m * a.total_size();
    if (j < 1 || j > total)
        throw IndexOutOfRange("g index " + std::to_string(j) + " outside [1," +
                              std::to_string(total) + "]");
    int i = 1;
    while (m * a.prefix_size(i) < j) ++i;
    const auto& set = a.set(i);
    const int t = j - m * a.prefix_size(i - 1);         // 1-based within block i
    const int idx = (t - 1) % static_cast<int>(set.size());  // 1-based modulus lands in [b]
    return set[idx];
}

/// The whole symbol sequence g^{A,m}(1..m*|A|_{|A|}).
inline std::vector<int> g_sequence(const KPattern& a, int m) {
    const int total = m * a.total_size();
    std::vector<int> out(total);
    int pos = 0;
    for (int i = 1; i <= a.length(); ++i) {
        const auto& set = a.set(i);
        const int block = m * static_cast<int>(set.size());
        for (int t = 0; t < block; ++t) out[pos++] = set[t % set.size()];
    }
    return out;
}

/// Is pi an m-expansion of A?  All-pairs check of the defining condition:
/// g(j) < g(j') implies pi(j) < pi(j').  Wrong order returns false.
inline bool is_expansion(const Permutation& pi, const KPattern& a, int m) {
    if (pi.order() != m * a.total_size()) return false;
    const auto g = g_sequence(a, m);
    const int n = pi.order();
    for (int j = 1; j <= n; ++j)
        for (int jp = 1; jp <= n; ++jp)
            if (g[j - 1] < g[jp - 1] && pi(j) >= pi(jp)) return false;
    return true;
}

/// Multiplicity of symbol v in A: the number of sets containing it.
inline int symbol_multiplicity(const KPattern& a, int v) {
    int mult = 0;
    for (int i = 1; i <= a.length(); ++i)
        if (a.contains(i, v)) ++mult;
    return mult;
}

/// Exact number of m-expansions: product over symbols of (m*mult)!.
inline Int count_expansions(const KPattern& a, int m) {
    Int total = 1;
    for (int v = 1; v <= a.k(); ++v) {
        const int mult = symbol_multiplicity(a, v);
        for (int t = 2; t <= m * mult; ++t) total *= t;
    }
    return total;
}

namespace detail {

/// Layout of an expansion: for each position its symbol, and for each
/// symbol the block of values it owns (blocks ordered by symbol).
struct ExpansionLayout {
    std::vector<int> g;                         // symbol per position, 0-indexed
    std::vector<std::vector<int>> value_block;  // per symbol in [k], 1-indexed by symbol-1
    std::vector<std::vector<int>> positions;    // positions (1-based) per symbol
};

inline ExpansionLayout expansion_layout(const KPattern& a, int m) {
    ExpansionLayout lay;
    lay.g = g_sequence(a, m);
    lay.value_block.resize(a.k());
    lay.positions.resize(a.k());
    int next_value = 1;
    for (int v = 1; v <= a.k(); ++v) {
        const int size = m * symbol_multiplicity(a, v);
        for (int t = 0; t < size; ++t) lay.value_block[v - 1].push_back(next_value++);
    }
    for (std::size_t j = 0; j < lay.g.size(); ++j)
        lay.positions[lay.g[j] - 1].push_back(static_cast<int>(j) + 1);
    return lay;
}

}  // namespace detail

/// Every m-expansion of A, each exactly once.  Per symbol, its value block
/// may be assigned to its positions in any order, independently of the
/// other symbols; enumeration is the product of per-symbol orderings.
inline std::vector<Permutation> enumerate_expansions(const KPattern& a, int m,
                                                     Int cap = Int(1) << 20) {
    if (count_expansions(a, m) > cap)
        throw CapExceeded("expansion count exceeds cap for enumeration");
    const auto lay = detail::expansion_layout(a, m);
    std::vector<std::vector<int>> orders;  // current value order per used symbol
    std::vector<int> used_symbols;
    for (int v = 1; v <= a.k(); ++v)
        if (!lay.value_block[v - 1].empty()) {
            used_symbols.push_back(v);
            orders.push_back(lay.value_block[v - 1]);
        }
    std::vector<Permutation> out;
    const int n = static_cast<int>(lay.g.size());
    for (;;) {
        std::vector<int> images(n);
        for (std::size_t s = 0; s < used_symbols.size(); ++s) {
            const auto& pos = lay.positions[used_symbols[s] - 1];
            for (std::size_t t = 0; t < pos.size(); ++t) images[pos[t] - 1] = orders[s][t];
        }
        out.emplace_back(std::move(images));
        // odometer over per-symbol permutations
        std::size_t s = 0;
        while (s < orders.size() && !std::next_permutation(orders[s].begin(), orders[s].end()))
            ++s;
        if (s == orders.size()) break;
    }
    return out;
}

/// Searches for an m-expansion of A that is a member of the (hereditary)
/// property.  Backtracks position by position over the unused values of the
/// position's symbol block; a prefix whose induced subpermutation is not a
/// member cannot extend to a member, so it is pruned.
///
/// Returns nullopt when no member expansion exists.  Throws BudgetExhausted
/// when the node budget runs out before the search is complete -- callers
/// must never conflate the two.
inline std::optional<Permutation> find_member_expansion(const KPattern& a, int m,
                                                        const PropertyOracle& oracle,
                                                        long long node_budget = 1'000'000) {
    const auto lay = detail::expansion_layout(a, m);
    const int n = static_cast<int>(lay.g.size());
    std::vector<int> images(n, 0);
    std::vector<std::vector<char>> taken(a.k());
    for (int v = 1; v <= a.k(); ++v) taken[v - 1].assign(lay.value_block[v - 1].size(), 0);
    long long nodes = 0;

    std::function<bool(int)> dfs = [&](int j) -> bool {
        if (j > n) return true;
        const int v = lay.g[j - 1];
        const auto& block = lay.value_block[v - 1];
        for (std::size_t t = 0; t < block.size(); ++t) {
            if (taken[v - 1][t]) continue;
            if (++nodes > node_budget) throw BudgetExhausted("find_member_expansion budget");
            images[j - 1] = block[t];
            std::vector<int> prefix(images.begin(), images.begin() + j);
            if (oracle(reduce_to_permutation(prefix))) {
                taken[v - 1][t] = 1;
                if (dfs(j + 1)) return true;
                taken[v - 1][t] = 0;
            }
        }
        return false;
    };
    if (dfs(1)) return Permutation(images);
    return std::nullopt;
}

/// Decides P-badness by scanning m = 1..m_max.  The first m with no member
/// expansion is the exact P-order (an m-expansion in P contains an
/// (m-1)-expansion in P as a subpermutation, so failures are monotone).
inline BadnessVerdict decide_pattern(const KPattern& a, const PropertyOracle& oracle, int m_max,
                                     long long node_budget = 1'000'000) {
    for (int m = 1; m <= m_max; ++m) {
        if (!find_member_expansion(a, m, oracle, node_budget))
            return BadnessVerdict::bad(m);
    }
    return BadnessVerdict::good_up_to(m_max);
}

/// All P-reductions of A at the given P-order: every pattern obtained by
/// replacing exactly one set of size >= 2 with a sequence of 1..|A_i|*order
/// non-empty proper subsets of it (repeats allowed, no coverage required).
/// Identical patterns arising from different positions are deduplicated;
/// the enumeration order is deterministic.
inline std::vector<KPattern> reductions(const KPattern& a, int order,
                                        Int child_cap = Int(200'000)) {
    std::vector<KPattern> out;
    std::set<KPattern> seen;
    Int emitted_bound = 0;
    for (int i = 1; i <= a.length(); ++i) {
        const auto& set = a.set(i);
        const int sz = static_cast<int>(set.size());
        if (sz < 2) continue;
        // proper non-empty subsets, in increasing bitmask order
        std::vector<std::vector<int>> subsets;
        for (unsigned mask = 1; mask + 1 < (1u << sz); ++mask) {
            std::vector<int> s;
            for (int b = 0; b < sz; ++b)
                if (mask & (1u << b)) s.push_back(set[b]);
            subsets.push_back(std::move(s));
        }
        const int max_len = sz * order;
        for (int len = 1; len <= max_len; ++len) {
            emitted_bound += boost::multiprecision::pow(Int(subsets.size()),
                                                        static_cast<unsigned>(len));
            if (emitted_bound > child_cap)
                throw CapExceeded("reduction child count exceeds cap");
            std::vector<int> odo(len, 0);
            for (;;) {
                std::vector<std::vector<int>> sets;
                sets.reserve(a.length() - 1 + len);
                for (int t = 1; t < i; ++t) sets.push_back(a.set(t));
                for (int t = 0; t < len; ++t) sets.push_back(subsets[odo[t]]);
                for (int t = i + 1; t <= a.length(); ++t) sets.push_back(a.set(t));
                KPattern child(a.k(), std::move(sets));
                if (seen.insert(child).second) out.push_back(std::move(child));
                int pos = len - 1;
                while (pos >= 0 && ++odo[pos] == static_cast<int>(subsets.size()))
                    odo[pos--] = 0;
                if (pos < 0) break;
            }
        }
    }
    return out;
}

/// The score of A: m_i = number of sets of cardinality k+1-i.  Strictly
/// lexicographically decreasing along reduction edges, which is what makes
/// the branching finite.
inline std::vector<long long> score(const KPattern& a) {
    std::vector<long long> s(a.k(), 0);
    for (int i = 1; i <= a.length(); ++i) {
        const int card = static_cast<int>(a.set(i).size());
        ++s[a.k() + 1 - card - 1];
    }
    return s;
}

inline bool score_less(const std::vector<long long>& a, const std::vector<long long>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace permlab
