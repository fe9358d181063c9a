#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

/// Membership decision procedure for a hereditary permutation property.
/// The hereditary contract (membership closed under subpermutations) is a
/// caller promise; it cannot be enforced in general and is spot-checked up
/// to a bound by verify_hereditary.  member must be deterministic,
/// effect-free and safe to call concurrently.
struct PropertyOracle {
    std::function<bool(const Permutation&)> member;
    std::string name;
    /// Orders beyond which member is unreliable; empty = unbounded.
    std::optional<int> max_certified_order;

    bool operator()(const Permutation& pi) const { return member(pi); }
};

/// Does tau occur in pi as a subpermutation?  Backtracking over increasing
/// index choices with value-interval pruning; the naive index-set
/// enumeration is retained in the tests as the oracle.
inline bool occurs(const Permutation& tau, const Permutation& pi) {
    const int m = tau.order();
    const int n = pi.order();
    if (m < 1) throw OrderTooSmall("pattern must be non-empty");
    if (m > n) return false;

    std::vector<int> chosen(m);  // chosen values pi(x_t)
    // dfs over positions of pi, keeping per-step value bounds.
    std::function<bool(int, int)> dfs = [&](int t, int from) -> bool {
        if (t == m) return true;
        // value interval forced by already-chosen entries
        int lo = 0, hi = n + 1;
        for (int s = 0; s < t; ++s) {
            if (tau(s + 1) < tau(t + 1))
                lo = std::max(lo, chosen[s]);
            else
                hi = std::min(hi, chosen[s]);
        }
        for (int x = from; x <= n - (m - 1 - t); ++x) {
            const int v = pi(x);
            if (v > lo && v < hi) {
                chosen[t] = v;
                if (dfs(t + 1, x + 1)) return true;
            }
        }
        return false;
    };
    return dfs(0, 1);
}

/// A finite set of forbidden patterns, reduced at construction: any pattern
/// containing another basis pattern as a subpermutation is dropped.
class Basis {
public:
    explicit Basis(std::vector<Permutation> patterns) {
        std::sort(patterns.begin(), patterns.end(),
                  [](const Permutation& a, const Permutation& b) {
                      if (a.order() != b.order()) return a.order() < b.order();
                      return a < b;
                  });
        patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
        for (const auto& p : patterns) {
            bool redundant = false;
            for (const auto& kept : forbidden_) {
                if (kept.order() < p.order() && occurs(kept, p)) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) forbidden_.push_back(p);
        }
    }

    const std::vector<Permutation>& forbidden() const { return forbidden_; }

private:
    std::vector<Permutation> forbidden_;
};

/// The pattern-avoidance oracle Av(basis): membership = none of the basis
/// patterns occurs.  Hereditary by construction.
inline PropertyOracle av_oracle(Basis basis) {
    std::string name = "Av(";
    for (std::size_t i = 0; i < basis.forbidden().size(); ++i) {
        if (i) name += ",";
        for (int j = 1; j <= basis.forbidden()[i].order(); ++j)
            name += std::to_string(basis.forbidden()[i](j));
    }
    name += ")";
    auto patterns = basis.forbidden();
    return PropertyOracle{
        [patterns = std::move(patterns)](const Permutation& pi) {
            for (const auto& tau : patterns)
                if (occurs(tau, pi)) return false;
            return true;
        },
        std::move(name), std::nullopt};
}

/// The trivial property containing every permutation.
inline PropertyOracle all_permutations_oracle() {
    return PropertyOracle{[](const Permutation&) { return true; }, "all", std::nullopt};
}

/// Calls fn for every permutation of order n, in lexicographic order of the
/// image sequences.  fn returning false stops the enumeration.
inline void for_each_permutation(int n, const std::function<bool(const Permutation&)>& fn) {
    if (n < 1) throw OrderTooSmall("enumerate_all requires n >= 1");
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    do {
        if (!fn(Permutation(v))) return;
    } while (std::next_permutation(v.begin(), v.end()));
}

/// All n! permutations of order n, lexicographic.  Desk-scale only.
inline std::vector<Permutation> enumerate_all(int n) {
    std::vector<Permutation> out;
    for_each_permutation(n, [&](const Permutation& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

enum class Metric { kendall, rectangular };

/// Exact distance from pi to the property: minimum distance to any member
/// of the same order, by exhaustive enumeration.  An order with no members
/// is an error (the minimum is over an empty set), never a default.
inline Rational brute_distance(const Permutation& pi, const PropertyOracle& oracle, Metric metric,
                               int order_guard = 8) {
    const int n = pi.order();
    if (n > order_guard)
        throw OrderTooLargeForBruteForce("order " + std::to_string(n) + " exceeds guard " +
                                         std::to_string(order_guard));
    std::optional<Rational> best;
    for_each_permutation(n, [&](const Permutation& sigma) {
        if (oracle(sigma)) {
            Rational d;
            if (metric == Metric::kendall)
                d = (n < 2) ? Rational(0) : kendall_tau(pi, sigma);
            else
                d = rectangular(pi, sigma);
            if (!best || d < *best) best = d;
        }
        return !(best && *best == 0);
    });
    if (!best) throw EmptyPropertyAtOrder("property " + oracle.name + " has no member of order " +
                                          std::to_string(n));
    return *best;
}

/// Result of a hereditary-contract check: either ok, or the first member
/// whose one-element-deleted subpermutation is not a member.
struct HereditaryCheck {
    bool ok = true;
    std::optional<Permutation> violator;
    std::vector<int> deleted_index_set;
};

/// Exhaustively verifies the hereditary contract up to order n_max by
/// checking every member against all one-element deletions.
inline HereditaryCheck verify_hereditary(const PropertyOracle& oracle, int n_max) {
    if (n_max > 8) throw OrderTooLargeForBruteForce("verify_hereditary bound exceeds 8");
    HereditaryCheck result;
    for (int n = 2; n <= n_max && result.ok; ++n) {
        for_each_permutation(n, [&](const Permutation& pi) {
            if (!oracle(pi)) return true;
            for (int drop = 1; drop <= n; ++drop) {
                std::vector<int> keep;
                keep.reserve(n - 1);
                for (int i = 1; i <= n; ++i)
                    if (i != drop) keep.push_back(i);
                if (!oracle(subpermutation(pi, keep))) {
                    result.ok = false;
                    result.violator = pi;
                    result.deleted_index_set = keep;
                    return false;
                }
            }
            return true;
        });
    }
    return result;
}

/// Basis file: one permutation per line in the standard text format;
/// blank lines and '#' comments ignored.
inline Basis parse_basis(std::istream& in) {
    std::vector<Permutation> patterns;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        patterns.push_back(parse_permutation(line));
    }
    return Basis(std::move(patterns));
}

}  // namespace permlab
