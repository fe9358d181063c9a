#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/rational.hpp"
#include "permlab/rng.hpp"

namespace permlab {

/// A permutation of order N, i.e. a bijection on [N] = {1,...,N}.
/// Immutable after construction; all interfaces are 1-indexed.
class Permutation {
public:
    /// Builds a permutation from its image sequence.  Rejects empty input
    /// and anything that is not a bijection on [N].
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        const std::size_t n = images_.size();
        if (n == 0) throw NotABijection("empty image sequence");
        std::vector<bool> seen(n, false);
        for (int v : images_) {
            if (v < 1 || static_cast<std::size_t>(v) > n)
                throw NotABijection("value " + std::to_string(v) + " out of range for order " +
                                    std::to_string(n));
            if (seen[v - 1]) throw NotABijection("duplicate value " + std::to_string(v));
            seen[v - 1] = true;
        }
    }

    int order() const { return static_cast<int>(images_.size()); }

    /// Image of position i, 1 <= i <= order().
    int operator()(int i) const { return images_[i - 1]; }

    const std::vector<int>& images() const { return images_; }

    bool operator==(const Permutation& o) const = default;
    bool operator<(const Permutation& o) const { return images_ < o.images_; }

    static Permutation identity(int n) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = i + 1;
        return Permutation(std::move(v));
    }

    static Permutation reverse(int n) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = n - i;
        return Permutation(std::move(v));
    }

    /// Cyclic shift: i -> i+1, with n -> 1.
    static Permutation shifted(int n) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = (i + 1) % n + 1;
        return Permutation(std::move(v));
    }

private:
    std::vector<int> images_;
};

inline Permutation make_permutation(std::vector<int> images) {
    return Permutation(std::move(images));
}

/// Rank-reduces an arbitrary sequence of distinct values to a permutation.
/// Helper shared by subpermutation extraction and the pattern searches.
inline Permutation reduce_to_permutation(const std::vector<int>& values) {
    const std::size_t n = values.size();
    if (n == 0) throw EmptyIndexSet("cannot reduce an empty value sequence");
    std::vector<int> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        ranks[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), values[i]) -
                                    sorted.begin()) +
                   1;
    }
    return Permutation(std::move(ranks));
}

/// The subpermutation of pi induced by the sorted index set X: the unique
/// permutation of order |X| preserving the relative order of the values of
/// pi at the selected indices.
inline Permutation subpermutation(const Permutation& pi, const std::vector<int>& indices) {
    if (indices.empty()) throw EmptyIndexSet("subpermutation of an empty index set");
    std::vector<int> values;
    values.reserve(indices.size());
    for (int x : indices) {
        if (x < 1 || x > pi.order())
            throw IndexOutOfRange("index " + std::to_string(x) + " outside [1," +
                                  std::to_string(pi.order()) + "]");
        values.push_back(pi(x));
    }
    return reduce_to_permutation(values);
}

/// Number of inverted pairs of pi.
inline long long inversions(const Permutation& pi) {
    const int n = pi.order();
    long long count = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (pi(i) > pi(j)) ++count;
    return count;
}

/// Normalized Kendall's tau distance: the fraction of index pairs on which
/// the two permutations disagree about the order, exact.
inline Rational kendall_tau(const Permutation& pi, const Permutation& sigma) {
    if (pi.order() != sigma.order())
        throw OrderMismatch("kendall_tau requires equal orders");
    const int n = pi.order();
    if (n < 2) throw OrderTooSmall("kendall_tau undefined for order < 2");
    long long discordant = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const bool a = pi(i) < pi(j);
            const bool b = sigma(i) < sigma(j);
            if (a != b) ++discordant;
        }
    return Rational(Int(discordant), Int(static_cast<long long>(n) * (n - 1) / 2));
}

/// Rectangular distance: max over interval pairs (S,T) of
/// | |pi(S) cap T| - |sigma(S) cap T| | / N.
///
/// For a fixed S the inner maximum over T equals max_t d(t) - min_t d(t)
/// where d(t) = #{x in S : pi(x) <= t} - #{x in S : sigma(x) <= t}, so the
/// scan is cubic rather than the quartic all-rectangles loop; the quartic
/// prefix-count reference lives in the tests as the oracle.
inline Rational rectangular(const Permutation& pi, const Permutation& sigma) {
    if (pi.order() != sigma.order())
        throw OrderMismatch("rectangular requires equal orders");
    const int n = pi.order();
    int best = 0;
    std::vector<int> d(static_cast<std::size_t>(n) + 1);
    for (int s1 = 1; s1 <= n; ++s1) {
        std::fill(d.begin(), d.end(), 0);
        for (int s2 = s1; s2 <= n; ++s2) {
            const int a = pi(s2), b = sigma(s2);
            if (a < b) {
                for (int t = a; t < b; ++t) ++d[t];
            } else if (b < a) {
                for (int t = b; t < a; ++t) --d[t];
            }
            int lo = 0, hi = 0;
            for (int t = 0; t <= n; ++t) {
                lo = std::min(lo, d[t]);
                hi = std::max(hi, d[t]);
            }
            best = std::max(best, hi - lo);
        }
    }
    return Rational(Int(best), Int(n));
}

/// Uniform random permutation of order n, a pure function of the seed.
inline Permutation random_permutation(int n, std::uint64_t seed) {
    if (n < 1) throw OrderTooSmall("random_permutation requires n >= 1");
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    SplitMix64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(v[i], v[j]);
    }
    return Permutation(std::move(v));
}

/// Uniform random m-element subset of [n], sorted ascending (selection
/// sampling); a pure function of the seed.
inline std::vector<int> random_index_subset(int n, int m, std::uint64_t seed) {
    if (n < 1) throw OrderTooSmall("random_index_subset requires n >= 1");
    if (m < 1 || m > n) throw SubsetTooLarge("subset size " + std::to_string(m) +
                                             " invalid for ground set of size " + std::to_string(n));
    SplitMix64 rng(seed);
    std::vector<int> out;
    out.reserve(m);
    int chosen = 0;
    for (int i = 1; i <= n && chosen < m; ++i) {
        // include i with probability (m - chosen) / (n - i + 1)
        if (rng.below(static_cast<std::uint64_t>(n - i + 1)) <
            static_cast<std::uint64_t>(m - chosen)) {
            out.push_back(i);
            ++chosen;
        }
    }
    return out;
}

/// Text format: one line of whitespace-separated images, e.g. "2 3 1".
inline std::string format_permutation(const Permutation& pi) {
    std::ostringstream os;
    for (int i = 1; i <= pi.order(); ++i) {
        if (i > 1) os << ' ';
        os << pi(i);
    }
    return os.str();
}

inline Permutation parse_permutation(const std::string& line) {
    std::istringstream is(line);
    std::vector<int> images;
    long long v;
    while (is >> v) {
        if (v < 1 || v > (1LL << 30)) throw NotABijection("value out of range: " + std::to_string(v));
        images.push_back(static_cast<int>(v));
    }
    if (!is.eof()) throw NotABijection("malformed permutation line: " + line);
    return Permutation(std::move(images));
}

}  // namespace permlab
