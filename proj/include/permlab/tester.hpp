#pragma once

#include <array>
#include <chrono>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "permlab/branching.hpp"
#include "permlab/decomposition.hpp"
#include "permlab/errors.hpp"
#include "permlab/pattern.hpp"
#include "permlab/permutation.hpp"
#include "permlab/property.hpp"
#include "permlab/rational.hpp"
#include "permlab/rng.hpp"

namespace permlab {

/// The full constant chain of the testing argument, computed exactly.
/// This is a calculator: for any realistic eps0 the values are
/// astronomically large and the tester is run with user-chosen sample
/// sizes instead.
struct TheoreticalConstants {
    Rational eps0;
    Int k;
    Int K;
    Int M;
    Int M0_testing;
    Int M0_continuity;
    Rational eps;
    Rational eps_prime;
    Rational delta0;
    int tree_depth;
    Int tree_root_weight;
    int tree_m_max;  // good leaves of the provenance tree are conditional on this
};

namespace detail {

/// Least integer M with ((K+1-eps')/(K+1))^M <= target, by exact integer
/// powering (binary search over an exponential bracket; no floating point).
inline Int least_power_below(const Rational& ratio, const Rational& target) {
    if (ratio <= 0 || ratio >= 1) throw Error("ratio must lie in (0,1)");
    const Int p = rat_num(ratio), q = rat_den(ratio);
    const Int tn = rat_num(target), td = rat_den(target);
    auto holds = [&](const Int& m) {
        // (p/q)^m <= tn/td  <=>  td * p^m <= tn * q^m
        const unsigned exp = m.convert_to<unsigned>();
        return td * boost::multiprecision::pow(p, exp) <=
               tn * boost::multiprecision::pow(q, exp);
    };
    Int hi = 1;
    while (!holds(hi)) hi <<= 1;
    Int lo = hi / 2;  // lo = 0 when hi == 1
    while (lo + 1 < hi) {
        const Int mid = (lo + hi) / 2;
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace detail

/// Evaluates the constant chain at eps0 against a branching tree built for
/// k = ceil(10/eps0) (checked).
inline TheoreticalConstants theoretical_constants(const Rational& eps0,
                                                  const BranchingTree& tree) {
    if (eps0 <= 0 || eps0 >= 1) throw Error("eps0 must lie in (0,1)");
    TheoreticalConstants c;
    c.eps0 = eps0;
    c.k = ceil_rat(Rational(10) / eps0);
    if (Int(tree.k) != c.k)
        throw TreeMismatch("tree built for k = " + std::to_string(tree.k) +
                           " but ceil(10/eps0) = " + c.k.str());
    c.eps = eps0 / 10;
    c.eps_prime = eps0 / (Rational(10) * c.k + 10);
    c.K = walk_parameters(tree, c.eps).K;
    c.M = std::max({Int(c.k * (c.k + 1) * c.K), ceil_rat(Rational(10) * c.k / eps0),
                    ceil_rat(Rational(10) * c.K / eps0)});
    const Rational ratio = Rational(c.K + 1 - c.eps_prime) / Rational(c.K + 1);
    const Rational target = eps0 / Rational(c.k * c.K);
    c.M0_testing =
        std::max({c.M, Int(c.K * (c.K + 1)), detail::least_power_below(ratio, target)});
    c.M0_continuity = std::max(c.M, Int(c.K + 1));
    c.delta0 = std::min(Rational(1, c.M0_continuity), c.eps_prime / (Rational(4) * c.K));
    c.tree_depth = tree.depth;
    c.tree_root_weight = tree.root_weight;
    c.tree_m_max = tree.m_max;
    return c;
}

enum class Verdict { accept, reject };

/// One run of the one-sided tester: draw a uniform sample_size-subset of
/// the positions, accept iff the induced subpermutation is a member.  If
/// pi itself is a member the hereditary contract forces accept.
inline Verdict test_once(const Permutation& pi, const PropertyOracle& oracle, int sample_size,
                         std::uint64_t seed) {
    if (sample_size > pi.order())
        throw SampleTooLarge("sample size exceeds permutation order");
    const auto subset = random_index_subset(pi.order(), sample_size, seed);
    return oracle(subpermutation(pi, subset)) ? Verdict::accept : Verdict::reject;
}

/// Aggregate of a batch of independent seeded trials.
struct TestReport {
    std::vector<std::uint8_t> rejected;  // per-trial verdict, 1 = reject
    long long trials = 0;
    long long rejections = 0;
    Rational rate;
    std::uint64_t seed = 0;
    int sample_size = 0;
    double elapsed_seconds = 0.0;
};

/// Runs `trials` independent tests; trial t uses the seed derived from the
/// master seed and t, so the aggregate is deterministic.
inline TestReport rejection_rate(const Permutation& pi, const PropertyOracle& oracle,
                                 int sample_size, long long trials, std::uint64_t seed) {
    if (trials < 1) throw Error("trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    TestReport report;
    report.trials = trials;
    report.seed = seed;
    report.sample_size = sample_size;
    report.rejected.resize(trials);
    for (long long t = 0; t < trials; ++t) {
        const bool rej = test_once(pi, oracle, sample_size, derive_seed(seed, t)) ==
                         Verdict::reject;
        report.rejected[t] = rej ? 1 : 0;
        if (rej) ++report.rejections;
    }
    report.rate = Rational(Int(report.rejections), Int(trials));
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// CSV serialization of a report: one row per trial plus a summary record.
inline std::string report_csv(const TestReport& r) {
    std::ostringstream os;
    os << "trial,seed,verdict\n";
    for (long long t = 0; t < r.trials; ++t)
        os << t << ',' << derive_seed(r.seed, t) << ','
           << (r.rejected[t] ? "reject" : "accept") << '\n';
    os << "summary,trials=" << r.trials << ",rejections=" << r.rejections
       << ",rate=" << format_rational(r.rate) << ",sample=" << r.sample_size << '\n';
    return os.str();
}

/// Turns witnessing columns into a concrete non-member: picks the smallest
/// element of each cell R_{x_j, g^{A,<A>}(j)} and takes the induced
/// subpermutation.  The result is an <A>-expansion of A (columns increase
/// with j, values sit in the prescribed row blocks) and hence not a member.
/// The expansion order is recovered from the index count.
inline Permutation extract_witness(const Permutation& pi, const KPattern& a,
                                   const std::vector<int>& indices,
                                   const GridDecomposition& g) {
    if (indices.empty() || indices.size() % a.total_size() != 0)
        throw EmptyWitnessCell("index count is not a multiple of |A|_{|A|}");
    const int order = static_cast<int>(indices.size()) / a.total_size();
    std::vector<int> chosen;
    chosen.reserve(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const int y = g_value(a, order, static_cast<int>(j) + 1);
        const auto& cell = g.R(indices[j], y);
        if (cell.empty())
            throw EmptyWitnessCell("cell R_{" + std::to_string(indices[j]) + "," +
                                   std::to_string(y) + "} is empty; indices are not witnessing");
        chosen.push_back(*std::min_element(cell.begin(), cell.end()));
    }
    return subpermutation(pi, chosen);
}

/// f_B of the repair construction: the block of B owning the column of x.
/// Implemented as "smallest j with i < min(B_j), result max(1, j-1)",
/// which satisfies the required properties (non-decreasing in x, and
/// i in B_j forces the value j).
inline int block_index(int x, const KPattern& b, int N, int K) {
    if (!b.is_monotone()) throw PreconditionViolated("block_index requires monotone B");
    const int i = part_of(x, N, K);
    int j = b.length() + 1;
    for (int t = 1; t <= b.length(); ++t)
        if (i < b.set(t).front()) {
            j = t;
            break;
        }
    return std::max(1, j - 1);
}

/// f_A of the repair construction: the rank inside A_{f_B(x)} of the row
/// of x when x sits in a covered, dense cell; 1 otherwise.
inline int part_rank(int x, const Permutation& pi, const GridDecomposition& g, const KPattern& a,
                     const KPattern& b, const Rational& eps_prime) {
    if (a.length() != b.length()) throw PreconditionViolated("part_rank requires |A| = |B|");
    const int fb = block_index(x, b, g.N(), g.K());
    const int i = part_of(x, g.N(), g.K());
    if (i > g.K() || !b.contains(fb, i)) return 1;
    const int row = part_of(pi(x), g.N(), g.k());
    if (row > g.k() || g.rho(i, row) < eps_prime) return 1;
    int rank = 0;
    for (int v : a.set(fb))
        if (v <= row) ++rank;
    return std::max(1, rank);
}

/// The repair construction: embeds pi into a member N-expansion sigma of A
/// via z_x = |A|_{f_B(x)-1} * N + (x-1) * |A_{f_B(x)}| + f_A(x) and returns
/// the induced subpermutation (a member, by heredity).  Strict monotonicity
/// and the bound z_N <= N * |A|_{|A|} are asserted, never assumed.
inline Permutation repair(const Permutation& pi, const KPattern& a, const KPattern& b,
                          const Permutation& sigma, int K, int k, const Rational& eps_prime) {
    const int N = pi.order();
    if (sigma.order() != N * a.total_size())
        throw PreconditionViolated("sigma must be an N-expansion of A");
    if (!is_expansion(sigma, a, N))
        throw PreconditionViolated("sigma is not an N-expansion of A");
    const GridDecomposition g(pi, K, k);
    std::vector<int> z(N);
    for (int x = 1; x <= N; ++x) {
        const int fb = block_index(x, b, N, K);
        const int fa = part_rank(x, pi, g, a, b, eps_prime);
        z[x - 1] = a.prefix_size(fb - 1) * N + (x - 1) * static_cast<int>(a.set(fb).size()) + fa;
    }
    for (int x = 1; x <= N; ++x) {
        if (z[x - 1] < 1 || z[x - 1] > N * a.total_size() ||
            (x > 1 && z[x - 2] >= z[x - 1]))
            throw NonMonotoneZ("z sequence is not strictly increasing within bounds at x = " +
                               std::to_string(x));
    }
    return subpermutation(sigma, z);
}

/// The Types I-V ledger of the repair argument.  A pair may carry several
/// types; it is counted once per type it has and once under none when it
/// has no type.  Pairs of no type are exactly the ones the construction
/// preserves order on.
struct PairLedger {
    long long type_i = 0;
    long long type_ii = 0;
    long long type_iii = 0;
    long long type_iv = 0;
    long long type_v = 0;
    long long typed = 0;  // pairs carrying at least one type
    long long none = 0;
    std::vector<std::pair<int, int>> none_pairs;
};

inline PairLedger classify_pairs(const Permutation& pi, const KPattern& a, const KPattern& b,
                                 const GridDecomposition& g, const Rational& eps_prime) {
    const int N = pi.order();
    PairLedger ledger;
    std::vector<int> col(N + 1), row(N + 1), fb(N + 1);
    std::vector<char> covered(N + 1), dense(N + 1);
    for (int x = 1; x <= N; ++x) {
        col[x] = part_of(x, N, g.K());
        row[x] = part_of(pi(x), N, g.k());
        fb[x] = block_index(x, b, N, g.K());
        covered[x] = col[x] <= g.K() && b.contains(fb[x], col[x]);
        dense[x] = col[x] <= g.K() && row[x] <= g.k() && g.rho(col[x], row[x]) >= eps_prime;
    }
    for (int x = 1; x <= N; ++x) {
        for (int xp = x + 1; xp <= N; ++xp) {
            const bool t1 = col[x] == g.K() + 1 || col[xp] == g.K() + 1;
            const bool t2 = row[x] == g.k() + 1 || row[xp] == g.k() + 1;
            const bool t3 = !t1 && (!covered[x] || !covered[xp]);
            const bool t4 = !t1 && !t2 && (!dense[x] || !dense[xp]);
            const bool t5 = !t2 && row[x] == row[xp];
            if (t1) ++ledger.type_i;
            if (t2) ++ledger.type_ii;
            if (t3) ++ledger.type_iii;
            if (t4) ++ledger.type_iv;
            if (t5) ++ledger.type_v;
            if (t1 || t2 || t3 || t4 || t5) {
                ++ledger.typed;
            } else {
                ++ledger.none;
                ledger.none_pairs.emplace_back(x, xp);
            }
        }
    }
    return ledger;
}

}  // namespace permlab
