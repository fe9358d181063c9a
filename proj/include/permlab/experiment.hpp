#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permlab/errors.hpp"
#include "permlab/permutation.hpp"
#include "permlab/property.hpp"
#include "permlab/rng.hpp"
#include "permlab/tester.hpp"

namespace permlab {

/// Random member of Av(231) by the recursive block construction: place the
/// maximum at a random cut, give the left part the smaller values and the
/// right part the larger ones, recurse.  Every output avoids 231; the
/// distribution over members is not uniform and does not need to be.
inline Permutation random_av231_member(int n, std::uint64_t seed) {
    if (n < 1) throw OrderTooSmall("random_av231_member requires n >= 1");
    SplitMix64 rng(seed);
    std::vector<int> images(n);
    // build(lo_pos, hi_pos, lo_val): fill positions [lo,hi] with values
    // lo_val .. lo_val + (hi-lo)
    std::function<void(int, int, int)> build = [&](int lo, int hi, int lo_val) {
        if (lo > hi) return;
        const int len = hi - lo + 1;
        const int cut = static_cast<int>(rng.below(static_cast<std::uint64_t>(len)));  // 0-based
        images[lo + cut - 1] = lo_val + len - 1;  // the maximum
        build(lo, lo + cut - 1, lo_val);
        build(lo + cut + 1, hi, lo_val + cut);
    };
    build(1, n, 1);
    return Permutation(std::move(images));
}

/// Rejection-samples a permutation of order n whose certified brute-force
/// distance to the property is at least eps.  Only usable at orders within
/// the brute-force guard; large far inputs come from the named families.
inline Permutation generate_far(int n, const Rational& eps, const PropertyOracle& oracle,
                                Metric metric, std::uint64_t seed, int attempt_cap = 10'000) {
    if (eps > 1) throw AttemptCapExceeded("distances never exceed 1");
    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
        Permutation candidate = random_permutation(n, derive_seed(seed, attempt));
        if (brute_distance(candidate, oracle, metric) >= eps) return candidate;
    }
    throw AttemptCapExceeded("no permutation at distance >= " + format_rational(eps) +
                             " found in " + std::to_string(attempt_cap) + " attempts");
}

/// Source of the permutation under test in an experiment.
struct PermutationSource {
    enum class Kind { file, random, far, identity, reverse, shifted };
    Kind kind = Kind::random;
    std::string path;          // file
    int n = 0;                 // random / far / named families
    Rational eps;              // far
    Metric metric = Metric::kendall;

    Permutation realize(const PropertyOracle& oracle, std::uint64_t seed) const {
        switch (kind) {
            case Kind::file: {
                std::ifstream in(path);
                if (!in) throw Error("cannot open permutation file: " + path);
                std::string line;
                std::getline(in, line);
                return parse_permutation(line);
            }
            case Kind::random:
                return random_permutation(n, seed);
            case Kind::far:
                return generate_far(n, eps, oracle, metric, seed);
            case Kind::identity:
                return Permutation::identity(n);
            case Kind::reverse:
                return Permutation::reverse(n);
            case Kind::shifted:
                return Permutation::shifted(n);
        }
        throw Error("unreachable");
    }
};

/// Declarative description of one experiment run.
struct ExperimentSpec {
    PropertyOracle oracle;
    PermutationSource source;
    std::vector<int> sample_sizes;
    long long trials = 1000;
    std::uint64_t master_seed = 0;
    std::string out_path;  // empty = return CSV only
};

/// Runs the experiment: one rejection_rate call per sample size, rows in
/// deterministic order, per-point seeds derived from the master seed.
/// CSV columns: n, sample_size, trials, rejections, rate_num, rate_den,
/// seed.
inline std::string run_experiment(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw Error("trials must be >= 1");
    const Permutation pi = spec.source.realize(spec.oracle, derive_seed(spec.master_seed, 0));
    std::ostringstream os;
    os << "n,sample_size,trials,rejections,rate_num,rate_den,seed\n";
    std::uint64_t point = 1;
    for (int s : spec.sample_sizes) {
        if (s > pi.order())
            throw SampleTooLarge("sample size " + std::to_string(s) +
                                 " exceeds permutation order " + std::to_string(pi.order()));
        const std::uint64_t point_seed = derive_seed(spec.master_seed, point++);
        const TestReport r = rejection_rate(pi, spec.oracle, s, spec.trials, point_seed);
        os << pi.order() << ',' << s << ',' << r.trials << ',' << r.rejections << ','
           << rat_num(r.rate).str() << ',' << rat_den(r.rate).str() << ',' << point_seed << '\n';
    }
    const std::string csv = os.str();
    if (!spec.out_path.empty()) {
        std::ofstream out(spec.out_path);
        if (!out) throw Error("cannot open output file: " + spec.out_path);
        out << csv;
    }
    return csv;
}

}  // namespace permlab
