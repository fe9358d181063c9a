// permlab: command-line surface over the header library.
//
// Subcommands: distance | decompose | branching | constants | test |
//              repair | generate | experiment
// Exit codes: 0 success, 1 domain errors, 2 usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "permlab/experiment.hpp"

namespace {

using namespace permlab;

Permutation read_permutation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open permutation file: " + path);
    std::string line;
    std::getline(in, line);
    return parse_permutation(line);
}

Basis read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open basis file: " + path);
    return parse_basis(in);
}

PropertyOracle oracle_from(const std::string& basis_path) {
    if (basis_path.empty()) return all_permutations_oracle();
    return av_oracle(read_basis_file(basis_path));
}

KPattern read_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pattern file: " + path);
    return pattern_from_json(nlohmann::json::parse(in));
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file: " + out_path);
    out << text;
}

Metric parse_metric(const std::string& s) {
    if (s == "kendall") return Metric::kendall;
    if (s == "rectangular") return Metric::rectangular;
    throw CLI::ValidationError("--metric", "must be kendall or rectangular");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permutation property-testing laboratory"};
    app.require_subcommand(1);

    std::string metric_name = "kendall";
    std::string basis_path, out_path, tree_path, perm_a, perm_b;
    std::string pattern_a_path, pattern_b_path, sigma_path, kind = "random";
    std::string epsilon0_str, epsprime_str = "0";
    int k = 2, mmax = 4, big_k = 0, little_k = 0, n = 0;
    long long trials = 1000;
    std::uint64_t seed = 0;
    std::vector<int> samples;

    auto* dist = app.add_subcommand("distance", "Kendall or rectangular distance of two permutations");
    dist->add_option("--metric", metric_name, "kendall|rectangular");
    dist->add_option("a", perm_a, "first permutation file")->required();
    dist->add_option("b", perm_b, "second permutation file")->required();

    auto* dec = app.add_subcommand("decompose", "grid decomposition densities as CSV");
    dec->add_option("pi", perm_a, "permutation file")->required();
    dec->add_option("--K", big_k, "number of column parts")->required();
    dec->add_option("--kk", little_k, "number of row parts")->required();
    dec->add_option("--out", out_path, "output path (default stdout)");

    auto* br = app.add_subcommand("branching", "build a branching tree and dump it as JSON");
    br->add_option("--basis", basis_path, "basis file (omit for the all-permutations property)");
    br->add_option("--k", k, "pattern arity")->required();
    br->add_option("--mmax", mmax, "expansion-order cap for good verdicts");
    br->add_option("--out", out_path, "output path (default stdout)");

    auto* cons = app.add_subcommand("constants", "evaluate the theoretical constant chain");
    cons->add_option("--epsilon0", epsilon0_str, "farness parameter, num/den")->required();
    cons->add_option("--tree", tree_path, "branching tree JSON for k = ceil(10/epsilon0)")
        ->required();

    auto* tst = app.add_subcommand("test", "run the one-sided sampling tester");
    tst->add_option("pi", perm_a, "permutation file")->required();
    tst->add_option("--basis", basis_path, "basis file");
    tst->add_option("--sample", samples, "sample size (repeatable)")->required();
    tst->add_option("--trials", trials, "trials per sample size");
    tst->add_option("--seed", seed, "master seed");
    tst->add_option("--out", out_path, "output path (default stdout)");

    auto* rep = app.add_subcommand("repair", "apply the repair construction");
    rep->add_option("pi", perm_a, "permutation file")->required();
    rep->add_option("--pattern-a", pattern_a_path, "pattern A JSON file")->required();
    rep->add_option("--pattern-b", pattern_b_path, "pattern B JSON file")->required();
    rep->add_option("--sigma", sigma_path, "member expansion of A, permutation file")->required();
    rep->add_option("--K", big_k, "number of column parts")->required();
    rep->add_option("--kk", little_k, "number of row parts")->required();
    rep->add_option("--epsprime", epsprime_str, "density threshold, num/den")->required();
    rep->add_option("--out", out_path, "output path (default stdout)");

    auto* gen = app.add_subcommand("generate", "generate a permutation");
    gen->add_option("--kind", kind, "random|far|identity|reverse|shifted|av231");
    gen->add_option("--n", n, "order")->required();
    gen->add_option("--epsilon0", epsilon0_str, "farness for kind=far, num/den");
    gen->add_option("--basis", basis_path, "basis file for kind=far");
    gen->add_option("--metric", metric_name, "metric for kind=far");
    gen->add_option("--seed", seed, "seed");
    gen->add_option("--out", out_path, "output path (default stdout)");

    auto* exp = app.add_subcommand("experiment", "rejection-rate sweep as CSV");
    exp->add_option("--kind", kind, "random|far|identity|reverse|shifted|av231");
    exp->add_option("--n", n, "order for generated sources");
    exp->add_option("pi", perm_a, "permutation file (overrides --kind)");
    exp->add_option("--basis", basis_path, "basis file");
    exp->add_option("--epsilon0", epsilon0_str, "farness for kind=far, num/den");
    exp->add_option("--metric", metric_name, "metric for kind=far");
    exp->add_option("--sample", samples, "sample size (repeatable)")->required();
    exp->add_option("--trials", trials, "trials per sample size");
    exp->add_option("--seed", seed, "master seed");
    exp->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (dist->parsed()) {
            const auto a = read_permutation_file(perm_a);
            const auto b = read_permutation_file(perm_b);
            const auto d = parse_metric(metric_name) == Metric::kendall ? kendall_tau(a, b)
                                                                        : rectangular(a, b);
            std::cout << format_rational(d) << '\n';
        } else if (dec->parsed()) {
            write_or_print(out_path, grid_csv(grid(read_permutation_file(perm_a), big_k, little_k)));
        } else if (br->parsed()) {
            const auto tree = build_branching(oracle_from(basis_path), k, mmax);
            write_or_print(out_path, tree_to_json(tree).dump(2) + "\n");
        } else if (cons->parsed()) {
            std::ifstream in(tree_path);
            if (!in) throw Error("cannot open tree file: " + tree_path);
            const auto tree = tree_from_json(nlohmann::json::parse(in));
            const auto c = theoretical_constants(parse_rational(epsilon0_str), tree);
            std::cout << "eps0=" << format_rational(c.eps0) << '\n'
                      << "k=" << c.k.str() << '\n'
                      << "K=" << c.K.str() << '\n'
                      << "M=" << c.M.str() << '\n'
                      << "M0_testing=" << c.M0_testing.str() << '\n'
                      << "M0_continuity=" << c.M0_continuity.str() << '\n'
                      << "eps=" << format_rational(c.eps) << '\n'
                      << "eps_prime=" << format_rational(c.eps_prime) << '\n'
                      << "delta0=" << format_rational(c.delta0) << '\n'
                      << "tree_depth=" << c.tree_depth << '\n'
                      << "tree_root_weight=" << c.tree_root_weight.str() << '\n'
                      << "tree_m_max=" << c.tree_m_max << '\n';
        } else if (tst->parsed()) {
            const auto pi = read_permutation_file(perm_a);
            const auto oracle = oracle_from(basis_path);
            std::string text;
            for (int s : samples) text += report_csv(rejection_rate(pi, oracle, s, trials, seed));
            write_or_print(out_path, text);
        } else if (rep->parsed()) {
            const auto pi = read_permutation_file(perm_a);
            const auto repaired =
                repair(pi, read_pattern_file(pattern_a_path), read_pattern_file(pattern_b_path),
                       read_permutation_file(sigma_path), big_k, little_k,
                       parse_rational(epsprime_str));
            write_or_print(out_path, format_permutation(repaired) + "\n");
        } else if (gen->parsed()) {
            Permutation pi = Permutation::identity(1);
            if (kind == "random") {
                pi = random_permutation(n, seed);
            } else if (kind == "far") {
                pi = generate_far(n, parse_rational(epsilon0_str), oracle_from(basis_path),
                                  parse_metric(metric_name), seed);
            } else if (kind == "identity") {
                pi = Permutation::identity(n);
            } else if (kind == "reverse") {
                pi = Permutation::reverse(n);
            } else if (kind == "shifted") {
                pi = Permutation::shifted(n);
            } else if (kind == "av231") {
                pi = random_av231_member(n, seed);
            } else {
                std::cerr << "usage error: --kind must be "
                             "random|far|identity|reverse|shifted|av231\n";
                return 2;
            }
            write_or_print(out_path, format_permutation(pi) + "\n");
        } else if (exp->parsed()) {
            ExperimentSpec spec;
            spec.oracle = oracle_from(basis_path);
            if (!perm_a.empty()) {
                spec.source.kind = PermutationSource::Kind::file;
                spec.source.path = perm_a;
            } else if (kind == "random") {
                spec.source.kind = PermutationSource::Kind::random;
            } else if (kind == "far") {
                spec.source.kind = PermutationSource::Kind::far;
                spec.source.eps = parse_rational(epsilon0_str);
                spec.source.metric = parse_metric(metric_name);
            } else if (kind == "identity") {
                spec.source.kind = PermutationSource::Kind::identity;
            } else if (kind == "reverse") {
                spec.source.kind = PermutationSource::Kind::reverse;
            } else if (kind == "shifted") {
                spec.source.kind = PermutationSource::Kind::shifted;
            } else {
                std::cerr << "usage error: --kind must be "
                             "random|far|identity|reverse|shifted or a file argument\n";
                return 2;
            }
            spec.source.n = n;
            spec.sample_sizes = samples;
            spec.trials = trials;
            spec.master_seed = seed;
            spec.out_path = out_path;
            const std::string csv = run_experiment(spec);
            if (out_path.empty()) std::cout << csv;
        }
    } catch (const CLI::ValidationError&) {
        std::cerr << "usage error: --metric must be kendall or rectangular\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
