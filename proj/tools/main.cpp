#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include "sbe/bench.hpp"
#include "sbe/template_match.hpp"
#include "sbe/tuner.hpp"

namespace fs = std::filesystem;
using namespace sbe;

namespace {

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<Algorithm> parse_algorithms(const std::string& list) {
    std::vector<Algorithm> algos;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = list.find(',', start);
        const std::string name =
            list.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!name.empty()) algos.push_back(algorithm_from_string(name));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (algos.empty()) throw std::invalid_argument("no algorithms given");
    return algos;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// Flags named after the search parameters; every searcher reads a subset.
void add_param_flags(CLI::App* cmd, SearchParams& p) {
    cmd->add_option("--t", p.t, "probe budget per cycle")->check(CLI::PositiveNumber);
    cmd->add_option("--d", p.d, "blind jump distance")->check(CLI::PositiveNumber);
    cmd->add_option("--c", p.c, "fractal growth iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--m", p.m, "window half-width")->check(CLI::PositiveNumber);
    cmd->add_option("--g", p.g, "ring growth bound")->check(CLI::PositiveNumber);
    cmd->add_option("--a", p.a, "samples per block")->check(CLI::PositiveNumber);
}

int run_gen(int s, int count, std::uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::cout << "seed: " << seed << '\n';
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const Instance inst = generate_instance(s, rng);
        char name[32];
        std::snprintf(name, sizeof name, "instance_%03d.txt", i);
        const fs::path path = fs::path(out_dir) / name;
        save_instance(inst, path.string());
        std::cout << "wrote " << path.string() << '\n';
    }
    return 0;
}

int run_search_cmd(const std::string& algo_name, const std::string& instance_file,
                   int random_side, const SearchParams& params, std::uint64_t seed,
                   const std::string& trace_file) {
    const Algorithm algo = algorithm_from_string(algo_name);
    Instance inst;
    if (!instance_file.empty()) {
        inst = load_instance(instance_file);
    } else if (random_side > 0) {
        Rng gen(derive_seed(seed, 0));
        inst = generate_instance(random_side, gen);
    } else {
        throw std::invalid_argument("search needs --instance FILE or --random S");
    }

    InstanceOracle oracle(inst);
    if (!trace_file.empty()) oracle.set_tracing(true);
    Rng rng(derive_seed(seed, 1));
    const SearchOutcome out = run_search(algo, oracle, params, rng);

    std::cout << "seed: " << seed << '\n'
              << "algorithm: " << to_string(algo) << '\n'
              << "grid: " << inst.width << 'x' << inst.height << '\n'
              << "found: (" << out.found.x << ", " << out.found.y << ")\n"
              << "steps: " << out.steps << '\n'
              << "total visits: " << out.total_visits << '\n'
              << "unique visits: " << out.unique_visits << '\n'
              << "evidence hits: " << out.evidence_hits << '\n'
              << "fallback: " << (out.fallback_used ? "yes" : "no") << '\n';
    if (!trace_file.empty()) {
        write_file(trace_file, trace_to_csv(out.trace));
        std::cout << "trace: " << trace_file << '\n';
    }
    return 0;
}

int run_bench(const std::string& algo_list, int s, int n, int restarts,
              int tune_budget, int tune_runs, int workers, std::uint64_t seed,
              const std::string& out_dir) {
    TableConfig config;
    config.algorithms = parse_algorithms(algo_list);
    config.s = s;
    config.restarts = restarts;
    config.runs_per_campaign = n;
    config.tune_budget = tune_budget;
    config.runs_per_fitness = tune_runs;
    config.master_seed = seed;
    config.workers = workers;

    std::cout << "seed: " << seed << '\n';
    const ComparisonTable table = multi_start_table(config);
    const std::string csv = table_to_csv(table);
    std::cout << csv;

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "table.csv", csv);
        for (int r = 0; r < restarts; ++r)
            for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
                const TableCell& cell = table.rows[static_cast<std::size_t>(r)][ai];
                const CampaignConfig cc =
                    cell_campaign_config(config, ai, r, cell.params, cell.tuner_converged);
                char name[64];
                std::snprintf(name, sizeof name, "cell_r%d_%s.manifest", r + 1,
                              to_string(config.algorithms[ai]));
                write_file(fs::path(out_dir) / name, campaign_manifest(cc));
            }
        std::cout << "wrote " << out_dir << '\n';
    }
    return 0;
}

int run_tune(const std::string& algo_name, int s, int budget, int runs,
             std::uint64_t seed, const std::string& log_file) {
    const Algorithm algo = algorithm_from_string(algo_name);
    EaConfig config;
    config.max_steps = budget;
    config.runs_per_fitness = runs;
    const TuneResult result = ea_tune(algo, s, config, seed);

    const GenomeSchema schema = GenomeSchema::for_algorithm(algo, s);
    const std::string described = schema.describe(result.best_genome);
    std::cout << "seed: " << seed << '\n'
              << "algorithm: " << to_string(algo) << '\n'
              << "best: " << (described.empty() ? "(no parameters)" : described) << '\n'
              << "fitness: " << result.best_fitness << " mean steps over " << runs
              << "-run evaluations\n"
              << "converged: " << (result.converged ? "yes" : "no") << '\n'
              << "generations: " << result.history.size() - 1 << '\n';
    if (!log_file.empty()) {
        write_file(log_file, tune_log_to_csv(result.history));
        std::cout << "log: " << log_file << '\n';
    }
    return 0;
}

int run_match(const std::string& image_file, const std::string& manifest_file,
              int synthetic, int scene_size, int template_size, int delta, double tau,
              const std::string& algo_list, int repetitions, const SearchParams& params,
              std::uint64_t seed, const std::string& out_file) {
    std::vector<std::shared_ptr<const TemplateProblem>> problems;
    if (synthetic > 0) {
        SceneSpec spec;
        spec.image_size = scene_size;
        spec.template_size = template_size;
        spec.delta = delta;
        spec.tau_target = tau;
        spec.tau_evidence = tau;
        const std::uint64_t scene_base = derive_seed(seed, 0);
        for (int i = 0; i < synthetic; ++i) {
            Rng rng(derive_seed(scene_base, static_cast<std::uint64_t>(i)));
            problems.push_back(std::make_shared<const TemplateProblem>(
                make_synthetic_scene(spec, rng)));
        }
        std::cout << "scenes: " << synthetic << " synthetic " << scene_size << 'x'
                  << scene_size << " images (noise background, planted patches)\n";
    } else if (!image_file.empty() && !manifest_file.empty()) {
        problems.push_back(std::make_shared<const TemplateProblem>(
            load_pgm(image_file), load_template_manifest(manifest_file)));
    } else {
        throw std::invalid_argument(
            "match needs --image FILE with --templates MANIFEST, or --synthetic N");
    }

    const std::vector<Algorithm> algos = parse_algorithms(algo_list);
    const std::vector<SearchParams> per_algo(algos.size(), params);
    const SpeedupReport report =
        speedup_report(algos, per_algo, problems, repetitions, derive_seed(seed, 1));

    std::cout << "seed: " << seed << '\n'
              << "exhaustive mean: " << report.exhaustive_mean << " positions\n";
    const std::string csv = speedup_to_csv(report);
    std::cout << csv;
    if (!out_file.empty()) {
        write_file(out_file, csv);
        std::cout << "wrote " << out_file << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evidence-guided grid search: instance generation, searchers, "
                 "benchmark campaigns, parameter tuning and image template matching"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate random instances");
    int gen_s = 256, gen_count = 1;
    std::uint64_t gen_seed = entropy_seed();
    std::string gen_out = ".";
    gen->add_option("--s", gen_s, "grid side (minimum 16)");
    gen->add_option("--count", gen_count, "number of instances")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "master seed (default: entropy)");
    gen->add_option("--out", gen_out, "output directory");

    // search
    auto* search = app.add_subcommand("search", "Run one searcher on one instance");
    std::string search_algo, search_instance, search_trace;
    int search_random = 0;
    SearchParams search_params;
    std::uint64_t search_seed = entropy_seed();
    search->add_option("--algo", search_algo,
                       "fts, ils, vns1, vns2, vns3, tabu or exhaustive")
        ->required();
    auto* inst_opt = search->add_option("--instance", search_instance, "instance file");
    search->add_option("--random", search_random, "generate a fresh instance of this side")
        ->excludes(inst_opt);
    add_param_flags(search, search_params);
    search->add_option("--seed", search_seed, "run seed (default: entropy)");
    search->add_option("--trace", search_trace, "write the visit trace as CSV");

    // bench
    auto* bench = app.add_subcommand(
        "bench", "Tune-and-run comparison campaigns across algorithms");
    std::string bench_algos = "fts,ils,vns1,vns2,vns3,tabu,exhaustive";
    std::string bench_out;
    int bench_s = 256, bench_n = 10000, bench_restarts = 3;
    int bench_tune_budget = 200, bench_tune_runs = 40, bench_workers = 1;
    std::uint64_t bench_seed = entropy_seed();
    bench->add_option("--algos", bench_algos, "comma-separated algorithm list");
    bench->add_option("--s", bench_s, "instance side");
    bench->add_option("--n", bench_n, "runs per campaign")->check(CLI::PositiveNumber);
    bench->add_option("--restarts", bench_restarts, "tuner restarts (table rows)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--tune-budget", bench_tune_budget, "evolve steps per restart")
        ->check(CLI::PositiveNumber);
    bench->add_option("--tune-runs", bench_tune_runs, "searches per fitness evaluation")
        ->check(CLI::PositiveNumber);
    bench->add_option("--workers", bench_workers, "campaign worker threads")
        ->envname("SBE_WORKERS")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "master seed (default: entropy)");
    bench->add_option("--out", bench_out, "directory for the table and cell manifests");

    // tune
    auto* tune = app.add_subcommand("tune", "Evolve parameters for one searcher");
    std::string tune_algo, tune_log;
    int tune_s = 256, tune_budget = 5000, tune_runs = 40;
    std::uint64_t tune_seed = entropy_seed();
    tune->add_option("--algo", tune_algo, "algorithm to tune")->required();
    tune->add_option("--s", tune_s, "instance side");
    tune->add_option("--budget", tune_budget, "evolve-step cap")->check(CLI::PositiveNumber);
    tune->add_option("--runs", tune_runs, "searches per fitness evaluation")
        ->check(CLI::PositiveNumber);
    tune->add_option("--seed", tune_seed, "tuner seed (default: entropy)");
    tune->add_option("--out", tune_log, "write the tuning log as CSV");

    // match
    auto* match = app.add_subcommand(
        "match", "Template-matching speedup report over images");
    std::string match_image, match_manifest, match_out;
    std::string match_algos = "fts,ils,vns1,vns2,vns3,tabu,exhaustive";
    int match_synthetic = 0, match_size = 512, match_tw = 16, match_delta = 48;
    int match_reps = 5;
    double match_tau = 20.0;
    SearchParams match_params;
    std::uint64_t match_seed = entropy_seed();
    auto* img_opt = match->add_option("--image", match_image, "PGM image to search");
    auto* man_opt =
        match->add_option("--templates", match_manifest, "template-set manifest");
    img_opt->needs(man_opt);
    match->add_option("--synthetic", match_synthetic, "benchmark on N synthetic scenes")
        ->excludes(img_opt);
    match->add_option("--size", match_size, "synthetic image side");
    match->add_option("--template-size", match_tw, "synthetic template side");
    match->add_option("--delta", match_delta, "evidence offset radius");
    match->add_option("--tau", match_tau, "classification threshold");
    match->add_option("--algos", match_algos, "comma-separated algorithm list");
    match->add_option("--runs", match_reps, "repetitions per algorithm")
        ->check(CLI::PositiveNumber);
    add_param_flags(match, match_params);
    match->add_option("--seed", match_seed, "report seed (default: entropy)");
    match->add_option("--out", match_out, "write the report CSV");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return run_gen(gen_s, gen_count, gen_seed, gen_out);
        if (search->parsed())
            return run_search_cmd(search_algo, search_instance, search_random,
                                  search_params, search_seed, search_trace);
        if (bench->parsed())
            return run_bench(bench_algos, bench_s, bench_n, bench_restarts,
                             bench_tune_budget, bench_tune_runs, bench_workers,
                             bench_seed, bench_out);
        if (tune->parsed())
            return run_tune(tune_algo, tune_s, tune_budget, tune_runs, tune_seed,
                            tune_log);
        if (match->parsed())
            return run_match(match_image, match_manifest, match_synthetic, match_size,
                             match_tw, match_delta, match_tau, match_algos, match_reps,
                             match_params, match_seed, match_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
