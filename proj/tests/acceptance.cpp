// Acceptance suite: one line per criterion, exit code equal to the number of
// failed criteria. Deliberately heavier than the unit tests — a full run
// re-derives the headline campaign numbers and takes a few minutes.
// `--only N` runs a single criterion while iterating on it.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbe/bench.hpp"
#include "sbe/core.hpp"
#include "sbe/image.hpp"
#include "sbe/rng.hpp"
#include "sbe/search.hpp"
#include "sbe/template_match.hpp"
#include "sbe/tuner.hpp"

using namespace sbe;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

// Results the expensive criteria share. The s=1024 campaigns feed criteria
// 2, 3 and 4 and the tuning logs feed criterion 11, so a full run computes
// each of them once; under --only they are recomputed on demand.
struct Context {
    std::vector<std::pair<std::string, std::vector<TuneLogEntry>>> tune_logs;

    const CampaignStats& exhaustive_1024() {
        if (!exh1024_) {
            CampaignConfig cfg;
            cfg.algorithm = Algorithm::Exhaustive;
            cfg.s = 1024;
            cfg.n = 10000;
            cfg.master_seed = 202;
            exh1024_ = run_campaign(cfg);
        }
        return *exh1024_;
    }

    const TuneResult& fts_tuned_1024() {
        if (!tune1024_) {
            tune1024_ = ea_tune(Algorithm::Fts, 1024, EaConfig{}, 303);
            tune_logs.push_back({"fts s=1024", tune1024_->history});
        }
        return *tune1024_;
    }

    double fts_mean_1024() {
        if (!fts1024_) {
            const TuneResult& tuned = fts_tuned_1024();
            CampaignConfig cfg;
            cfg.algorithm = Algorithm::Fts;
            cfg.params = tuned.best_params;
            cfg.s = 1024;
            cfg.n = 10000;
            cfg.master_seed = 304;
            cfg.tuner_converged = tuned.converged;
            fts1024_ = run_campaign(cfg).mean;
        }
        return *fts1024_;
    }

private:
    std::optional<CampaignStats> exh1024_;
    std::optional<TuneResult> tune1024_;
    std::optional<double> fts1024_;
};

// 1. Exhaustive campaign mean at s=256 lands on (s^2+1)/2 within 0.5%.
Verdict exhaustive_mean_small(Context&) {
    CampaignConfig cfg;
    cfg.algorithm = Algorithm::Exhaustive;
    cfg.s = 256;
    cfg.n = 100000;
    cfg.master_seed = 101;
    const CampaignStats stats = run_campaign(cfg);
    const double expect = expected_exhaustive_visits(256, 256);
    const double tol = 0.005 * expect;
    const bool pass = std::abs(stats.mean - expect) <= tol && !stats.lln_suspect;
    return {pass, format("mean %.3f vs %.1f +/- %.1f, n=%d", stats.mean, expect, tol, stats.n)};
}

// 2. Same law at s=1024, within 2%.
Verdict exhaustive_mean_large(Context& ctx) {
    const CampaignStats& stats = ctx.exhaustive_1024();
    const double expect = expected_exhaustive_visits(1024, 1024);
    const double tol = 0.02 * expect;
    const bool pass = std::abs(stats.mean - expect) <= tol && !stats.lln_suspect;
    return {pass, format("mean %.3f vs %.1f +/- %.1f, n=%d", stats.mean, expect, tol, stats.n)};
}

// 3. One desk-budget tuner restart, then a 10^4-run fts campaign at s=1024
//    whose mean stays at or below 95% of the exhaustive expectation.
Verdict tuned_fts_beats_exhaustive(Context& ctx) {
    const TuneResult& tuned = ctx.fts_tuned_1024();
    const double mean = ctx.fts_mean_1024();
    const double gate = 0.95 * expected_exhaustive_visits(1024, 1024);
    const std::string params =
        GenomeSchema::for_algorithm(Algorithm::Fts, 1024).describe(tuned.best_genome);
    return {mean <= gate,
            format("mean %.1f vs gate %.1f (%s; %s after %zu generations)", mean, gate,
                   params.c_str(), tuned.converged ? "converged" : "not converged",
                   tuned.history.size())};
}

// 4. The fts-to-exhaustive mean ratio must not degrade by more than 0.05
//    when the side doubles to 2048. Both ratios use measured campaign means.
Verdict scaling_direction(Context& ctx) {
    const TuneResult tuned = ea_tune(Algorithm::Fts, 2048, EaConfig{}, 404);
    ctx.tune_logs.push_back({"fts s=2048", tuned.history});
    CampaignConfig fts;
    fts.algorithm = Algorithm::Fts;
    fts.params = tuned.best_params;
    fts.s = 2048;
    fts.n = 2000;
    fts.master_seed = 405;
    fts.tuner_converged = tuned.converged;
    const double fts2048 = run_campaign(fts).mean;
    CampaignConfig exh;
    exh.algorithm = Algorithm::Exhaustive;
    exh.s = 2048;
    exh.n = 2000;
    exh.master_seed = 406;
    const double exh2048 = run_campaign(exh).mean;
    const double ratio2048 = fts2048 / exh2048;
    const double ratio1024 = ctx.fts_mean_1024() / ctx.exhaustive_1024().mean;
    return {ratio2048 <= ratio1024 + 0.05,
            format("ratio %.4f at s=2048 vs %.4f + 0.05 at s=1024", ratio2048, ratio1024)};
}

// 5. Monte Carlo check of the two hit probabilities: a probe drawn uniformly
//    from the (2*delta+1)^2 window around a random evidence cell hits psi
//    far more often than a blind probe would, and its rate matches the
//    conditional probability within 3 sigma.
Verdict window_hit_rate(Context&) {
    const int s = 256;
    const int n = 1000000;
    int hits = 0;
    int delta = 0;
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(505, static_cast<std::uint64_t>(i)));
        const Instance inst = generate_instance(s, rng);
        delta = inst.delta;
        const int pick = rng.next_int(0, static_cast<int>(inst.evidence.size()) - 1);
        const Coord mu = inst.evidence[static_cast<std::size_t>(pick)];
        const Coord probe{mu.x + rng.next_int(-inst.delta, inst.delta),
                          mu.y + rng.next_int(-inst.delta, inst.delta)};
        hits += (probe == inst.psi);
    }
    const ProbabilityBounds bounds = probability_bounds(s, delta);
    const double freq = hits / static_cast<double>(n);
    const double sigma = std::sqrt(bounds.conditional * (1.0 - bounds.conditional) / n);
    const bool pass = freq > bounds.marginal &&
                      std::abs(freq - bounds.conditional) <= 3.0 * sigma;
    return {pass, format("freq %.3e vs conditional %.3e +/- %.3e, marginal %.3e", freq,
                         bounds.conditional, 3.0 * sigma, bounds.marginal)};
}

// 6. A triangle grown for six iterations visits 9 * 4^6 distinct cells: the
//    trace never touches the same coordinate twice.
Verdict growth_never_revisits(Context&) {
    Instance inst;
    inst.width = 4096;
    inst.height = 4096;
    inst.psi = {5, 5};
    inst.evidence = {{6, 6}};
    inst.delta = 1;
    InstanceOracle oracle(inst);
    Rng rng(606);
    const std::uint64_t cells = 36864;
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        oracle.reset();
        TriangleState tri;
        tri.x = rng.next_int(1024, 3072);
        tri.y = rng.next_int(1024, 3072);
        tri.y_c = rng.next_bool() ? 1 : -1;
        if (grow_triangle(oracle, tri, 6) != GrowthStop::Budget ||
            oracle.total_visits() != cells ||
            oracle.unique_visits() != oracle.total_visits())
            ++bad;
    }
    return {bad == 0,
            format("%d of 1000 growths revisited a cell (6 iterations, %llu cells each)", bad,
                   static_cast<unsigned long long>(cells))};
}

// 7. Two oracle equivalences, both exact: the exhaustive step count is the
//    row-major rank of psi, and visiting every anchor of a template problem
//    flags Found exactly where a direct mean-absolute-error scan stays
//    below the target threshold.
Verdict oracle_equivalences(Context&) {
    int rank_bad = 0;
    for (int i = 0; i < 10000; ++i) {
        Rng rng(derive_seed(707, static_cast<std::uint64_t>(i)));
        const Instance inst = generate_instance(64, rng);
        InstanceOracle oracle(inst);
        Rng srng(derive_seed(708, static_cast<std::uint64_t>(i)));
        const SearchOutcome out = run_search(Algorithm::Exhaustive, oracle, SearchParams{}, srng);
        const std::uint64_t rank =
            static_cast<std::uint64_t>(inst.psi.y) * 64 + static_cast<std::uint64_t>(inst.psi.x) + 1;
        rank_bad += (out.steps != rank);
    }
    int scan_bad = 0;
    const SceneSpec spec;
    for (int i = 0; i < 100; ++i) {
        Rng rng(derive_seed(709, static_cast<std::uint64_t>(i)));
        const auto problem =
            std::make_shared<const TemplateProblem>(make_synthetic_scene(spec, rng));
        std::vector<Coord> below;
        for (int y = 0; y < problem->domain_height(); ++y)
            for (int x = 0; x < problem->domain_width(); ++x)
                if (mae_below(problem->templates().target, problem->image(), {x, y},
                              problem->templates().tau_target))
                    below.push_back({x, y});
        TemplateOracle oracle(problem);
        std::vector<Coord> found;
        for (int y = 0; y < oracle.height(); ++y)
            for (int x = 0; x < oracle.width(); ++x)
                if (oracle.visit({x, y}) == VisitOutcome::Found) found.push_back({x, y});
        scan_bad += !(found == below);
    }
    return {rank_bad == 0 && scan_bad == 0,
            format("%d of 10000 rank mismatches, %d of 100 scan mismatches", rank_bad, scan_bad)};
}

std::string traced_run(Algorithm algo, const Instance& inst, const SearchParams& params,
                       std::uint64_t seed) {
    InstanceOracle oracle(inst);
    oracle.set_tracing(true);
    Rng rng(seed);
    const SearchOutcome out = run_search(algo, oracle, params, rng);
    return trace_to_csv(out.trace);
}

// 8. Replaying (instance, params, seed) reproduces the trace byte for byte,
//    for every algorithm over randomized triples.
Verdict deterministic_traces(Context&) {
    const int s = 64;
    int bad = 0;
    int triples = 0;
    for (const Algorithm algo : all_algorithms()) {
        const GenomeSchema schema = GenomeSchema::for_algorithm(algo, s);
        for (int i = 0; i < 100; ++i, ++triples) {
            Rng rng(derive_seed(808, static_cast<std::uint64_t>(triples)));
            const Instance inst = generate_instance(s, rng);
            const SearchParams params = schema.decode(schema.random_genome(rng));
            const std::uint64_t seed = rng.next_u64();
            bad += (traced_run(algo, inst, params, seed) != traced_run(algo, inst, params, seed));
        }
    }
    return {bad == 0, format("%d of %d replayed traces differed", bad, triples)};
}

// 9. Tabu reports unique visits, so its step count can never exceed s^2.
Verdict tabu_bound(Context&) {
    const int s = 64;
    const GenomeSchema schema = GenomeSchema::for_algorithm(Algorithm::Tabu, s);
    int bad = 0;
    std::uint64_t worst = 0;
    for (int i = 0; i < 10000; ++i) {
        Rng rng(derive_seed(909, static_cast<std::uint64_t>(i)));
        const Instance inst = generate_instance(s, rng);
        const SearchParams params = schema.decode(schema.random_genome(rng));
        InstanceOracle oracle(inst);
        Rng srng(rng.next_u64());
        const SearchOutcome out = run_search(Algorithm::Tabu, oracle, params, srng);
        worst = std::max(worst, out.steps);
        bad += (out.steps > static_cast<std::uint64_t>(s) * s);
    }
    return {bad == 0, format("%d of 10000 runs above s^2, max steps %llu of %d", bad,
                             static_cast<unsigned long long>(worst), s * s)};
}

// 10. On synthetic 512x512 scenes with four planted evidence patches, fts
//     tuned for the anchor-domain side evaluates fewer positions than the
//     exhaustive scan on average.
Verdict template_speedup(Context& ctx) {
    const SceneSpec spec;
    const int side = spec.image_size - spec.template_size + 1;
    const GenomeSchema schema = GenomeSchema::for_algorithm(Algorithm::Fts, side);
    const TuneResult tuned = ea_tune(schema, square_instance_factory(side), EaConfig{}, 1010);
    ctx.tune_logs.push_back({format("fts s=%d", side), tuned.history});
    std::vector<std::shared_ptr<const TemplateProblem>> problems;
    Rng rng(1011);
    for (int i = 0; i < 200; ++i)
        problems.push_back(std::make_shared<const TemplateProblem>(make_synthetic_scene(spec, rng)));
    const SpeedupReport report =
        speedup_report({Algorithm::Fts}, {tuned.best_params}, problems, 3, 1012);
    double mean = 0.0;
    for (const auto& row : report.mean_steps) mean += row[0];
    mean /= static_cast<double>(report.mean_steps.size());
    return {mean < report.exhaustive_mean,
            format("fts mean %.1f vs exhaustive %.1f over 200 scenes (%.1f%% fewer; %s)", mean,
                   report.exhaustive_mean, report.mean_percent[0],
                   tuned.converged ? "converged" : "not converged")};
}

// 11. The evolutionary tuner picks clone/crossover/mutation at the
//     configured 0.05/0.65/0.30 rates, and the champion fitness never
//     worsens in any tuning log, including the ones criteria 3, 4 and 10
//     produced.
Verdict ea_behavior(Context& ctx) {
    const GenomeSchema schema = GenomeSchema::for_algorithm(Algorithm::Fts, 256);
    Rng rng(1111);
    std::vector<Individual> population;
    for (int i = 0; i < 5; ++i) population.push_back({schema.random_genome(rng), 0.0});
    const FitnessFn flat = [](const Genome&) { return 0.0; };
    const EaConfig config;
    std::array<std::int64_t, 3> counts{};
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i)
        ++counts[static_cast<std::size_t>(evolve_step(population, config, rng, flat).op)];
    const double rates[3] = {config.clone_rate, config.crossover_rate,
                             1.0 - config.clone_rate - config.crossover_rate};
    bool rates_ok = true;
    for (int k = 0; k < 3; ++k)
        rates_ok = rates_ok && std::abs(counts[k] / static_cast<double>(draws) - rates[k]) <= 0.01;

    int small = 0;
    for (const Algorithm algo : all_algorithms()) {
        if (algo == Algorithm::Exhaustive) continue;
        const TuneResult tuned =
            ea_tune(algo, 32, EaConfig{}, 1112 + static_cast<std::uint64_t>(small++));
        ctx.tune_logs.push_back({format("%s s=32", to_string(algo)), tuned.history});
    }
    int non_monotonic = 0;
    for (const auto& [name, history] : ctx.tune_logs)
        for (std::size_t k = 1; k < history.size(); ++k)
            if (history[k].best_fitness > history[k - 1].best_fitness) {
                ++non_monotonic;
                break;
            }
    return {rates_ok && non_monotonic == 0,
            format("rates %.4f/%.4f/%.4f vs 0.05/0.65/0.30; %d of %zu logs non-monotonic",
                   counts[0] / static_cast<double>(draws), counts[1] / static_cast<double>(draws),
                   counts[2] / static_cast<double>(draws), non_monotonic, ctx.tune_logs.size())};
}

struct Criterion {
    int id;
    const char* name;
    Verdict (*check)(Context&);
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    const Criterion criteria[] = {
        {1, "exhaustive campaign mean, s=256", exhaustive_mean_small},
        {2, "exhaustive campaign mean, s=1024", exhaustive_mean_large},
        {3, "tuned fts beats the exhaustive mean, s=1024", tuned_fts_beats_exhaustive},
        {4, "fts advantage holds at s=2048", scaling_direction},
        {5, "evidence window hit rate", window_hit_rate},
        {6, "fractal growth never revisits", growth_never_revisits},
        {7, "oracles agree with brute force", oracle_equivalences},
        {8, "traces replay byte-identically", deterministic_traces},
        {9, "tabu steps never exceed s^2", tabu_bound},
        {10, "tuned fts beats exhaustive on images", template_speedup},
        {11, "ea operator rates and champion monotonicity", ea_behavior},
    };
    Context ctx;
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        const Verdict verdict = criterion.check(ctx);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%2d] %s  %s: %s  [%.1fs]\n", criterion.id, verdict.pass ? "PASS" : "FAIL",
                    criterion.name, verdict.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += !verdict.pass;
    }
    return failures;
}
