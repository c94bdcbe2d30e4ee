#include "sbe/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace sbe {

namespace {

std::uint64_t one_run(const CampaignConfig& config, std::uint64_t index) {
    Rng rng(derive_seed(config.master_seed, index));
    const Instance inst = generate_instance(config.s, rng);
    InstanceOracle oracle(inst);
    return run_search(config.algorithm, oracle, config.params, rng).steps;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

} // namespace

CampaignStats run_campaign(const CampaignConfig& config) {
    if (config.n < 1)
        throw std::invalid_argument("campaign needs n >= 1 runs");
    if (config.workers < 1)
        throw std::invalid_argument("campaign needs workers >= 1");

    std::vector<std::uint64_t> series(static_cast<std::size_t>(config.n));
    const auto fill = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i)
            series[i] = one_run(config, i);
    };

    const int workers = std::min<int>(config.workers, config.n);
    if (workers <= 1) {
        fill(0, static_cast<std::uint64_t>(config.n));
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const std::uint64_t n = static_cast<std::uint64_t>(config.n);
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t begin = n * w / workers;
            const std::uint64_t end = n * (w + 1) / workers;
            pool.emplace_back(fill, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }

    // Aggregate strictly in run order: identical output for any worker count.
    CampaignStats stats;
    stats.n = config.n;
    stats.tuner_converged = config.tuner_converged;
    stats.min = series[0];
    stats.max = series[0];
    double sum = 0.0;
    for (const std::uint64_t v : series) {
        sum += static_cast<double>(v);
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / config.n;
    double sq = 0.0;
    for (const std::uint64_t v : series) {
        const double d = static_cast<double>(v) - stats.mean;
        sq += d * d;
    }
    stats.stddev = std::sqrt(sq / config.n);
    stats.std_error = stats.stddev / std::sqrt(static_cast<double>(config.n));

    if (config.algorithm == Algorithm::Exhaustive && config.n >= 100) {
        const double expected = expected_exhaustive_visits(config.s, config.s);
        stats.lln_suspect = std::abs(stats.mean - expected) > 5.0 * stats.std_error;
    }

    if (config.keep_series) stats.series = std::move(series);
    return stats;
}

std::string campaign_manifest(const CampaignConfig& config) {
    std::ostringstream out;
    out << "algorithm=" << to_string(config.algorithm) << '\n'
        << "s=" << config.s << '\n'
        << "n=" << config.n << '\n'
        << "master_seed=" << config.master_seed << '\n'
        << "workers=" << config.workers << '\n'
        << "tuner_converged=" << (config.tuner_converged ? 1 : 0) << '\n'
        << "t=" << config.params.t << '\n'
        << "d=" << config.params.d << '\n'
        << "c=" << config.params.c << '\n'
        << "m=" << config.params.m << '\n'
        << "g=" << config.params.g << '\n'
        << "a=" << config.params.a << '\n';
    return out.str();
}

std::string series_to_csv(const CampaignStats& stats) {
    if (static_cast<int>(stats.series.size()) != stats.n)
        throw std::invalid_argument("series_to_csv needs a campaign run with keep_series");
    std::ostringstream out;
    out << "run,steps,running_mean\n";
    double sum = 0.0;
    for (int i = 0; i < stats.n; ++i) {
        sum += static_cast<double>(stats.series[static_cast<std::size_t>(i)]);
        out << i << ',' << stats.series[static_cast<std::size_t>(i)] << ','
            << format_double(sum / (i + 1)) << '\n';
    }
    out << "summary,mean," << format_double(stats.mean) << '\n';
    return out.str();
}

void export_series(const CampaignStats& stats, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << series_to_csv(stats);
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

CampaignConfig cell_campaign_config(const TableConfig& config, std::size_t algo_index,
                                    int restart, const SearchParams& params,
                                    bool tuner_converged) {
    const std::uint64_t algo_seed = derive_seed(config.master_seed, algo_index);
    CampaignConfig cc;
    cc.algorithm = config.algorithms.at(algo_index);
    cc.params = params;
    cc.s = config.s;
    cc.n = config.runs_per_campaign;
    cc.master_seed = derive_seed(algo_seed, 2 * static_cast<std::uint64_t>(restart) + 1);
    cc.workers = config.workers;
    cc.tuner_converged = tuner_converged;
    return cc;
}

ComparisonTable multi_start_table(const TableConfig& config) {
    if (config.algorithms.empty())
        throw std::invalid_argument("comparison table needs at least one algorithm");
    if (config.restarts < 1)
        throw std::invalid_argument("comparison table needs restarts >= 1");

    ComparisonTable table;
    table.algorithms = config.algorithms;
    table.rows.assign(static_cast<std::size_t>(config.restarts),
                      std::vector<TableCell>(config.algorithms.size()));

    EaConfig ea;
    ea.max_steps = config.tune_budget;
    ea.runs_per_fitness = config.runs_per_fitness;

    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        const Algorithm algo = config.algorithms[ai];
        const std::uint64_t algo_seed = derive_seed(config.master_seed, ai);
        for (int r = 0; r < config.restarts; ++r) {
            const TuneResult tuned =
                ea_tune(algo, config.s, ea, derive_seed(algo_seed, 2 * r));
            const CampaignConfig cc =
                cell_campaign_config(config, ai, r, tuned.best_params, tuned.converged);
            const CampaignStats stats = run_campaign(cc);

            table.rows[static_cast<std::size_t>(r)][ai] = {stats.mean, tuned.best_params,
                                                           tuned.converged};
        }
    }

    table.mean_row.assign(config.algorithms.size(), 0.0);
    table.lowest_row.assign(config.algorithms.size(), 0.0);
    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        double sum = 0.0;
        double lowest = table.rows[0][ai].mean;
        for (const auto& row : table.rows) {
            sum += row[ai].mean;
            lowest = std::min(lowest, row[ai].mean);
        }
        table.mean_row[ai] = sum / static_cast<double>(table.rows.size());
        table.lowest_row[ai] = lowest;
    }
    for (const auto& row : table.rows) {
        int winner = 0;
        for (std::size_t ai = 1; ai < row.size(); ++ai)
            if (row[ai].mean < row[static_cast<std::size_t>(winner)].mean)
                winner = static_cast<int>(ai);
        table.row_winner.push_back(winner);
    }
    return table;
}

std::string table_to_csv(const ComparisonTable& table) {
    std::ostringstream out;
    out << "set";
    for (const Algorithm a : table.algorithms) out << ',' << to_string(a);
    out << ",winner\n";
    out.setf(std::ios::fixed);
    out.precision(2);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r + 1);
        for (const TableCell& cell : table.rows[r]) out << ',' << cell.mean;
        out << ',' << to_string(table.algorithms[static_cast<std::size_t>(
                          table.row_winner[r])])
            << '\n';
    }
    int mean_winner = 0, low_winner = 0;
    for (std::size_t ai = 1; ai < table.algorithms.size(); ++ai) {
        if (table.mean_row[ai] < table.mean_row[static_cast<std::size_t>(mean_winner)])
            mean_winner = static_cast<int>(ai);
        if (table.lowest_row[ai] < table.lowest_row[static_cast<std::size_t>(low_winner)])
            low_winner = static_cast<int>(ai);
    }
    out << "mean";
    for (const double v : table.mean_row) out << ',' << v;
    out << ',' << to_string(table.algorithms[static_cast<std::size_t>(mean_winner)]) << '\n';
    out << "lowest";
    for (const double v : table.lowest_row) out << ',' << v;
    out << ',' << to_string(table.algorithms[static_cast<std::size_t>(low_winner)]) << '\n';
    return out.str();
}

} // namespace sbe
