#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbe/search.hpp"
#include "sbe/tuner.hpp"

namespace sbe {

struct CampaignConfig {
    Algorithm algorithm = Algorithm::Exhaustive;
    SearchParams params;
    int s = 256;                  // instance side, fresh instance per run
    int n = 1;                    // number of runs
    std::uint64_t master_seed = 0;
    int workers = 1;              // worker threads; results do not depend on it
    bool keep_series = false;     // retain the per-run step counts
    bool tuner_converged = true;  // provenance of the params, carried through
};

struct CampaignStats {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0;     // population standard deviation
    double std_error = 0.0;  // stddev / sqrt(n)
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    bool tuner_converged = true;
    // Exhaustive campaigns are cross-checked against the closed-form mean
    // (s^2+1)/2; a deviation beyond five standard errors marks the campaign
    // suspect, which almost always means a step-counting bug.
    bool lln_suspect = false;
    std::vector<std::uint64_t> series; // per-run steps, when kept
};

// Runs n independent searches, run i seeded from (master_seed, i). The
// aggregation is computed from the run-indexed series, so worker count and
// scheduling cannot change any reported number.
CampaignStats run_campaign(const CampaignConfig& config);

// Everything needed to replay the campaign, as key=value lines.
std::string campaign_manifest(const CampaignConfig& config);

// CSV: "run,steps,running_mean" data rows (one per run) plus a final
// "summary,mean,<mean>" line. Means carry full precision, so recomputing the
// mean from the data rows reproduces the summary exactly.
std::string series_to_csv(const CampaignStats& stats);
void export_series(const CampaignStats& stats, const std::string& path);

struct TableConfig {
    std::vector<Algorithm> algorithms;
    int s = 1024;
    int restarts = 3;          // independent tuner restarts = table rows
    int runs_per_campaign = 10000;
    int tune_budget = 200;     // evolve steps allowed per restart
    int runs_per_fitness = 40;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct TableCell {
    double mean = 0.0;
    SearchParams params;
    bool tuner_converged = true;
};

struct ComparisonTable {
    std::vector<Algorithm> algorithms;
    std::vector<std::vector<TableCell>> rows; // [restart][algorithm]
    std::vector<double> mean_row;             // column means
    std::vector<double> lowest_row;           // column minima
    std::vector<int> row_winner;              // per-row index of the best mean
};

// The campaign a table cell runs once its parameters are known: the seed
// derives from (master_seed, algorithm index, restart), so a cell can be
// replayed in isolation.
CampaignConfig cell_campaign_config(const TableConfig& config, std::size_t algo_index,
                                    int restart, const SearchParams& params,
                                    bool tuner_converged);

// For every algorithm and restart: tune the parameters, then run a fresh
// campaign with the tuned values. Rows are restarts; the footer holds the
// per-column mean and lowest campaign means.
ComparisonTable multi_start_table(const TableConfig& config);

// CSV with one column per algorithm plus a trailing winner column naming the
// best algorithm of each row.
std::string table_to_csv(const ComparisonTable& table);

} // namespace sbe
