#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sbe/search.hpp"

namespace sbe {

// Parameters are evolved as strings of decimal digits: 4 digits for the
// probe budget t and jump distance d, 3 for the small knobs (c, m, g, a).
// Decoding clamps every value to [1, max for the grid side].
using Genome = std::string;

struct GenomeField {
    char param;    // one of t d c m g a
    int digits;
    int min_value;
    int max_value;
};

class GenomeSchema {
public:
    static GenomeSchema for_algorithm(Algorithm algo, int side);

    Algorithm algorithm() const { return algo_; }
    const std::vector<GenomeField>& fields() const { return fields_; }
    std::size_t length() const;

    Genome random_genome(Rng& rng) const;
    SearchParams decode(const Genome& genome) const;
    // "t=37 d=120 c=6" style listing of the decoded values.
    std::string describe(const Genome& genome) const;

private:
    Algorithm algo_ = Algorithm::Exhaustive;
    std::vector<GenomeField> fields_;
};

struct Individual {
    Genome genome;
    double fitness = 0.0; // frozen at first evaluation, never re-evaluated
};

struct EaConfig {
    int kappa = 50;              // population ceiling
    int initial_population = 5;
    double clone_rate = 0.05;
    double crossover_rate = 0.65; // mutation gets the remaining mass
    int runs_per_fitness = 40;
    int stall_limit = 100;       // iterations without champion change
    int max_steps = 5000;        // hard cap; hitting it means not converged
};

enum class EaOperator { Clone, Crossover, Mutation };

// Rank of the crossover mate: alpha = u1 * u2 for two unit uniforms, index
// floor(alpha * kappa) clipped to the current population. Biased towards the
// fittest ranks.
int select_mate_index(double u1, double u2, int population_size, int kappa);
int select_mate_index(Rng& rng, int population_size, int kappa);

struct EvolveReport {
    EaOperator op;
    double child_fitness;
    double best_fitness;
};

using FitnessFn = std::function<double(const Genome&)>;

// One generation: pick an operator (clone / crossover / mutation), build the
// child from the current best, evaluate it, insert it into the population
// sorted by fitness and truncate to kappa. The population must be non-empty
// and sorted ascending.
EvolveReport evolve_step(std::vector<Individual>& population, const EaConfig& config,
                         Rng& rng, const FitnessFn& fitness);

// Produces the instances a fitness evaluation searches. The default factory
// draws random square instances of the given side.
using InstanceFactory = std::function<Instance(Rng&)>;
InstanceFactory square_instance_factory(int side);

// Mean reported steps over `runs` searches, each on a fresh instance. Run i
// derives its stream from (eval_seed, i), so evaluations are replayable and
// order-independent.
double fitness_of(Algorithm algo, const SearchParams& params,
                  const InstanceFactory& make_instance, int runs,
                  std::uint64_t eval_seed);

struct TuneLogEntry {
    int generation;
    double best_fitness;
    int population_size;
    bool converged;
};

struct TuneResult {
    Genome best_genome;
    SearchParams best_params;
    double best_fitness = 0.0;
    bool converged = false;
    std::vector<TuneLogEntry> history;
};

// Evolves parameters for one searcher. Stops when the population collapses
// to a single genome, or when the champion has not changed for
// config.stall_limit generations and at least two copies of it exist; the
// hard step cap ends the run unconverged.
TuneResult ea_tune(Algorithm algo, int side, const EaConfig& config,
                   std::uint64_t seed);
TuneResult ea_tune(const GenomeSchema& schema, const InstanceFactory& make_instance,
                   const EaConfig& config, std::uint64_t seed);

// CSV: "generation,best_fitness,population_size,converged" rows.
std::string tune_log_to_csv(const std::vector<TuneLogEntry>& history);

} // namespace sbe
