#include "sbe/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbe {

namespace {

int clamp_field(int value, const GenomeField& f) {
    return std::clamp(value, f.min_value, f.max_value);
}

// Largest growth budget that still binds on this grid: a triangle grown c
// times reaches height 3*2^c - 1, and once that passes the shorter side the
// growth stops by itself, so every larger budget decodes to the same search.
int max_binding_growths(int side) {
    int c = 1;
    while ((std::int64_t(3) << (c + 1)) - 1 < side) ++c;
    return c;
}

GenomeField make_field(char param, int side) {
    switch (param) {
        case 't': return {'t', 4, 1, 9999};
        case 'd': return {'d', 4, 1, std::max(1, std::min(9999, side - 1))};
        case 'c': return {'c', 3, 1, std::min(999, max_binding_growths(side))};
        case 'm': return {'m', 3, 1, std::max(1, std::min(999, (side - 1) / 2))};
        case 'g': return {'g', 3, 1, 999};
        case 'a': return {'a', 3, 1, 999};
    }
    throw std::invalid_argument("unknown genome field");
}

} // namespace

GenomeSchema GenomeSchema::for_algorithm(Algorithm algo, int side) {
    if (side < 2)
        throw std::invalid_argument("genome schema needs a grid side >= 2");
    GenomeSchema schema;
    schema.algo_ = algo;
    const char* params = "";
    switch (algo) {
        case Algorithm::Fts: params = "tdc"; break;
        case Algorithm::Ils: params = "ta"; break;
        case Algorithm::Vns1: params = "tmd"; break;
        case Algorithm::Vns2: params = "td"; break;
        case Algorithm::Vns3: params = "tdg"; break;
        case Algorithm::Tabu: params = "td"; break;
        case Algorithm::Exhaustive: params = ""; break;
    }
    for (const char* p = params; *p; ++p)
        schema.fields_.push_back(make_field(*p, side));
    return schema;
}

std::size_t GenomeSchema::length() const {
    std::size_t n = 0;
    for (const GenomeField& f : fields_) n += f.digits;
    return n;
}

Genome GenomeSchema::random_genome(Rng& rng) const {
    Genome g(length(), '0');
    for (char& c : g) c = static_cast<char>('0' + rng.next_int(0, 9));
    return g;
}

SearchParams GenomeSchema::decode(const Genome& genome) const {
    if (genome.size() != length())
        throw std::invalid_argument("genome length does not match the schema");
    SearchParams params;
    std::size_t pos = 0;
    for (const GenomeField& f : fields_) {
        int value = 0;
        for (int i = 0; i < f.digits; ++i) {
            const char c = genome[pos + i];
            if (c < '0' || c > '9')
                throw std::invalid_argument("genome holds a non-digit character");
            value = value * 10 + (c - '0');
        }
        pos += f.digits;
        // Jump distances act modulo the grid side (the pos step wraps), so
        // any raw distance is reduced to its torus-equivalent value instead
        // of being squashed onto the boundary.
        if (f.param == 'd') value %= f.max_value + 1;
        // Growth budgets fold onto [1, max]: squashing the whole digit range
        // onto the boundary would park nearly every random genome on the
        // heaviest budget, two coordinated digit moves away from anything
        // smaller, which reliably strands the tuner there.
        if (f.param == 'c' && value > 0) value = (value - 1) % f.max_value + 1;
        value = clamp_field(value, f);
        switch (f.param) {
            case 't': params.t = value; break;
            case 'd': params.d = value; break;
            case 'c': params.c = value; break;
            case 'm': params.m = value; break;
            case 'g': params.g = value; break;
            case 'a': params.a = value; break;
        }
    }
    return params;
}

std::string GenomeSchema::describe(const Genome& genome) const {
    const SearchParams p = decode(genome);
    std::ostringstream out;
    bool first = true;
    for (const GenomeField& f : fields_) {
        if (!first) out << ' ';
        first = false;
        int value = 0;
        switch (f.param) {
            case 't': value = p.t; break;
            case 'd': value = p.d; break;
            case 'c': value = p.c; break;
            case 'm': value = p.m; break;
            case 'g': value = p.g; break;
            case 'a': value = p.a; break;
        }
        out << f.param << '=' << value;
    }
    return out.str();
}

int select_mate_index(double u1, double u2, int population_size, int kappa) {
    if (population_size < 1 || kappa < 1)
        throw std::invalid_argument("select_mate_index needs a population");
    const double alpha = u1 * u2;
    const int index = static_cast<int>(alpha * kappa);
    return std::min(index, population_size - 1);
}

int select_mate_index(Rng& rng, int population_size, int kappa) {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    return select_mate_index(u1, u2, population_size, kappa);
}

namespace {

void insert_sorted(std::vector<Individual>& population, Individual child, int kappa) {
    const auto at = std::upper_bound(
        population.begin(), population.end(), child.fitness,
        [](double f, const Individual& ind) { return f < ind.fitness; });
    population.insert(at, std::move(child));
    if (static_cast<int>(population.size()) > kappa) population.pop_back();
}

} // namespace

EvolveReport evolve_step(std::vector<Individual>& population, const EaConfig& config,
                         Rng& rng, const FitnessFn& fitness) {
    if (population.empty())
        throw std::invalid_argument("evolve_step needs a non-empty population");

    const Individual& best = population.front();
    Individual child;
    EaOperator op;

    const double roll = rng.next_unit();
    if (roll < config.clone_rate) {
        op = EaOperator::Clone;
        child.genome = best.genome;
    } else if (roll < config.clone_rate + config.crossover_rate) {
        op = EaOperator::Crossover;
        const int mate = select_mate_index(rng, static_cast<int>(population.size()),
                                           config.kappa);
        const Genome& other = population[static_cast<std::size_t>(mate)].genome;
        child.genome = best.genome;
        for (std::size_t i = 0; i < child.genome.size(); ++i)
            if (rng.next_bool()) child.genome[i] = other[i];
    } else {
        op = EaOperator::Mutation;
        child.genome = best.genome;
        if (!child.genome.empty()) {
            const int pos = rng.next_int(0, static_cast<int>(child.genome.size()) - 1);
            // Pick among the nine other digits so the mutant really differs.
            const int shift = rng.next_int(1, 9);
            child.genome[static_cast<std::size_t>(pos)] =
                static_cast<char>('0' + (child.genome[static_cast<std::size_t>(pos)] -
                                         '0' + shift) % 10);
        }
    }

    child.fitness = fitness(child.genome);
    const double child_fitness = child.fitness;
    insert_sorted(population, std::move(child), config.kappa);
    return {op, child_fitness, population.front().fitness};
}

InstanceFactory square_instance_factory(int side) {
    return [side](Rng& rng) { return generate_instance(side, rng); };
}

double fitness_of(Algorithm algo, const SearchParams& params,
                  const InstanceFactory& make_instance, int runs,
                  std::uint64_t eval_seed) {
    if (runs < 1)
        throw std::invalid_argument("fitness needs at least one run");
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        Rng rng(derive_seed(eval_seed, static_cast<std::uint64_t>(i)));
        const Instance inst = make_instance(rng);
        InstanceOracle oracle(inst);
        const SearchOutcome out = run_search(algo, oracle, params, rng);
        sum += static_cast<double>(out.steps);
    }
    return sum / runs;
}

TuneResult ea_tune(Algorithm algo, int side, const EaConfig& config,
                   std::uint64_t seed) {
    return ea_tune(GenomeSchema::for_algorithm(algo, side),
                   square_instance_factory(side), config, seed);
}

TuneResult ea_tune(const GenomeSchema& schema, const InstanceFactory& make_instance,
                   const EaConfig& config, std::uint64_t seed) {
    if (config.initial_population < 1 || config.kappa < config.initial_population)
        throw std::invalid_argument("population sizes are inconsistent");

    Rng rng(derive_seed(seed, 0));
    const std::uint64_t eval_base = derive_seed(seed, 1);
    std::uint64_t eval_counter = 0;
    const FitnessFn fitness = [&](const Genome& g) {
        return fitness_of(schema.algorithm(), schema.decode(g), make_instance,
                          config.runs_per_fitness, derive_seed(eval_base, eval_counter++));
    };

    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(config.kappa) + 1);
    for (int i = 0; i < config.initial_population; ++i) {
        Individual ind;
        ind.genome = schema.random_genome(rng);
        ind.fitness = fitness(ind.genome);
        insert_sorted(population, std::move(ind), config.kappa);
    }

    TuneResult result;
    const auto all_equal = [&] {
        for (const Individual& ind : population)
            if (ind.genome != population.front().genome) return false;
        return true;
    };
    const auto champion_copies = [&] {
        int copies = 0;
        for (const Individual& ind : population)
            copies += (ind.genome == population.front().genome);
        return copies;
    };

    Genome champion = population.front().genome;
    double champion_fitness = population.front().fitness;
    int last_change = 0;

    const auto log_entry = [&](int generation, bool converged) {
        result.history.push_back({generation, population.front().fitness,
                                  static_cast<int>(population.size()), converged});
    };

    bool converged = all_equal();
    log_entry(0, converged);
    int generation = 0;
    while (!converged && generation < config.max_steps) {
        ++generation;
        evolve_step(population, config, rng, fitness);

        if (population.front().fitness < champion_fitness ||
            population.front().genome != champion) {
            champion = population.front().genome;
            champion_fitness = population.front().fitness;
            last_change = generation;
        }

        converged = all_equal() ||
                    (generation - last_change >= config.stall_limit &&
                     champion_copies() >= 2);
        log_entry(generation, converged);
    }

    result.best_genome = population.front().genome;
    result.best_params = schema.decode(result.best_genome);
    result.best_fitness = population.front().fitness;
    result.converged = converged;
    return result;
}

std::string tune_log_to_csv(const std::vector<TuneLogEntry>& history) {
    std::ostringstream out;
    out << "generation,best_fitness,population_size,converged\n";
    out.precision(17);
    for (const TuneLogEntry& e : history)
        out << e.generation << ',' << e.best_fitness << ',' << e.population_size
            << ',' << (e.converged ? 1 : 0) << '\n';
    return out.str();
}

} // namespace sbe
