#include "sbe/template_match.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sbe {

void validate_template_set(const TemplateSet& set) {
    if (set.target.width < 1 || set.target.height < 1)
        throw std::invalid_argument("template set: target template is empty");
    if (!(set.tau_target > 0.0) || !(set.tau_evidence > 0.0))
        throw std::invalid_argument("template set: thresholds must be positive");
    if (set.delta < 0)
        throw std::invalid_argument("template set: delta must be >= 0");
    for (std::size_t i = 0; i < set.evidence.size(); ++i) {
        const EvidenceTemplate& ev = set.evidence[i];
        if (ev.image.width < 1 || ev.image.height < 1)
            throw std::invalid_argument("template set: evidence template " +
                                        std::to_string(i + 1) + " is empty");
        if (std::max(std::abs(ev.dx), std::abs(ev.dy)) > set.delta)
            throw std::invalid_argument("template set: evidence offset " +
                                        std::to_string(i + 1) +
                                        " falls outside delta");
    }
}

TemplateProblem::TemplateProblem(GrayImage image, TemplateSet set)
    : image_(std::move(image)), set_(std::move(set)) {
    validate_template_set(set_);
    domain_width_ = image_.width - set_.target.width + 1;
    domain_height_ = image_.height - set_.target.height + 1;
    if (domain_width_ < 1 || domain_height_ < 1)
        throw std::invalid_argument("target template is larger than the image");

    // Full scan up front: the searchers need exactly one matching anchor.
    int matches = 0;
    for (int y = 0; y < domain_height_; ++y)
        for (int x = 0; x < domain_width_; ++x)
            if (mae_below(set_.target, image_, {x, y}, set_.tau_target)) {
                if (++matches > 1)
                    throw std::invalid_argument(
                        "ambiguous target: several anchors score below tau_target");
                target_position_ = {x, y};
            }
    if (matches == 0)
        throw std::invalid_argument("no anchor scores below tau_target");
}

bool TemplateProblem::is_target(Coord anchor) const {
    return mae_below(set_.target, image_, anchor, set_.tau_target);
}

bool TemplateProblem::is_evidence(Coord anchor) const {
    for (const EvidenceTemplate& ev : set_.evidence) {
        if (!template_fits(ev.image, image_, anchor)) continue;
        if (mae_below(ev.image, image_, anchor, set_.tau_evidence)) return true;
    }
    return false;
}

TemplateOracle make_template_oracle(GrayImage image, TemplateSet set) {
    return TemplateOracle(
        std::make_shared<const TemplateProblem>(std::move(image), std::move(set)));
}

namespace {

std::pair<std::string, std::string> split_key_value(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("template manifest: line without '=': " + line);
    return {line.substr(0, eq), line.substr(eq + 1)};
}

} // namespace

TemplateSet load_template_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    TemplateSet set;
    bool have_target = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto [key, value] = split_key_value(line);
        if (key == "target") {
            set.target = load_pgm((base / value).string());
            have_target = true;
        } else if (key.rfind("evidence", 0) == 0) {
            const auto at = value.find('@');
            if (at == std::string::npos)
                throw std::runtime_error(
                    "template manifest: evidence needs path@dx,dy: " + line);
            const std::string file = value.substr(0, at);
            const std::string offs = value.substr(at + 1);
            const auto comma = offs.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error(
                    "template manifest: evidence offset needs dx,dy: " + line);
            EvidenceTemplate ev;
            ev.image = load_pgm((base / file).string());
            ev.dx = std::stoi(offs.substr(0, comma));
            ev.dy = std::stoi(offs.substr(comma + 1));
            set.evidence.push_back(std::move(ev));
        } else if (key == "tau_target") {
            set.tau_target = std::stod(value);
        } else if (key == "tau_evidence") {
            set.tau_evidence = std::stod(value);
        } else if (key == "delta") {
            set.delta = std::stoi(value);
        } else {
            throw std::runtime_error("template manifest: unknown key '" + key + "'");
        }
    }
    if (!have_target)
        throw std::runtime_error("template manifest: missing target entry");
    validate_template_set(set);
    return set;
}

void save_template_manifest(const TemplateSet& set, const std::string& directory,
                            const std::string& stem) {
    const std::filesystem::path dir(directory);
    std::filesystem::create_directories(dir);

    std::ostringstream manifest;
    const std::string target_file = stem + "_target.pgm";
    save_pgm(set.target, (dir / target_file).string());
    manifest << "target=" << target_file << '\n';
    for (std::size_t i = 0; i < set.evidence.size(); ++i) {
        const std::string ev_file = stem + "_evidence" + std::to_string(i + 1) + ".pgm";
        save_pgm(set.evidence[i].image, (dir / ev_file).string());
        manifest << "evidence" << (i + 1) << '=' << ev_file << '@'
                 << set.evidence[i].dx << ',' << set.evidence[i].dy << '\n';
    }
    manifest << "tau_target=" << set.tau_target << '\n'
             << "tau_evidence=" << set.tau_evidence << '\n'
             << "delta=" << set.delta << '\n';

    std::ofstream out(dir / (stem + ".manifest"));
    if (!out)
        throw std::runtime_error("cannot write manifest for '" + stem + "'");
    out << manifest.str();
}

namespace {

GrayImage noise_image(int w, int h, Rng& rng) {
    GrayImage img(w, h);
    for (std::uint8_t& p : img.pixels)
        p = static_cast<std::uint8_t>(rng.next_int(0, 255));
    return img;
}

void blit(GrayImage& dst, const GrayImage& src, Coord at) {
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x)
            dst.at(at.x + x, at.y + y) = src.at(x, y);
}

} // namespace

TemplateProblem make_synthetic_scene(const SceneSpec& spec, Rng& rng) {
    const int s = spec.image_size;
    const int tw = spec.template_size;
    if (spec.delta < tw)
        throw std::invalid_argument("scene: delta must be at least the template size");
    if (s - tw < 2 * spec.delta)
        throw std::invalid_argument("scene: image too small for the offsets");

    GrayImage image = noise_image(s, s, rng);
    const GrayImage target = noise_image(tw, tw, rng);

    // Keep room for every offset: the target anchor stays delta away from the
    // anchor-domain border.
    const Coord target_at{rng.next_int(spec.delta, s - tw - spec.delta),
                          rng.next_int(spec.delta, s - tw - spec.delta)};

    // Offsets within delta, pairwise and target-wise at least a template
    // apart so the planted patches never overlap.
    std::vector<Coord> offsets;
    while (static_cast<int>(offsets.size()) < spec.evidence_count) {
        const Coord off{rng.next_int(-spec.delta, spec.delta),
                        rng.next_int(-spec.delta, spec.delta)};
        if (std::max(std::abs(off.x), std::abs(off.y)) < tw) continue;
        bool clear = true;
        for (const Coord& other : offsets)
            if (chebyshev(off, other) < tw) { clear = false; break; }
        if (clear) offsets.push_back(off);
    }

    TemplateSet set;
    set.tau_target = spec.tau_target;
    set.tau_evidence = spec.tau_evidence;
    set.delta = spec.delta;
    set.target = target;
    blit(image, target, target_at);
    for (const Coord& off : offsets) {
        EvidenceTemplate ev;
        ev.image = noise_image(tw, tw, rng);
        ev.dx = off.x;
        ev.dy = off.y;
        blit(image, ev.image, {target_at.x + off.x, target_at.y + off.y});
        set.evidence.push_back(std::move(ev));
    }

    return TemplateProblem(std::move(image), std::move(set));
}

SpeedupReport speedup_report(const std::vector<Algorithm>& algorithms,
                             const std::vector<SearchParams>& params,
                             const std::vector<std::shared_ptr<const TemplateProblem>>& problems,
                             int repetitions, std::uint64_t seed) {
    if (algorithms.empty() || problems.empty() || repetitions < 1)
        throw std::invalid_argument("speedup report needs algorithms, problems and repetitions");
    if (params.size() != algorithms.size())
        throw std::invalid_argument("speedup report needs one parameter set per algorithm");

    SpeedupReport report;
    report.algorithms = algorithms;

    // The exhaustive scan is deterministic: its cost per problem is the
    // row-major rank of the target anchor.
    double exh_sum = 0.0;
    for (const auto& prob : problems) {
        const Coord at = prob->target_position();
        exh_sum += static_cast<double>(at.y) * prob->domain_width() + at.x + 1;
    }
    report.exhaustive_mean = exh_sum / static_cast<double>(problems.size());

    report.mean_steps.assign(static_cast<std::size_t>(repetitions),
                             std::vector<double>(algorithms.size(), 0.0));
    report.percent_faster = report.mean_steps;

    for (int rep = 0; rep < repetitions; ++rep) {
        for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
            double sum = 0.0;
            for (std::size_t pi = 0; pi < problems.size(); ++pi) {
                TemplateOracle oracle(problems[pi]);
                const std::uint64_t run_index =
                    (static_cast<std::uint64_t>(rep) * algorithms.size() + ai) *
                        problems.size() + pi;
                Rng rng(derive_seed(seed, run_index));
                sum += static_cast<double>(
                    run_search(algorithms[ai], oracle, params[ai], rng).steps);
            }
            const double mean = sum / static_cast<double>(problems.size());
            report.mean_steps[static_cast<std::size_t>(rep)][ai] = mean;
            report.percent_faster[static_cast<std::size_t>(rep)][ai] =
                100.0 * (report.exhaustive_mean - mean) / report.exhaustive_mean;
        }
    }

    report.mean_percent.assign(algorithms.size(), 0.0);
    for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
        double sum = 0.0;
        for (int rep = 0; rep < repetitions; ++rep)
            sum += report.percent_faster[static_cast<std::size_t>(rep)][ai];
        report.mean_percent[ai] = sum / repetitions;
    }
    return report;
}

std::string speedup_to_csv(const SpeedupReport& report) {
    std::ostringstream out;
    out << "repetition";
    for (const Algorithm a : report.algorithms) out << ',' << to_string(a);
    out << '\n';
    out.setf(std::ios::fixed);
    out.precision(2);
    for (std::size_t rep = 0; rep < report.percent_faster.size(); ++rep) {
        out << (rep + 1);
        for (const double v : report.percent_faster[rep]) out << ',' << v;
        out << '\n';
    }
    out << "mean";
    for (const double v : report.mean_percent) out << ',' << v;
    out << '\n';
    return out.str();
}

} // namespace sbe
