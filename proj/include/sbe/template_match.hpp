#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sbe/image.hpp"
#include "sbe/search.hpp"

namespace sbe {

struct EvidenceTemplate {
    GrayImage image;
    // Expected anchor offset of this evidence relative to the target anchor.
    int dx = 0;
    int dy = 0;
};

struct TemplateSet {
    GrayImage target;
    std::vector<EvidenceTemplate> evidence;
    double tau_target = 0.0;   // classification threshold for the target
    double tau_evidence = 0.0; // classification threshold for evidence
    int delta = 0;             // declared chebyshev radius of the offsets
};

// Throws when thresholds are not positive, an evidence offset falls outside
// delta, or any template is empty.
void validate_template_set(const TemplateSet& set);

// An image plus its templates, frozen after construction. Building scans the
// whole anchor domain once: exactly one position may score below tau_target,
// otherwise the problem is rejected (no target / ambiguous target).
class TemplateProblem {
public:
    TemplateProblem(GrayImage image, TemplateSet set);

    // Valid anchors form a (W - tw + 1) x (H - th + 1) grid.
    int domain_width() const { return domain_width_; }
    int domain_height() const { return domain_height_; }
    Coord target_position() const { return target_position_; }
    const GrayImage& image() const { return image_; }
    const TemplateSet& templates() const { return set_; }

    bool is_target(Coord anchor) const;
    bool is_evidence(Coord anchor) const;

private:
    GrayImage image_;
    TemplateSet set_;
    int domain_width_ = 0;
    int domain_height_ = 0;
    Coord target_position_;
};

// Searchable view of a template problem: the grid is the anchor domain, a
// visit scores the templates at that anchor.
class TemplateOracle final : public Oracle {
public:
    explicit TemplateOracle(std::shared_ptr<const TemplateProblem> problem)
        : Oracle(problem->domain_width(), problem->domain_height()),
          problem_(std::move(problem)) {}

    const TemplateProblem& problem() const { return *problem_; }

protected:
    VisitOutcome classify(Coord p) const override {
        if (problem_->is_target(p)) return VisitOutcome::Found;
        if (problem_->is_evidence(p)) return VisitOutcome::Evidence;
        return VisitOutcome::Miss;
    }

private:
    std::shared_ptr<const TemplateProblem> problem_;
};

TemplateOracle make_template_oracle(GrayImage image, TemplateSet set);

// Manifest format, one entry per line:
//   target=<pgm path>
//   evidence1=<pgm path>@<dx>,<dy>   (evidence2=..., numbering from 1)
//   tau_target=<float>
//   tau_evidence=<float>
//   delta=<int>
// Paths are resolved relative to the manifest location.
TemplateSet load_template_manifest(const std::string& path);
void save_template_manifest(const TemplateSet& set, const std::string& directory,
                            const std::string& stem);

struct SceneSpec {
    int image_size = 512;
    int template_size = 16;
    int evidence_count = 4;
    int delta = 48;            // evidence anchors stay within this radius
    double tau_target = 20.0;
    double tau_evidence = 20.0;
};

// Random benchmark scene: noise background, one planted target patch and
// evidence patches planted at random non-overlapping offsets within delta.
TemplateProblem make_synthetic_scene(const SceneSpec& spec, Rng& rng);

struct SpeedupReport {
    std::vector<Algorithm> algorithms;
    std::vector<std::vector<double>> mean_steps;     // [repetition][algorithm]
    std::vector<std::vector<double>> percent_faster; // vs. the exhaustive scan
    std::vector<double> mean_percent;                // per algorithm
    double exhaustive_mean = 0.0;
};

// Runs every algorithm `repetitions` times over the whole problem set with
// fresh seeds and reports, per repetition, the mean evaluated positions and
// how many percent fewer that is than the exhaustive scan needs.
SpeedupReport speedup_report(const std::vector<Algorithm>& algorithms,
                             const std::vector<SearchParams>& params,
                             const std::vector<std::shared_ptr<const TemplateProblem>>& problems,
                             int repetitions, std::uint64_t seed);

std::string speedup_to_csv(const SpeedupReport& report);

} // namespace sbe
