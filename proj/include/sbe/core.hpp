#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbe/rng.hpp"

namespace sbe {

struct Coord {
    int x = 0;
    int y = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

// Chessboard distance: number of king moves between two cells.
inline int chebyshev(Coord a, Coord b) {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    return dx > dy ? dx : dy;
}

// A search problem: one target cell psi hidden in a width x height grid,
// plus a set of evidence cells that all lie within chebyshev distance
// delta of psi. Evidence cells are pairwise distinct and never equal psi.
struct Instance {
    int width = 0;
    int height = 0;
    Coord psi;
    std::vector<Coord> evidence;
    int delta = 0;
};

// Random square instance of side s: psi uniform over the grid, floor(s/16)
// distinct evidence cells uniform over the in-grid part of the
// (2*delta+1)^2 window around psi, delta = floor(s/10). Requires s >= 16.
Instance generate_instance(int s, Rng& rng);

// The four structural conditions a well-formed instance must satisfy.
enum class Condition {
    EvidenceWithinDelta = 1, // every evidence cell within delta of psi
    EvidenceInsideGrid  = 2, // every evidence cell on the grid
    EvidenceNonempty    = 3, // at least one evidence cell
    SideExceedsWindow   = 4, // min(width, height) > 2*delta + 1
};

// Returns the violated conditions, empty when the instance is valid.
std::vector<Condition> validate_instance(const Instance& inst);

struct ProbabilityBounds {
    double marginal;    // chance of one blind probe hitting psi: 1 / s^2
    double conditional; // same probe knowing an evidence cell: 1 / (2*delta+1)^2
};

ProbabilityBounds probability_bounds(int s, int delta);

// Mean visits a row-major scan needs to reach a uniformly placed target.
inline double expected_exhaustive_visits(std::int64_t w, std::int64_t h) {
    if (w < 1 || h < 1) throw std::invalid_argument("grid sides must be >= 1");
    return (static_cast<double>(w) * static_cast<double>(h) + 1.0) / 2.0;
}

enum class VisitOutcome : std::uint8_t { Found, Evidence, Miss };

inline char outcome_code(VisitOutcome o) {
    switch (o) {
        case VisitOutcome::Found: return 'F';
        case VisitOutcome::Evidence: return 'E';
        default: return 'M';
    }
}

struct TraceEntry {
    Coord pos;
    VisitOutcome outcome;
};

// Counting wrapper around cell classification. Every searcher interacts with
// the problem only through visit(), so step accounting is uniform: total
// visits, unique visits (revisits don't increment) and evidence hits. The
// unique counter is what tabu search reports; everything else reports total.
class Oracle {
public:
    virtual ~Oracle() = default;

    int width() const { return width_; }
    int height() const { return height_; }

    VisitOutcome visit(Coord p) {
        if (p.x < 0 || p.y < 0 || p.x >= width_ || p.y >= height_)
            throw std::logic_error("visit outside the grid: wrap coordinates first");
        ++total_;
        std::uint8_t& seen = visited_[static_cast<std::size_t>(p.y) * width_ + p.x];
        unique_ += (seen == 0);
        seen = 1;
        const VisitOutcome out = classify(p);
        if (out == VisitOutcome::Found) {
            converged_ = true;
            found_ = p;
        } else if (out == VisitOutcome::Evidence) {
            ++evidence_hits_;
        }
        if (tracing_) trace_.push_back({p, out});
        return out;
    }

    std::uint64_t total_visits() const { return total_; }
    std::uint64_t unique_visits() const { return unique_; }
    std::uint64_t evidence_hits() const { return evidence_hits_; }
    bool converged() const { return converged_; }
    Coord found_at() const { return found_; } // meaningful once converged()

    void set_tracing(bool on) { tracing_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    std::vector<TraceEntry> take_trace() { return std::move(trace_); }

    // Fresh counters and trace; classification is untouched.
    void reset() {
        total_ = unique_ = evidence_hits_ = 0;
        converged_ = false;
        found_ = {};
        trace_.clear();
        std::fill(visited_.begin(), visited_.end(), std::uint8_t(0));
    }

protected:
    Oracle(int width, int height)
        : width_(width), height_(height),
          visited_(static_cast<std::size_t>(width) * height, 0) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("oracle grid sides must be >= 1");
    }

    virtual VisitOutcome classify(Coord p) const = 0;

private:
    int width_;
    int height_;
    std::uint64_t total_ = 0;
    std::uint64_t unique_ = 0;
    std::uint64_t evidence_hits_ = 0;
    bool converged_ = false;
    bool tracing_ = false;
    Coord found_;
    std::vector<std::uint8_t> visited_;
    std::vector<TraceEntry> trace_;
};

// Oracle over a synthetic instance. Evidence membership is answered from a
// bitmap over the evidence bounding box, so a visit costs a couple of
// comparisons regardless of |evidence|.
class InstanceOracle final : public Oracle {
public:
    explicit InstanceOracle(const Instance& inst);

    const Instance& instance() const { return *inst_; }

protected:
    VisitOutcome classify(Coord p) const override {
        if (p == inst_->psi) return VisitOutcome::Found;
        const unsigned dx = static_cast<unsigned>(p.x - box_x0_);
        const unsigned dy = static_cast<unsigned>(p.y - box_y0_);
        if (dx < static_cast<unsigned>(box_w_) && dy < static_cast<unsigned>(box_h_) &&
            evidence_mask_[dy * box_w_ + dx])
            return VisitOutcome::Evidence;
        return VisitOutcome::Miss;
    }

private:
    const Instance* inst_;
    int box_x0_ = 0, box_y0_ = 0, box_w_ = 0, box_h_ = 0;
    std::vector<std::uint8_t> evidence_mask_;
};

// One-line text form, square instances only:
//   s=<side> delta=<delta> psi=<x>,<y>
// followed by one "mu=<x>,<y>" line per evidence cell, in stored order.
std::string instance_to_text(const Instance& inst);
Instance instance_from_text(const std::string& text);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

} // namespace sbe
