#include "sbe/search.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sbe {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Fts: return "fts";
        case Algorithm::Ils: return "ils";
        case Algorithm::Vns1: return "vns1";
        case Algorithm::Vns2: return "vns2";
        case Algorithm::Vns3: return "vns3";
        case Algorithm::Tabu: return "tabu";
        case Algorithm::Exhaustive: return "exhaustive";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (Algorithm a : all_algorithms())
        if (name == to_string(a)) return a;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::vector<Algorithm> all_algorithms() {
    return {Algorithm::Fts, Algorithm::Ils, Algorithm::Vns1, Algorithm::Vns2,
            Algorithm::Vns3, Algorithm::Tabu, Algorithm::Exhaustive};
}

namespace {

void require_positive(int v, const char* name) {
    if (v < 1)
        throw std::invalid_argument(std::string("parameter ") + name + " must be >= 1");
}

inline Coord wrap(const Oracle& o, std::int64_t x, std::int64_t y) {
    const std::int64_t w = o.width();
    const std::int64_t h = o.height();
    std::int64_t wx = x % w;
    if (wx < 0) wx += w;
    std::int64_t wy = y % h;
    if (wy < 0) wy += h;
    return {static_cast<int>(wx), static_cast<int>(wy)};
}

// Row-major sweep of the whole grid; finds the target unconditionally.
void exhaustive_scan(Oracle& o) {
    for (int y = 0; y < o.height(); ++y)
        for (int x = 0; x < o.width(); ++x)
            if (o.visit({x, y}) == VisitOutcome::Found) return;
    throw std::logic_error("exhaustive scan ended without finding the target");
}

SearchOutcome collect_outcome(Oracle& o, bool fallback, bool steps_are_unique = false) {
    SearchOutcome out;
    out.found = o.found_at();
    out.total_visits = o.total_visits();
    out.unique_visits = o.unique_visits();
    out.evidence_hits = o.evidence_hits();
    out.steps = steps_are_unique ? o.unique_visits() : o.total_visits();
    out.fallback_used = fallback;
    out.trace = o.take_trace();
    return out;
}

Coord random_cell(Oracle& o, Rng& rng) {
    return {rng.next_int(0, o.width() - 1), rng.next_int(0, o.height() - 1)};
}

// Perimeter of the chebyshev ring of the given radius, scanned row-major so
// the top-left corner comes first. Returns true once the target is seen.
// The evidence flag latches any evidence cell met on the way.
bool visit_ring(Oracle& o, Coord center, int radius, bool* evidence) {
    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) {
            if (std::abs(i) != radius && std::abs(j) != radius) continue;
            const VisitOutcome v = o.visit(wrap(o, center.x + j, center.y + i));
            if (v == VisitOutcome::Found) return true;
            if (v == VisitOutcome::Evidence && evidence) *evidence = true;
        }
    return false;
}

} // namespace

Coord pos_step(Coord p, int d, bool horizontal, int w, int h) {
    require_positive(d, "d");
    if (horizontal) return {(p.x + d) % w, p.y};
    return {p.x, (p.y + d) % h};
}

Coord pos_step(Coord p, int d, Rng& rng, int w, int h) {
    return pos_step(p, d, rng.next_bool(), w, h);
}

namespace {

// stop_on_evidence distinguishes the two roles a stretch plays during a
// fractal growth: while the triangle is still probing, the first evidence
// cell ends the stretch so the growth can switch into its homing mode; once
// that has happened, further evidence carries no new information and cutting
// the stretch short would only leave unvisited gaps inside the triangle, so
// homing stretches run to completion.
StretchResult stretch_impl(Oracle& oracle, std::int64_t x, std::int64_t y,
                           int y_c, std::int64_t h, bool stop_on_evidence) {
    bool evidence = false;
    const VisitOutcome first = oracle.visit(wrap(oracle, x, y));
    if (first == VisitOutcome::Found) return StretchResult::Converged;
    if (first == VisitOutcome::Evidence) {
        if (stop_on_evidence) return StretchResult::Evidence;
        evidence = true;
    }
    std::int64_t left = x;
    std::int64_t right = x;
    for (std::int64_t k = 1; k <= h; ++k) {
        y += y_c;
        --left;
        ++right;
        for (std::int64_t l = left; l <= right; ++l) {
            const VisitOutcome v = oracle.visit(wrap(oracle, l, y));
            if (v == VisitOutcome::Found) return StretchResult::Converged;
            if (v == VisitOutcome::Evidence) {
                if (stop_on_evidence) return StretchResult::Evidence;
                evidence = true;
            }
        }
    }
    return evidence ? StretchResult::Evidence : StretchResult::Nothing;
}

} // namespace

StretchResult triangle_stretch(Oracle& oracle, std::int64_t x, std::int64_t y,
                               int y_c, std::int64_t h) {
    return stretch_impl(oracle, x, y, y_c, h, true);
}

GrowthStop grow_triangle(Oracle& oracle, TriangleState& tri, int c) {
    const std::int64_t side = std::min(oracle.width(), oracle.height());
    const StretchResult first = triangle_stretch(oracle, tri.x, tri.y, tri.y_c, tri.h);
    if (first == StretchResult::Converged) return GrowthStop::Converged;
    bool evidence = (first == StretchResult::Evidence);

    while (tri.count < c || evidence) {
        if (tri.h >= side) return GrowthStop::GrewPastGrid;
        const std::int64_t h = tri.h;
        tri.y_c = -tri.y_c;
        tri.count += 1;
        // The triangle grown so far is the inverted middle quarter of a
        // double-height triangle pointing the other way; they share their
        // widest row. Three stretches of the current height fill in that
        // triangle's tip and its two base corners exactly, so the union
        // stays one solid triangle and no cell is ever revisited.
        const std::int64_t corner_row = tri.y - std::int64_t(tri.y_c) * h;
        const std::int64_t tip_row = tri.y - std::int64_t(tri.y_c) * (2 * h + 1);
        const std::int64_t xs[3] = {tri.x - (h + 1), tri.x + (h + 1), tri.x};
        const std::int64_t ys[3] = {corner_row, corner_row, tip_row};
        for (int k = 0; k < 3; ++k) {
            const StretchResult r =
                stretch_impl(oracle, xs[k], ys[k], tri.y_c, h, !evidence);
            if (r == StretchResult::Converged) return GrowthStop::Converged;
            if (r == StretchResult::Evidence) evidence = true;
        }

        tri.y = tip_row;
        tri.h = 2 * h + 1;
        tri.w = tri.w * 2 + 1;
    }
    return GrowthStop::Budget;
}

SearchOutcome exhaustive_search(Oracle& oracle) {
    exhaustive_scan(oracle);
    return collect_outcome(oracle, false);
}

SearchOutcome fts_search(Oracle& oracle, const FtsParams& params, Rng& rng) {
    require_positive(params.t, "t");
    require_positive(params.d, "d");
    require_positive(params.c, "c");

    Coord anchor = random_cell(oracle, rng);
    bool grew_out = false;
    for (int k = 0; k < params.t && !oracle.converged(); ++k) {
        TriangleState tri;
        tri.x = anchor.x;
        tri.y = anchor.y;
        const GrowthStop stop = grow_triangle(oracle, tri, params.c);
        if (stop == GrowthStop::Converged) break;
        if (stop == GrowthStop::GrewPastGrid) { grew_out = true; break; }
        // The growth leaves the triangle tip far from where it started; the
        // next triangle is seeded one jump away from that drifted position,
        // which is what keeps consecutive triangles out of each other's area.
        anchor = pos_step(wrap(oracle, tri.x, tri.y), params.d, rng,
                          oracle.width(), oracle.height());
    }

    bool fallback = grew_out;
    if (!oracle.converged()) {
        fallback = true;
        exhaustive_scan(oracle);
    }
    return collect_outcome(oracle, fallback);
}

int ils_tiling(int t, int w, int h) {
    require_positive(t, "t");
    int k = static_cast<int>(std::sqrt(static_cast<double>(t)));
    while (k > 1 && (k * k > t || w % k != 0 || h % k != 0)) --k;
    return k;
}

SearchOutcome ils_search(Oracle& oracle, const IlsParams& params, Rng& rng) {
    require_positive(params.t, "t");
    require_positive(params.a, "a");
    const int w = oracle.width();
    const int h = oracle.height();

    const int k = ils_tiling(params.t, w, h);
    const int block_w = w / k;
    const int block_h = h / k;

    std::vector<int> order(static_cast<std::size_t>(k) * k);
    std::iota(order.begin(), order.end(), 0);

    while (!oracle.converged()) {
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[rng.next_int(0, static_cast<int>(i))]);
        for (const int block : order) {
            const int bx = (block % k) * block_w;
            const int by = (block / k) * block_h;
            for (int s = 0; s < params.a && !oracle.converged(); ++s) {
                const Coord probe{bx + rng.next_int(0, block_w - 1),
                                  by + rng.next_int(0, block_h - 1)};
                if (oracle.visit(probe) != VisitOutcome::Evidence) continue;
                // Evidence: sweep the whole block row-major.
                for (int y = by; y < by + block_h && !oracle.converged(); ++y)
                    for (int x = bx; x < bx + block_w; ++x)
                        if (oracle.visit({x, y}) == VisitOutcome::Found) break;
            }
            if (oracle.converged()) break;
        }
    }
    return collect_outcome(oracle, false);
}

SearchOutcome vns1_search(Oracle& oracle, const Vns1Params& params, Rng& rng) {
    require_positive(params.t, "t");
    require_positive(params.m, "m");
    require_positive(params.d, "d");

    Coord probe = random_cell(oracle, rng);
    for (int k = 0; k < params.t && !oracle.converged(); ++k) {
        if (oracle.visit(probe) == VisitOutcome::Evidence) {
            // Sweep the fixed window around the evidence cell row-major.
            for (int i = -params.m; i <= params.m && !oracle.converged(); ++i)
                for (int j = -params.m; j <= params.m; ++j)
                    if (oracle.visit(wrap(oracle, probe.x + j, probe.y + i)) ==
                        VisitOutcome::Found)
                        break;
        }
        if (oracle.converged()) break;
        probe = pos_step(probe, params.d, rng, oracle.width(), oracle.height());
    }

    bool fallback = false;
    if (!oracle.converged()) {
        fallback = true;
        exhaustive_scan(oracle);
    }
    return collect_outcome(oracle, fallback);
}

namespace {

// Shared probe-and-grow flow: random walk probes; evidence starts expanding
// chebyshev rings around it until the target turns up or the rings reach the
// grid extent. Tabu search reuses this and only counts unique visits.
bool probe_and_grow(Oracle& oracle, int t, int d, Rng& rng) {
    const int side = std::min(oracle.width(), oracle.height());
    Coord probe = random_cell(oracle, rng);
    for (int k = 0; k < t && !oracle.converged(); ++k) {
        if (oracle.visit(probe) == VisitOutcome::Evidence) {
            for (int radius = 1; !oracle.converged(); ++radius) {
                if (radius >= side) return true; // grew past the grid
                if (visit_ring(oracle, probe, radius, nullptr)) break;
            }
        }
        if (oracle.converged()) break;
        probe = pos_step(probe, d, rng, oracle.width(), oracle.height());
    }
    return false;
}

SearchOutcome vns2_like(Oracle& oracle, int t, int d, Rng& rng, bool steps_unique) {
    require_positive(t, "t");
    require_positive(d, "d");
    bool fallback = probe_and_grow(oracle, t, d, rng);
    if (!oracle.converged()) {
        fallback = true;
        exhaustive_scan(oracle);
    }
    return collect_outcome(oracle, fallback, steps_unique);
}

} // namespace

SearchOutcome vns2_search(Oracle& oracle, const Vns2Params& params, Rng& rng) {
    return vns2_like(oracle, params.t, params.d, rng, false);
}

SearchOutcome tabu_search(Oracle& oracle, const TabuParams& params, Rng& rng) {
    return vns2_like(oracle, params.t, params.d, rng, true);
}

SearchOutcome vns3_search(Oracle& oracle, const Vns3Params& params, Rng& rng) {
    require_positive(params.t, "t");
    require_positive(params.d, "d");
    require_positive(params.g, "g");
    const int side = std::min(oracle.width(), oracle.height());

    Coord anchor = random_cell(oracle, rng);
    bool grew_out = false;
    for (int k = 0; k < params.t && !oracle.converged(); ++k) {
        bool evidence = false;
        // 3x3 block around the anchor, row-major.
        for (int i = -1; i <= 1 && !oracle.converged(); ++i)
            for (int j = -1; j <= 1; ++j) {
                const VisitOutcome v =
                    oracle.visit(wrap(oracle, anchor.x + j, anchor.y + i));
                if (v == VisitOutcome::Found) break;
                if (v == VisitOutcome::Evidence) evidence = true;
            }
        if (oracle.converged()) break;

        int count = 1;
        while (count < params.g || evidence) {
            count += 1;
            if (count >= side) { grew_out = true; break; }
            if (visit_ring(oracle, anchor, count, &evidence)) break;
        }
        if (oracle.converged() || grew_out) break;
        anchor = pos_step(anchor, params.d, rng, oracle.width(), oracle.height());
    }

    bool fallback = grew_out;
    if (!oracle.converged()) {
        fallback = true;
        exhaustive_scan(oracle);
    }
    return collect_outcome(oracle, fallback);
}

SearchOutcome run_search(Algorithm algo, Oracle& oracle,
                         const SearchParams& p, Rng& rng) {
    switch (algo) {
        case Algorithm::Fts: return fts_search(oracle, {p.t, p.d, p.c}, rng);
        case Algorithm::Ils: return ils_search(oracle, {p.t, p.a}, rng);
        case Algorithm::Vns1: return vns1_search(oracle, {p.t, p.m, p.d}, rng);
        case Algorithm::Vns2: return vns2_search(oracle, {p.t, p.d}, rng);
        case Algorithm::Vns3: return vns3_search(oracle, {p.t, p.d, p.g}, rng);
        case Algorithm::Tabu: return tabu_search(oracle, {p.t, p.d}, rng);
        case Algorithm::Exhaustive: return exhaustive_search(oracle);
    }
    throw std::invalid_argument("unknown algorithm");
}

std::string trace_to_csv(const std::vector<TraceEntry>& trace) {
    std::ostringstream out;
    out << "step,x,y,outcome\n";
    std::uint64_t step = 0;
    for (const TraceEntry& e : trace)
        out << ++step << ',' << e.pos.x << ',' << e.pos.y << ','
            << outcome_code(e.outcome) << '\n';
    return out.str();
}

} // namespace sbe
