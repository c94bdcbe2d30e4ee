#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbe/core.hpp"
#include "sbe/rng.hpp"

namespace sbe {

enum class Algorithm { Fts, Ils, Vns1, Vns2, Vns3, Tabu, Exhaustive };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);
std::vector<Algorithm> all_algorithms();

// One bundle holds every tunable; each searcher reads its own subset:
//   fts: t d c   ils: t a   vns1: t m d   vns2/tabu: t d   vns3: t d g
struct SearchParams {
    int t = 1; // probe/triangle/square budget before the exhaustive fallback
    int d = 1; // jump distance between probes
    int c = 1; // fractal growth iterations per triangle
    int m = 1; // fixed neighbourhood radius (vns1)
    int g = 1; // ring growth iterations per square (vns3)
    int a = 1; // samples per square (ils)
};

struct FtsParams  { int t = 1; int d = 1; int c = 1; };
struct IlsParams  { int t = 1; int a = 1; };
struct Vns1Params { int t = 1; int m = 1; int d = 1; };
struct Vns2Params { int t = 1; int d = 1; };
struct Vns3Params { int t = 1; int d = 1; int g = 1; };
struct TabuParams { int t = 1; int d = 1; };

struct SearchOutcome {
    Coord found;
    std::uint64_t total_visits = 0;
    std::uint64_t unique_visits = 0;
    std::uint64_t evidence_hits = 0;
    // What the searcher reports as its cost: total visits everywhere except
    // tabu search, which skips already-visited cells in its accounting and
    // reports unique visits.
    std::uint64_t steps = 0;
    bool fallback_used = false;
    std::vector<TraceEntry> trace; // filled when the oracle traces
};

// Random toroidal jump: moves d cells along one axis, axis chosen by a fair
// coin. The deterministic overload is the same step with the coin fixed.
Coord pos_step(Coord p, int d, bool horizontal, int w, int h);
Coord pos_step(Coord p, int d, Rng& rng, int w, int h);

// --- fractal triangle machinery -----------------------------------------
//
// Anchors are kept unwrapped (64-bit) while a triangle grows; every visit is
// wrapped onto the grid. That keeps the growth geometry exact even when the
// pattern extends past an edge.

struct TriangleState {
    std::int64_t x = 0;
    std::int64_t y = 0;
    int y_c = -1;        // vertical orientation, flipped before each growth
    std::int64_t h = 2;  // triangle height
    std::int64_t w = 3;  // triangle base width
    int count = 0;       // growth iterations done
};

enum class StretchResult { Nothing, Evidence, Converged };

// Visits the anchor, then h rows widening by one cell per side, stepping y_c
// per row. Stops at the first evidence or target cell.
StretchResult triangle_stretch(Oracle& oracle, std::int64_t x, std::int64_t y,
                               int y_c, std::int64_t h);

enum class GrowthStop { Converged, Budget, GrewPastGrid };

// Runs one full triangle: initial stretch plus growth iterations while the
// budget c allows or evidence keeps the triangle growing. Each iteration
// engulfs the triangle grown so far in a double-height triangle of the
// opposite orientation: the old shape is that triangle's inverted middle
// quarter, and three same-height stretches add the missing tip and base
// corners. The union is always one solid triangle, no cell is revisited,
// and coverage quadruples per iteration. The first evidence cell ends its
// stretch early and latches the growth on; from then on stretches run to
// completion, so the widening triangle closes over the target's
// neighbourhood instead of leaving gaps behind every further evidence cell.
// GrewPastGrid means the triangle reached the grid extent without
// converging, which sends the caller to the exhaustive fallback.
GrowthStop grow_triangle(Oracle& oracle, TriangleState& tri, int c);

// --- searchers -----------------------------------------------------------

// Side of the block grid ils uses: the largest k with k*k <= t that tiles
// both grid sides evenly (so a budget that is no perfect square, or does not
// divide the grid, is coerced down).
int ils_tiling(int t, int w, int h);

SearchOutcome exhaustive_search(Oracle& oracle);

// Up to t triangle growths; each one starts a d-jump away from where the
// previous growth drifted to, so consecutive triangles land in fresh area.
// Falls back to the exhaustive scan when the budget runs out or a triangle
// grows past the grid.
SearchOutcome fts_search(Oracle& oracle, const FtsParams& params, Rng& rng);
SearchOutcome ils_search(Oracle& oracle, const IlsParams& params, Rng& rng);
SearchOutcome vns1_search(Oracle& oracle, const Vns1Params& params, Rng& rng);
SearchOutcome vns2_search(Oracle& oracle, const Vns2Params& params, Rng& rng);
SearchOutcome vns3_search(Oracle& oracle, const Vns3Params& params, Rng& rng);
SearchOutcome tabu_search(Oracle& oracle, const TabuParams& params, Rng& rng);

SearchOutcome run_search(Algorithm algo, Oracle& oracle,
                         const SearchParams& params, Rng& rng);

// CSV with header "step,x,y,outcome"; outcome is F, E or M.
std::string trace_to_csv(const std::vector<TraceEntry>& trace);

} // namespace sbe
