#include "sbe/core.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sbe {

Instance generate_instance(int s, Rng& rng) {
    if (s < 16)
        throw std::invalid_argument("instance side must be >= 16");
    Instance inst;
    inst.width = s;
    inst.height = s;
    inst.delta = s / 10;
    inst.psi = {rng.next_int(0, s - 1), rng.next_int(0, s - 1)};

    const int n = s / 16;
    const int x0 = std::max(0, inst.psi.x - inst.delta);
    const int x1 = std::min(s - 1, inst.psi.x + inst.delta);
    const int y0 = std::max(0, inst.psi.y - inst.delta);
    const int y1 = std::min(s - 1, inst.psi.y + inst.delta);

    inst.evidence.reserve(n);
    while (static_cast<int>(inst.evidence.size()) < n) {
        const Coord c{rng.next_int(x0, x1), rng.next_int(y0, y1)};
        if (c == inst.psi) continue;
        bool dup = false;
        for (const Coord& e : inst.evidence)
            if (e == c) { dup = true; break; }
        if (!dup) inst.evidence.push_back(c);
    }
    return inst;
}

std::vector<Condition> validate_instance(const Instance& inst) {
    std::vector<Condition> violated;
    bool within_delta = true;
    bool inside_grid = true;
    for (const Coord& e : inst.evidence) {
        if (chebyshev(e, inst.psi) > inst.delta) within_delta = false;
        if (e.x < 0 || e.y < 0 || e.x >= inst.width || e.y >= inst.height)
            inside_grid = false;
    }
    if (!within_delta) violated.push_back(Condition::EvidenceWithinDelta);
    if (!inside_grid) violated.push_back(Condition::EvidenceInsideGrid);
    if (inst.evidence.empty()) violated.push_back(Condition::EvidenceNonempty);
    if (std::min(inst.width, inst.height) <= 2 * inst.delta + 1)
        violated.push_back(Condition::SideExceedsWindow);
    return violated;
}

ProbabilityBounds probability_bounds(int s, int delta) {
    if (s < 1 || delta < 0)
        throw std::invalid_argument("probability_bounds needs s >= 1 and delta >= 0");
    const double cells = static_cast<double>(s) * s;
    const double window = static_cast<double>(2 * delta + 1) * (2 * delta + 1);
    return {1.0 / cells, 1.0 / window};
}

InstanceOracle::InstanceOracle(const Instance& inst)
    : Oracle(inst.width, inst.height), inst_(&inst) {
    if (!inst.evidence.empty()) {
        int x0 = inst.evidence[0].x, x1 = x0;
        int y0 = inst.evidence[0].y, y1 = y0;
        for (const Coord& e : inst.evidence) {
            x0 = std::min(x0, e.x); x1 = std::max(x1, e.x);
            y0 = std::min(y0, e.y); y1 = std::max(y1, e.y);
        }
        box_x0_ = x0;
        box_y0_ = y0;
        box_w_ = x1 - x0 + 1;
        box_h_ = y1 - y0 + 1;
        evidence_mask_.assign(static_cast<std::size_t>(box_w_) * box_h_, 0);
        for (const Coord& e : inst.evidence)
            evidence_mask_[static_cast<std::size_t>(e.y - box_y0_) * box_w_ + (e.x - box_x0_)] = 1;
    }
}

std::string instance_to_text(const Instance& inst) {
    if (inst.width != inst.height)
        throw std::invalid_argument("only square instances have a text form");
    std::ostringstream out;
    out << "s=" << inst.width << " delta=" << inst.delta
        << " psi=" << inst.psi.x << ',' << inst.psi.y << '\n';
    for (const Coord& e : inst.evidence)
        out << "mu=" << e.x << ',' << e.y << '\n';
    return out.str();
}

namespace {

int parse_int(std::string_view text, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.begin(), text.end(), value);
    if (ec != std::errc() || ptr != text.end())
        throw std::runtime_error(std::string("instance text: bad ") + what +
                                 " value '" + std::string(text) + "'");
    return value;
}

Coord parse_coord(std::string_view text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw std::runtime_error(std::string("instance text: ") + what +
                                 " needs the form x,y");
    return {parse_int(text.substr(0, comma), what),
            parse_int(text.substr(comma + 1), what)};
}

std::string_view expect_key(std::string_view token, std::string_view key) {
    if (token.substr(0, key.size()) != key)
        throw std::runtime_error("instance text: expected '" + std::string(key) +
                                 "...' but got '" + std::string(token) + "'");
    return token.substr(key.size());
}

} // namespace

Instance instance_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("instance text: empty input");

    std::istringstream header(line);
    std::string tok_s, tok_delta, tok_psi, extra;
    if (!(header >> tok_s >> tok_delta >> tok_psi))
        throw std::runtime_error("instance text: header needs s=, delta= and psi=");
    if (header >> extra)
        throw std::runtime_error("instance text: trailing token '" + extra + "' in header");

    Instance inst;
    inst.width = inst.height = parse_int(expect_key(tok_s, "s="), "s");
    inst.delta = parse_int(expect_key(tok_delta, "delta="), "delta");
    inst.psi = parse_coord(expect_key(tok_psi, "psi="), "psi");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        inst.evidence.push_back(parse_coord(expect_key(line, "mu="), "mu"));
    }
    return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << instance_to_text(inst);
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_text(buf.str());
}

} // namespace sbe
