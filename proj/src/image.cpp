#include "sbe/image.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sbe {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_header_token(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#')
        ++pos;
    if (start == pos)
        throw std::runtime_error("pgm: malformed header, token missing");
    return std::string(bytes.substr(start, pos - start));
}

int header_int(std::string_view bytes, std::size_t& pos, const char* what) {
    const std::string tok = next_header_token(bytes, pos);
    for (const char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::runtime_error(std::string("pgm: malformed header, bad ") + what +
                                     " '" + tok + "'");
    const long v = std::strtol(tok.c_str(), nullptr, 10);
    if (v < 0 || v > 1 << 20)
        throw std::runtime_error(std::string("pgm: malformed header, ") + what +
                                 " out of range");
    return static_cast<int>(v);
}

} // namespace

GrayImage decode_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    const std::string magic = next_header_token(bytes, pos);
    if (magic != "P5")
        throw std::runtime_error("pgm: unsupported format '" + magic +
                                 "', only binary P5 is handled");
    const int width = header_int(bytes, pos, "width");
    const int height = header_int(bytes, pos, "height");
    const int maxval = header_int(bytes, pos, "maxval");
    if (width < 1 || height < 1)
        throw std::runtime_error("pgm: malformed header, empty image");
    if (maxval < 1 || maxval > 255)
        throw std::runtime_error("pgm: maxval " + std::to_string(maxval) +
                                 " unsupported, expected 1..255");
    if (pos >= bytes.size() ||
        !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw std::runtime_error("pgm: malformed header, missing separator");
    ++pos; // single whitespace byte before the payload

    const std::size_t need = static_cast<std::size_t>(width) * height;
    if (bytes.size() - pos < need)
        throw std::runtime_error("pgm: truncated payload, expected " +
                                 std::to_string(need) + " bytes, got " +
                                 std::to_string(bytes.size() - pos));
    GrayImage img(width, height);
    for (std::size_t i = 0; i < need; ++i)
        img.pixels[i] = static_cast<std::uint8_t>(bytes[pos + i]);
    return img;
}

std::string encode_pgm(const GrayImage& image) {
    std::ostringstream out;
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    return out.str();
}

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return decode_pgm(buf.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << encode_pgm(image);
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

bool template_fits(const GrayImage& tpl, const GrayImage& image, Coord anchor) {
    return anchor.x >= 0 && anchor.y >= 0 &&
           anchor.x + tpl.width <= image.width &&
           anchor.y + tpl.height <= image.height;
}

double mae(const GrayImage& tpl, const GrayImage& image, Coord anchor) {
    if (!template_fits(tpl, image, anchor))
        throw std::invalid_argument("template overflows the image edge");
    std::uint64_t sum = 0;
    for (int y = 0; y < tpl.height; ++y) {
        const std::uint8_t* t = &tpl.pixels[static_cast<std::size_t>(y) * tpl.width];
        const std::uint8_t* w =
            &image.pixels[static_cast<std::size_t>(anchor.y + y) * image.width + anchor.x];
        for (int x = 0; x < tpl.width; ++x)
            sum += static_cast<std::uint64_t>(std::abs(int(t[x]) - int(w[x])));
    }
    return static_cast<double>(sum) /
           (static_cast<double>(tpl.width) * static_cast<double>(tpl.height));
}

bool mae_below(const GrayImage& tpl, const GrayImage& image, Coord anchor, double tau) {
    if (!template_fits(tpl, image, anchor))
        throw std::invalid_argument("template overflows the image edge");
    const double limit =
        tau * static_cast<double>(tpl.width) * static_cast<double>(tpl.height);
    std::uint64_t sum = 0;
    for (int y = 0; y < tpl.height; ++y) {
        const std::uint8_t* t = &tpl.pixels[static_cast<std::size_t>(y) * tpl.width];
        const std::uint8_t* w =
            &image.pixels[static_cast<std::size_t>(anchor.y + y) * image.width + anchor.x];
        for (int x = 0; x < tpl.width; ++x)
            sum += static_cast<std::uint64_t>(std::abs(int(t[x]) - int(w[x])));
        if (static_cast<double>(sum) >= limit) return false;
    }
    return static_cast<double>(sum) < limit;
}

GrayImage build_average_template(const std::vector<GrayImage>& patches) {
    if (patches.empty())
        throw std::invalid_argument("average template needs at least one patch");
    const int w = patches[0].width;
    const int h = patches[0].height;
    for (const GrayImage& p : patches)
        if (p.width != w || p.height != h)
            throw std::invalid_argument("average template needs same-sized patches");

    GrayImage out(w, h);
    const std::uint64_t n = patches.size();
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        std::uint64_t sum = 0;
        for (const GrayImage& p : patches) sum += p.pixels[i];
        // round half up: floor(sum/n + 1/2)
        out.pixels[i] = static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
    }
    return out;
}

} // namespace sbe
