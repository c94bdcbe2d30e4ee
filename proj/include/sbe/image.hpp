#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sbe/core.hpp"

namespace sbe {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0) : width(w), height(h) {
        if (w < 1 || h < 1)
            throw std::invalid_argument("image sides must be >= 1");
        pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
    }

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Binary (P5) PGM with maxval up to 255. Header comments are accepted.
GrayImage decode_pgm(std::string_view bytes);
std::string encode_pgm(const GrayImage& image);
GrayImage load_pgm(const std::string& path);
void save_pgm(const GrayImage& image, const std::string& path);

// True when the template placed with its top-left corner at anchor stays
// inside the image.
bool template_fits(const GrayImage& tpl, const GrayImage& image, Coord anchor);

// Mean absolute pixel difference of the template against the image window at
// anchor. Throws if the template overflows the image edge.
double mae(const GrayImage& tpl, const GrayImage& image, Coord anchor);

// Threshold form of mae() < tau. Abandons the window early once the running
// difference sum already rules the match out, which is what makes scanning a
// whole image affordable.
bool mae_below(const GrayImage& tpl, const GrayImage& image, Coord anchor, double tau);

// Pixelwise mean of same-sized patches, rounded half up.
GrayImage build_average_template(const std::vector<GrayImage>& patches);

} // namespace sbe
