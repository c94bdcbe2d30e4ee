#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sbe/image.hpp"
#include "sbe/rng.hpp"

using namespace sbe;

namespace {

GrayImage random_image(int w, int h, Rng& rng) {
    GrayImage img(w, h);
    for (auto& p : img.pixels)
        p = static_cast<std::uint8_t>(rng.next_int(0, 255));
    return img;
}

} // namespace

TEST_SUITE("image") {

TEST_CASE("pgm decode reads dimensions, comments and payload") {
    const std::string bytes = std::string("P5\n# a comment line\n2 2\n255\n") +
                              std::string("\x00\x40\x80\xff", 4);
    const GrayImage img = decode_pgm(bytes);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.at(0, 0) == 0);
    CHECK(img.at(1, 0) == 64);
    CHECK(img.at(0, 1) == 128);
    CHECK(img.at(1, 1) == 255);

    SUBCASE("tokens may be separated by any whitespace") {
        const GrayImage same = decode_pgm(std::string("P5 2\t2  255 ") +
                                          std::string("\x00\x40\x80\xff", 4));
        CHECK(same == img);
    }
    SUBCASE("comments may interrupt the header anywhere") {
        const GrayImage same =
            decode_pgm(std::string("P5\n2 # width done\n2\n# nearly there\n255\n") +
                       std::string("\x00\x40\x80\xff", 4));
        CHECK(same == img);
    }
    SUBCASE("payload bytes after the count are ignored") {
        const GrayImage same = decode_pgm(bytes + "trailing junk");
        CHECK(same == img);
    }
}

TEST_CASE("pgm decode reports each failure distinctly") {
    CHECK_THROWS_WITH_AS(decode_pgm("P2\n2 2\n255\n0 0 0 0"),
                         "pgm: unsupported format 'P2', only binary P5 is handled",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(decode_pgm("P5\nx 2\n255\n...."),
                         "pgm: malformed header, bad width 'x'", std::runtime_error);
    CHECK_THROWS_WITH_AS(decode_pgm(std::string("P5\n2 2\n65535\n") +
                                    std::string(8, '\0')),
                         "pgm: maxval 65535 unsupported, expected 1..255",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(decode_pgm("P5\n2 2\n255\nab"),
                         "pgm: truncated payload, expected 4 bytes, got 2",
                         std::runtime_error);
    CHECK_THROWS_AS(decode_pgm(""), std::runtime_error);
    CHECK_THROWS_AS(decode_pgm("P5\n0 2\n255\n"), std::runtime_error);
    CHECK_THROWS_AS(decode_pgm("P5\n2 2"), std::runtime_error);
}

TEST_CASE("pgm round-trips bit-exactly") {
    Rng rng(71);
    const GrayImage img = random_image(13, 7, rng);
    CHECK(decode_pgm(encode_pgm(img)) == img);

    const std::string path = "image_roundtrip_test.pgm";
    save_pgm(img, path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream raw;
    raw << in.rdbuf();
    in.close();
    CHECK(raw.str() == encode_pgm(img));
    CHECK(load_pgm(path) == img);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_pgm("definitely_missing.pgm"), std::runtime_error);
    CHECK_THROWS_AS(save_pgm(img, "no_such_dir/out.pgm"), std::runtime_error);
}

TEST_CASE("mae matches its definition") {
    GrayImage image(16, 12, 37);
    GrayImage tpl(4, 3, 37);
    CHECK(mae(tpl, image, {5, 4}) == 0.0); // window identical to the template

    GrayImage one(1, 1, 100);
    GrayImage pixel(1, 1, 160);
    CHECK(mae(one, pixel, {0, 0}) == 60.0);

    GrayImage dark(3, 3, 0);
    GrayImage bright(8, 8, 255);
    CHECK(mae(dark, bright, {2, 2}) == 255.0);

    SUBCASE("agrees with a direct recomputation at random anchors") {
        Rng rng(99);
        const GrayImage scene = random_image(24, 20, rng);
        const GrayImage patch = random_image(5, 6, rng);
        for (int trial = 0; trial < 200; ++trial) {
            const Coord a{rng.next_int(0, 24 - 5), rng.next_int(0, 20 - 6)};
            std::uint64_t sum = 0;
            for (int y = 0; y < 6; ++y)
                for (int x = 0; x < 5; ++x)
                    sum += static_cast<std::uint64_t>(
                        std::abs(int(patch.at(x, y)) -
                                 int(scene.at(int(a.x) + x, int(a.y) + y))));
            CHECK(mae(patch, scene, a) == static_cast<double>(sum) / 30.0);
        }
    }

    SUBCASE("rejects anchors that overflow the edge") {
        CHECK(template_fits(tpl, image, {12, 9}));
        CHECK(!template_fits(tpl, image, {13, 9}));
        CHECK_THROWS_AS(mae(tpl, image, {13, 9}), std::invalid_argument);
        CHECK_THROWS_AS(mae(tpl, image, {0, 10}), std::invalid_argument);
        CHECK_THROWS_AS(mae(tpl, image, {-1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(mae_below(tpl, image, {13, 9}, 10.0), std::invalid_argument);
    }
}

TEST_CASE("thresholded mae agrees with the full score") {
    Rng rng(123);
    const GrayImage scene = random_image(30, 30, rng);
    const GrayImage patch = random_image(6, 6, rng);
    const double taus[] = {0.0, 1.0, 10.5, 64.0, 127.9, 255.0, 256.0};
    for (int trial = 0; trial < 100; ++trial) {
        const Coord a{rng.next_int(0, 24), rng.next_int(0, 24)};
        const double score = mae(patch, scene, a);
        for (const double tau : taus)
            CHECK(mae_below(patch, scene, a, tau) == (score < tau));
    }

    // Strictly-below boundary.
    GrayImage one(1, 1, 100);
    GrayImage pixel(1, 1, 160);
    CHECK(!mae_below(one, pixel, {0, 0}, 60.0));
    CHECK(mae_below(one, pixel, {0, 0}, 60.5));
    CHECK(!mae_below(one, pixel, {0, 0}, 0.0));
}

TEST_CASE("average template is the pixelwise mean, half rounded up") {
    Rng rng(7);
    const GrayImage patch = random_image(4, 4, rng);
    CHECK(build_average_template({patch}) == patch);
    CHECK(build_average_template({patch, patch, patch}) == patch);

    const GrayImage black(4, 4, 0);
    const GrayImage white(4, 4, 255);
    const GrayImage mid = build_average_template({black, white});
    for (const auto p : mid.pixels) CHECK(p == 128); // 127.5 rounds up

    const GrayImage low = build_average_template({black, black, GrayImage(4, 4, 1)});
    for (const auto p : low.pixels) CHECK(p == 0); // 1/3 rounds down
    const GrayImage pair = build_average_template({GrayImage(4, 4, 1), GrayImage(4, 4, 2)});
    for (const auto p : pair.pixels) CHECK(p == 2); // 1.5 rounds up

    CHECK_THROWS_AS(build_average_template({}), std::invalid_argument);
    CHECK_THROWS_AS(build_average_template({black, GrayImage(3, 4, 0)}),
                    std::invalid_argument);
}

TEST_CASE("image construction guards its sides") {
    CHECK_THROWS_AS(GrayImage(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(GrayImage(4, -1), std::invalid_argument);
    const GrayImage img(3, 2, 9);
    CHECK(img.pixels.size() == 6);
    CHECK(img.at(2, 1) == 9);
}

} // TEST_SUITE
