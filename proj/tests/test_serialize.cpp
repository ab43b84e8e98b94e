#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "wulffmc/serialize.hpp"

using namespace wulffmc;

namespace {

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

Shape wavy_grid(std::size_t m) {
    std::vector<double> values(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(m);
        values[i] = 1.4 + 0.2 * std::cos(3.0 * th) + 0.07 * std::sin(2.0 * th);
    }
    return Shape::radial_grid(std::move(values));
}

Shape bumpy_sphere() {
    // ellipsoid-like profile with three distinct principal moments
    const int np = 6, na = 12;
    std::vector<double> nodes, weights;
    gauss_legendre(np, nodes, weights);
    std::vector<double> values;
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < na; ++j) {
            const double u = nodes[static_cast<std::size_t>(i)];
            const double s2 = 1.0 - u * u;
            const double phi = 2.0 * M_PI * j / na;
            const double wx = std::sqrt(s2) * std::cos(phi);
            values.push_back(1.3 / std::sqrt(1.0 - 0.4 * wx * wx - 0.2 * s2));
        }
    return Shape::radial_grid3(np, na, std::move(values));
}

// swap one line of a valid record for something else
std::string patched(const std::string& record, const std::string& from, const std::string& to) {
    std::string out = record;
    const auto at = out.find(from);
    REQUIRE(at != std::string::npos);
    out.replace(at, from.size(), to);
    return out;
}

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
    const double cases[] = {0.0,
                            -0.0,
                            1.0,
                            0.1,
                            1.0 / 3.0,
                            -2.0,
                            1e-300,
                            5e-324,
                            1.7976931348623157e308,
                            123456789.123456789,
                            3.0000000000000004,
                            -14.929339710905825};
    for (double v : cases) {
        const double back = parse_double(format_double(v));
        CHECK(same_bits(back, v));
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK_THROWS_AS(parse_double("1.2.3"), RecordError);
    CHECK_THROWS_AS(parse_double(""), RecordError);
    CHECK_THROWS_AS(parse_double("grid"), RecordError);
    CHECK_THROWS_AS(parse_double("1e"), RecordError);
}

TEST_CASE("shape records restore every family bit for bit") {
    const Shape shapes[] = {Shape::ball(2),
                            Shape::ball(3),
                            Shape::regular_polygon(6),
                            Shape::regular_polygon(7),
                            Shape::cuboctahedron(),
                            wavy_grid(24),
                            bumpy_sphere(),
                            normalize_to_volume(Shape::ball(2), 37.5),
                            Shape::regular_polygon(5).transformed(0.7, {1.25, -0.5, 0.0}),
                            Shape::cuboctahedron().transformed(
                                Mat3::rotation_z(0.4), {0.1, 0.2, -0.3})};
    for (const Shape& s : shapes) {
        const std::string text = shape_record(s);
        const Shape back = parse_shape_record(text);
        CHECK(back == s);
        CHECK(shape_record(back) == text);  // stable re-emission
    }
}

TEST_CASE("shape records reject corruption") {
    const std::string hex = shape_record(Shape::regular_polygon(6));
    CHECK_THROWS_AS(parse_shape_record(""), RecordError);
    CHECK_THROWS_AS(parse_shape_record("shape v2\n"), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "family polygon", "family blob")),
                    RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "sides 6", "sides 2")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "sides 6", "flavor 6")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "dim 2", "dim 3")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "dim 2\n", "dim 2\ndim 2\n")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "end shape", "")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(hex + "junk\n"), RecordError);
    // a tampered reference volume no longer matches the stored geometry
    CHECK_THROWS_AS(parse_shape_record(patched(hex, "refvol 10", "refvol 11")), RecordError);
    CHECK_THROWS_WITH_AS(parse_shape_record(patched(hex, "family polygon", "mystery polygon")),
                         doctest::Contains("unknown key"), RecordError);

    const std::string grid = shape_record(wavy_grid(24));
    CHECK_THROWS_AS(parse_shape_record(patched(grid, "count 24", "count 23")), RecordError);
    CHECK_THROWS_AS(parse_shape_record(patched(grid, "values ", "values 0.2 ")), RecordError);

    const std::string posed =
        shape_record(Shape::regular_polygon(5).transformed(0.7, {1.25, -0.5, 0.0}));
    CHECK_THROWS_AS(parse_shape_record(patched(posed, "pose 0.7", "pose 2.7")), RecordError);
    // errors carry the offending line number
    CHECK_THROWS_WITH_AS(parse_shape_record(patched(hex, "dim 2", "dim 4")),
                         doctest::Contains("line 3"), RecordError);
}

TEST_CASE("records tolerate comment lines") {
    const std::string hex = shape_record(Shape::regular_polygon(6));
    const std::string commented = "# provenance goes here\n  # more\n" + hex + "# trailing\n";
    CHECK(parse_shape_record(commented) == Shape::regular_polygon(6));

    const ScaledContainer box(Shape::ball(2), 20.0);
    const ParticleConfiguration config(box, {{0.4, -0.2, 0.0}});
    const std::string rec = "# header\n" + configuration_record(config);
    CHECK(parse_configuration_record(rec).positions()[0].x == 0.4);

    // comments do not hide real junk
    CHECK_THROWS_AS(parse_shape_record(hex + "# note\nstray\n"), RecordError);
}

TEST_CASE("configuration records round-trip positions exactly") {
    const ScaledContainer box(Shape::regular_polygon(6), 40.0);
    const std::vector<Vec> pts = {{0.1, 0.2, 0.0},
                                  {-1.3, 0.7, 0.0},
                                  {1.0 + 1.0 / 3.0, -1.123456789012345678, 0.0}};
    const ParticleConfiguration config(box, pts, true);
    const std::string text = configuration_record(config);
    const ParticleConfiguration back = parse_configuration_record(text);
    CHECK(back.size() == config.size());
    CHECK(back.validates_core());
    CHECK(back.container().target_volume() == 40.0);
    CHECK(back.container().shape() == box.shape());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(same_bits(back.positions()[i].x, pts[i].x));
        CHECK(same_bits(back.positions()[i].y, pts[i].y));
    }
    CHECK(configuration_record(back) == text);
    CHECK(back.total_energy().has_value());

    // gas-mode snapshot with an overlapping pair survives the trip
    const ParticleConfiguration gas(box, {{0.0, 0.0, 0.0}, {0.25, 0.0, 0.0}}, false);
    const ParticleConfiguration gas_back = parse_configuration_record(configuration_record(gas));
    CHECK_FALSE(gas_back.validates_core());
    CHECK_FALSE(gas_back.total_energy().has_value());

    const ScaledContainer ball3(Shape::ball(3), 25.0);
    const ParticleConfiguration spatial(ball3, {{0.3, -0.4, 0.5}, {-0.9, 0.2, -0.1}}, true);
    const ParticleConfiguration spatial_back =
        parse_configuration_record(configuration_record(spatial));
    CHECK(spatial_back.positions()[1].z == spatial.positions()[1].z);
    CHECK(spatial_back.container().shape() == ball3.shape());
}

TEST_CASE("configuration records reject corruption") {
    const ScaledContainer box(Shape::regular_polygon(6), 40.0);
    const ParticleConfiguration config(box, {{0.1, 0.2, 0.0}, {-1.3, 0.7, 0.0}}, true);
    const std::string text = configuration_record(config);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "count 2", "count 3")), RecordError);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "count 2", "count 1")), RecordError);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "pos 0.1 0.2", "pos 0.1")),
                    RecordError);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "core 1", "core maybe")),
                    RecordError);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "volume 40", "volume -40")),
                    RecordError);
    CHECK_THROWS_AS(parse_configuration_record(patched(text, "dim 2\ncount", "count")),
                    RecordError);
    // a position pushed outside the container fails the rebuild validation
    CHECK_THROWS_WITH_AS(parse_configuration_record(patched(text, "pos 0.1 0.2", "pos 9.1 9.2")),
                         doctest::Contains("configuration invalid"), RecordError);
}
