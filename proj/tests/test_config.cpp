#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "wulffmc/config.hpp"
#include "wulffmc/rng.hpp"
#include "wulffmc/serialize.hpp"

using namespace wulffmc;

namespace {

const char* kMinimal =
    "[system]\n"
    "dimension = 2\n"
    "particles = 64\n"
    "beta = 5\n"
    "pressure = 2\n"
    "shapes = ball\n"
    "[run]\n"
    "seed = 42\n";

bool mentions(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config: minimal text fills the rest with defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.dimension == 2);
    REQUIRE(cfg.particles.size() == 1);
    CHECK(cfg.particles[0] == 64);
    CHECK(cfg.beta == 5.0);
    REQUIRE(cfg.pressures.size() == 1);
    CHECK(cfg.pressures[0] == 2.0);
    REQUIRE(cfg.shapes.size() == 1);
    CHECK(cfg.shapes[0].text == "ball");
    CHECK(cfg.seed == 42);
    CHECK(cfg.replicas == 4);
    CHECK(cfg.jobs == 1);
    CHECK(cfg.schedule.burnin_sweeps == 2000);
    CHECK(cfg.schedule.blocks == 16);
    CHECK(cfg.emit.csv);
    CHECK(cfg.emit.json);
    CHECK(!cfg.emit.svg);
    CHECK(!cfg.emit.snapshots);
    CHECK(cfg.search.base_seed == 42);  // synced from the run seed

    const auto text = serialize_config(cfg);
    CHECK(mentions(text, "burnin = 2000"));
    CHECK(mentions(text, "emit = csv, json"));
    CHECK(mentions(text, "verdict_z = 3"));
    CHECK(mentions(text, "seed = 42"));
}

TEST_CASE("config: canonical form round-trips to itself") {
    const std::string rich =
        "# experiment sweep\n"
        "[system]\n"
        "dimension = 3\n"
        "particles = 8, 27, 64   # three sizes\n"
        "beta = 2.5\n"
        "pressure = 0.5, 2, 10\n"
        "shapes = sphere, cuboctahedron\n"
        "ideal_gas = false\n"
        "volume_cap = 0\n"
        "[schedule]\n"
        "burnin = 500\n"
        "measurement = 4000\n"
        "thinning = 5\n"
        "blocks = 8\n"
        "[run]\n"
        "replicas = 3\n"
        "seed = 99\n"
        "seeds = 11, 22, 33\n"
        "output = results/run1\n"
        "jobs = 2\n"
        "emit = csv, svg\n"
        "[search]\n"
        "budget = 12\n"
        "step = 0.05\n"
        "[compare]\n"
        "verdict_z = 2.5\n";
    const auto cfg = parse_config(rich);
    const auto canon = serialize_config(cfg);
    const auto again = serialize_config(parse_config(canon));
    CHECK(canon == again);
    CHECK(config_hash(cfg) == config_hash(parse_config(canon)));

    CHECK(cfg.replica_seeds == std::vector<std::uint64_t>{11, 22, 33});
    CHECK(cfg.emit.csv);
    CHECK(!cfg.emit.json);
    CHECK(cfg.emit.svg);
    CHECK(cfg.search.budget == 12);
    CHECK(cfg.verdict_z == 2.5);
    CHECK(mentions(canon, "emit = csv, svg"));
}

TEST_CASE("config: parse errors are anchored to their line") {
    CHECK(mentions(error_of("[systems]\n"), "line 1"));
    CHECK(mentions(error_of("[systems]\n"), "unknown section"));
    CHECK(mentions(error_of("[system]\nnope = 1\n"), "line 2"));
    CHECK(mentions(error_of("[system]\nnope = 1\n"), "unknown key"));
    CHECK(mentions(error_of("[system]\nbeta = 1\nbeta = 2\n"), "line 3"));
    CHECK(mentions(error_of("[system]\nbeta = 1\nbeta = 2\n"), "duplicate"));
    CHECK(mentions(error_of("[system]\nbeta = fast\n"), "line 2"));
    CHECK(mentions(error_of("[system]\nbeta = fast\n"), "expects a number"));
    CHECK(mentions(error_of("[system]\nideal_gas = yes\n"), "true or false"));
    CHECK(mentions(error_of("beta = 1\n"), "before any [section]"));
    CHECK(mentions(error_of("[system\n"), "unterminated"));
    CHECK(mentions(error_of("[system]\nbeta 1\n"), "key = value"));
    CHECK(mentions(error_of("[run]\nemit = csv, pdf\n"), "unknown emit flag"));
    CHECK(mentions(error_of("[system]\nparticles = 16, x\n"), "non-negative integer"));
}

TEST_CASE("config: cross-field validation") {
    CHECK(mentions(error_of("[system]\ndimension = 4\n"), "dimension must be 2 or 3"));
    CHECK(mentions(error_of("[system]\npressure = 3, 1\n"), "sorted ascending"));
    CHECK(mentions(error_of("[system]\npressure = 0\n"), "volume_cap"));
    CHECK(error_of("[system]\npressure = 0\nvolume_cap = 50\n").empty());
    CHECK(mentions(error_of("[system]\nbeta = 0\n"), "beta must be positive"));
    CHECK(mentions(error_of("[system]\nparticles = 0\n"), "at least 1"));
    CHECK(mentions(error_of("[run]\nreplicas = 0\n"), "replicas"));

    // seed-count mismatch points at the seeds line
    const auto msg = error_of(
        "[run]\n"
        "replicas = 2\n"
        "seeds = 1, 2, 3\n");
    CHECK(mentions(msg, "line 3"));
    CHECK(mentions(msg, "one seed per replica"));

    // wrong-dimension shape points at the shapes line
    const auto mismatch = error_of(
        "[system]\n"
        "dimension = 2\n"
        "shapes = cuboctahedron\n");
    CHECK(mentions(mismatch, "line 3"));
    CHECK(mentions(mismatch, "cuboctahedron"));

    // schedule errors carry the section anchor
    const auto sched = error_of("[schedule]\nthinning = 0\n");
    CHECK(mentions(sched, "line 1"));
    CHECK(mentions(sched, "[schedule]"));
}

TEST_CASE("config: a missing seed is drawn once and then recorded") {
    const std::string seedless = "[system]\nbeta = 1\n";
    const auto first = parse_config(seedless);
    const auto second = parse_config(seedless);
    CHECK(first.seed != second.seed);  // fresh entropy per parse

    const auto text = serialize_config(first);
    CHECK(mentions(text, "seed = " + std::to_string(first.seed)));
    CHECK(parse_config(text).seed == first.seed);
}

TEST_CASE("config: overrides apply and re-validate") {
    auto cfg = parse_config(kMinimal);
    apply_override(cfg, "system.beta=2.5");
    CHECK(cfg.beta == 2.5);
    apply_override(cfg, "system.pressure=1,4,9");
    CHECK(cfg.pressures == std::vector<double>{1.0, 4.0, 9.0});
    apply_override(cfg, "run.emit=svg");
    CHECK(cfg.emit.svg);
    CHECK(!cfg.emit.csv);
    apply_override(cfg, "run.jobs = 3");
    CHECK(cfg.jobs == 3);

    CHECK_THROWS_AS(apply_override(cfg, "system.beta=-1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "system.nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "beta=1"), ConfigError);
}

TEST_CASE("config: file descriptors resolve through shape records") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "cfg_shape_test.txt";
    {
        std::ofstream out(path);
        out << shape_record(Shape::regular_polygon(7));
    }

    auto cfg = parse_config(kMinimal);
    apply_override(cfg, "system.shapes=file:" + path.string());
    const auto shapes = resolve_shapes(cfg);
    REQUIRE(shapes.size() == 1);
    CHECK(shape_record(shapes[0]) == shape_record(Shape::regular_polygon(7)));

    // wrong dimension for the recorded shape
    CHECK_THROWS_AS(apply_override(cfg, "system.dimension=3"), ConfigError);

    std::error_code ec;
    fs::remove(path, ec);
    CHECK_THROWS_AS(apply_override(cfg, "system.shapes=file:" + path.string()), ConfigError);
}

TEST_CASE("config: the hash tracks results-relevant content") {
    const auto a = parse_config(kMinimal);
    auto b = parse_config(kMinimal);
    CHECK(config_hash(a) == config_hash(b));

    // plumbing that cannot change sampled numbers keeps the hash
    apply_override(b, "run.output=elsewhere/deep");
    apply_override(b, "run.jobs=3");
    apply_override(b, "run.emit=svg");
    CHECK(config_hash(a) == config_hash(b));

    apply_override(b, "system.beta=5.0001");
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash_hex(a).size() == 16);
    CHECK(config_hash(parse_config(serialize_config(a))) == config_hash(a));

    auto c = parse_config(kMinimal);
    apply_override(c, "run.seed=43");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("config: derived run structures wire through") {
    auto cfg = parse_config(
        "[system]\n"
        "dimension = 3\n"
        "particles = 8, 27\n"
        "beta = 2\n"
        "pressure = 1, 5\n"
        "ideal_gas = true\n"
        "volume_cap = 80\n"
        "[run]\n"
        "replicas = 3\n"
        "seed = 7\n"
        "jobs = 2\n"
        "volume_factor = 6\n");

    const auto p = make_params(cfg, 1, 0);
    CHECK(p.dimension == 3);
    CHECK(p.particles == 27);
    CHECK(p.beta == 2.0);
    CHECK(p.pressure == 1.0);
    CHECK(p.ideal_gas);
    CHECK(p.volume_cap == 80.0);
    CHECK_THROWS(make_params(cfg, 2, 0));

    const auto est = make_estimate_options(cfg);
    CHECK(est.replicas == 3);
    CHECK(est.seeds == derive_seeds(7, 0, 3));
    CHECK(est.volume_factor == 6.0);
    CHECK(est.jobs == 2);

    apply_override(cfg, "run.seeds=100,200,300");
    CHECK(make_estimate_options(cfg).seeds == std::vector<std::uint64_t>{100, 200, 300});

    const auto cmp = make_compare_options(cfg);
    CHECK(cmp.replicas == 3);
    CHECK(cmp.base_seed == 7);
    CHECK(cmp.verdict_z == 3.0);
    CHECK(cmp.consistency_z == 5.0);
    CHECK(cmp.volume_factor == 6.0);
    CHECK(cmp.jobs == 2);
}
