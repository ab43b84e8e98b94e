#include "wulffmc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "wulffmc/serialize.hpp"

namespace wulffmc {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    if (line == 0) throw ConfigError(what);  // no anchor: validation or override
    throw ConfigError("line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto piece = comma == std::string_view::npos ? value.substr(start)
                                                          : value.substr(start, comma - start);
        items.emplace_back(trim(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

double number(const std::string& key, std::string_view value, std::size_t line) {
    try {
        return parse_double(value);
    } catch (const RecordError&) {
        fail(line, "'" + key + "' expects a number, got '" + std::string(value) + "'");
    }
}

std::uint64_t unsigned_number(const std::string& key, std::string_view value, std::size_t line) {
    std::uint64_t v = 0;
    const auto out = std::from_chars(value.data(), value.data() + value.size(), v);
    if (out.ec != std::errc{} || out.ptr != value.data() + value.size())
        fail(line, "'" + key + "' expects a non-negative integer, got '" + std::string(value) +
                       "'");
    return v;
}

bool boolean(const std::string& key, std::string_view value, std::size_t line) {
    if (value == "true") return true;
    if (value == "false") return false;
    fail(line, "'" + key + "' expects true or false, got '" + std::string(value) + "'");
}

// set one key; shared by the file parser and CLI overrides
void apply_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, std::size_t line, bool& seed_seen) {
    const auto num = [&] { return number(key, value, line); };
    const auto uns = [&] { return unsigned_number(key, value, line); };
    if (section == "system") {
        if (key == "dimension") {
            cfg.dimension = static_cast<int>(uns());
        } else if (key == "particles") {
            cfg.particles.clear();
            for (const auto& item : split_list(value))
                cfg.particles.push_back(unsigned_number(key, item, line));
        } else if (key == "beta") {
            cfg.beta = num();
        } else if (key == "pressure") {
            cfg.pressures.clear();
            for (const auto& item : split_list(value))
                cfg.pressures.push_back(number(key, item, line));
        } else if (key == "shapes") {
            cfg.shapes.clear();
            for (const auto& item : split_list(value))
                if (!item.empty()) cfg.shapes.push_back({item});
        } else if (key == "ideal_gas") {
            cfg.ideal_gas = boolean(key, value, line);
        } else if (key == "volume_cap") {
            cfg.volume_cap = num();
        } else {
            fail(line, "unknown key '" + key + "' in [system]");
        }
    } else if (section == "schedule") {
        if (key == "burnin") cfg.schedule.burnin_sweeps = uns();
        else if (key == "measurement") cfg.schedule.measurement_sweeps = uns();
        else if (key == "thinning") cfg.schedule.thinning = uns();
        else if (key == "volume_moves") cfg.schedule.volume_move_fraction = num();
        else if (key == "blocks") cfg.schedule.blocks = uns();
        else if (key == "accept_low") cfg.schedule.accept_low = num();
        else if (key == "accept_high") cfg.schedule.accept_high = num();
        else if (key == "tune_interval") cfg.schedule.tune_interval = uns();
        else fail(line, "unknown key '" + key + "' in [schedule]");
    } else if (section == "run") {
        if (key == "replicas") {
            cfg.replicas = uns();
        } else if (key == "seed") {
            cfg.seed = uns();
            seed_seen = true;
        } else if (key == "seeds") {
            cfg.replica_seeds.clear();
            for (const auto& item : split_list(value))
                cfg.replica_seeds.push_back(unsigned_number(key, item, line));
        } else if (key == "output") {
            if (value.empty()) fail(line, "'output' must not be empty");
            cfg.output = value;
        } else if (key == "jobs") {
            cfg.jobs = uns();
        } else if (key == "volume_factor") {
            cfg.volume_factor = num();
        } else if (key == "emit") {
            cfg.emit = EmitFlags{false, false, false, false};
            for (const auto& item : split_list(value)) {
                if (item == "csv") cfg.emit.csv = true;
                else if (item == "json") cfg.emit.json = true;
                else if (item == "svg") cfg.emit.svg = true;
                else if (item == "snapshots") cfg.emit.snapshots = true;
                else if (item == "none") continue;
                else fail(line, "unknown emit flag '" + item + "'");
            }
        } else {
            fail(line, "unknown key '" + key + "' in [run]");
        }
    } else if (section == "search") {
        if (key == "modes") cfg.search.basis_modes = static_cast<int>(uns());
        else if (key == "resolution") cfg.search.grid_resolution = static_cast<int>(uns());
        else if (key == "step") cfg.search.step = num();
        else if (key == "budget") cfg.search.budget = uns();
        else if (key == "patience") cfg.search.patience = uns();
        else if (key == "shrink_after") cfg.search.shrink_after = uns();
        else if (key == "shrink") cfg.search.step_shrink = num();
        else if (key == "crn_replicas") cfg.search.crn_replicas = uns();
        else fail(line, "unknown key '" + key + "' in [search]");
    } else if (section == "compare") {
        if (key == "verdict_z") cfg.verdict_z = num();
        else if (key == "consistency_z") cfg.consistency_z = num();
        else fail(line, "unknown key '" + key + "' in [compare]");
    } else {
        fail(line, "unknown section [" + section + "]");
    }
}

Shape resolve_shape(const ShapeDescriptor& descriptor, int dim) {
    if (descriptor.text.rfind("file:", 0) == 0) {
        const std::string path = descriptor.text.substr(5);
        std::ifstream in(path);
        if (!in) throw ShapeError("cannot read shape file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        Shape shape = [&] {
            try {
                return parse_shape_record(buffer.str());
            } catch (const RecordError& e) {
                throw ShapeError("shape file '" + path + "': " + e.what());
            }
        }();
        if (shape.dim() != dim)
            throw ShapeError("shape file '" + path + "' is " + std::to_string(shape.dim()) +
                             "-dimensional, config wants " + std::to_string(dim));
        return shape;
    }
    return make_shape(descriptor, dim);
}

// cross-field checks; line anchors where the offending key is known
void validate(ExperimentConfig& cfg, std::size_t shapes_line, std::size_t seeds_line,
              std::size_t schedule_line, std::size_t search_line) {
    if (cfg.dimension != 2 && cfg.dimension != 3) fail(0, "dimension must be 2 or 3");
    if (cfg.particles.empty()) fail(0, "'particles' must not be empty");
    for (auto n : cfg.particles)
        if (n < 1) fail(0, "particle counts must be at least 1");
    if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) fail(0, "beta must be positive");
    if (cfg.pressures.empty()) fail(0, "'pressure' must not be empty");
    for (double p : cfg.pressures) {
        if (!(p >= 0.0) || !std::isfinite(p)) fail(0, "pressures must be non-negative");
        if (p == 0.0 && cfg.volume_cap <= 0.0)
            fail(0, "pressure 0 needs a positive volume_cap (the volume integral diverges)");
    }
    for (std::size_t i = 1; i < cfg.pressures.size(); ++i)
        if (cfg.pressures[i] < cfg.pressures[i - 1])
            fail(0, "pressure list must be sorted ascending");
    if (!(cfg.volume_cap >= 0.0) || !std::isfinite(cfg.volume_cap))
        fail(0, "volume_cap must be non-negative");
    if (cfg.replicas < 1) fail(0, "replicas must be at least 1");
    if (cfg.jobs < 1) fail(0, "jobs must be at least 1");
    if (!(cfg.volume_factor > 0.0)) fail(0, "volume_factor must be positive");
    if (!cfg.replica_seeds.empty() && cfg.replica_seeds.size() != cfg.replicas)
        fail(seeds_line, "'seeds' must list exactly one seed per replica (" +
                             std::to_string(cfg.replicas) + ")");
    if (!(cfg.verdict_z > 0.0)) fail(0, "verdict_z must be positive");
    if (!(cfg.consistency_z > 0.0)) fail(0, "consistency_z must be positive");

    cfg.search.base_seed = cfg.seed;
    cfg.search.volume_factor = cfg.volume_factor;
    try {
        cfg.schedule.validate();
    } catch (const std::exception& e) {
        fail(schedule_line, std::string("[schedule] invalid: ") + e.what());
    }
    try {
        cfg.search.validate();
    } catch (const std::exception& e) {
        fail(search_line, std::string("[search] invalid: ") + e.what());
    }
    for (const auto& descriptor : cfg.shapes) {
        try {
            resolve_shape(descriptor, cfg.dimension);
        } catch (const ShapeError& e) {
            fail(shapes_line, "shape '" + descriptor.text + "': " + e.what());
        }
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool seed_seen = false;
    std::string section;
    std::set<std::string> seen;
    std::size_t shapes_line = 0, seeds_line = 0, schedule_line = 0, search_line = 0;

    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto body = trim(raw);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail(line, "unterminated section header");
            section = std::string(trim(body.substr(1, body.size() - 2)));
            if (section != "system" && section != "schedule" && section != "run" &&
                section != "search" && section != "compare")
                fail(line, "unknown section [" + section + "]");
            if (section == "schedule") schedule_line = line;
            if (section == "search") search_line = line;
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) fail(line, "missing key before '='");
        if (section.empty()) fail(line, "'" + key + "' appears before any [section]");
        if (!seen.insert(section + "." + key).second)
            fail(line, "duplicate key '" + key + "' in [" + section + "]");
        if (section == "system" && key == "shapes") shapes_line = line;
        if (section == "run" && key == "seeds") seeds_line = line;
        apply_key(cfg, section, key, value, line, seed_seen);
    }

    if (!seed_seen) {
        // recorded immediately: serialized configs always carry their seed
        std::random_device entropy;
        cfg.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    }
    validate(cfg, shapes_line, seeds_line, schedule_line, search_line);
    return cfg;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    const std::string path(trim(assignment.substr(0, eq)));
    const std::string value(trim(assignment.substr(eq + 1)));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    bool seed_seen = false;
    apply_key(config, path.substr(0, dot), path.substr(dot + 1), value, 0, seed_seen);
    validate(config, 0, 0, 0, 0);
}

std::string serialize_config(const ExperimentConfig& c) {
    std::string out;
    const auto list_u64 = [](const std::vector<std::uint64_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + std::to_string(v[i]);
        return s;
    };
    out += "[system]\n";
    out += "dimension = " + std::to_string(c.dimension) + "\n";
    out += "particles = " + list_u64(c.particles) + "\n";
    out += "beta = " + format_double(c.beta) + "\n";
    out += "pressure =";
    for (std::size_t i = 0; i < c.pressures.size(); ++i)
        out += (i ? ", " : " ") + format_double(c.pressures[i]);
    out += "\n";
    if (!c.shapes.empty()) {
        out += "shapes =";
        for (std::size_t i = 0; i < c.shapes.size(); ++i)
            out += (i ? ", " : " ") + c.shapes[i].text;
        out += "\n";
    }
    out += std::string("ideal_gas = ") + (c.ideal_gas ? "true" : "false") + "\n";
    out += "volume_cap = " + format_double(c.volume_cap) + "\n";
    out += "\n[schedule]\n";
    out += "burnin = " + std::to_string(c.schedule.burnin_sweeps) + "\n";
    out += "measurement = " + std::to_string(c.schedule.measurement_sweeps) + "\n";
    out += "thinning = " + std::to_string(c.schedule.thinning) + "\n";
    out += "volume_moves = " + format_double(c.schedule.volume_move_fraction) + "\n";
    out += "blocks = " + std::to_string(c.schedule.blocks) + "\n";
    out += "accept_low = " + format_double(c.schedule.accept_low) + "\n";
    out += "accept_high = " + format_double(c.schedule.accept_high) + "\n";
    out += "tune_interval = " + std::to_string(c.schedule.tune_interval) + "\n";
    out += "\n[run]\n";
    out += "replicas = " + std::to_string(c.replicas) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    if (!c.replica_seeds.empty()) out += "seeds = " + list_u64(c.replica_seeds) + "\n";
    out += "output = " + c.output + "\n";
    out += "jobs = " + std::to_string(c.jobs) + "\n";
    out += "volume_factor = " + format_double(c.volume_factor) + "\n";
    std::string flags;
    if (c.emit.csv) flags += "csv";
    if (c.emit.json) flags += std::string(flags.empty() ? "" : ", ") + "json";
    if (c.emit.svg) flags += std::string(flags.empty() ? "" : ", ") + "svg";
    if (c.emit.snapshots) flags += std::string(flags.empty() ? "" : ", ") + "snapshots";
    out += "emit = " + (flags.empty() ? "none" : flags) + "\n";
    out += "\n[search]\n";
    out += "modes = " + std::to_string(c.search.basis_modes) + "\n";
    out += "resolution = " + std::to_string(c.search.grid_resolution) + "\n";
    out += "step = " + format_double(c.search.step) + "\n";
    out += "budget = " + std::to_string(c.search.budget) + "\n";
    out += "patience = " + std::to_string(c.search.patience) + "\n";
    out += "shrink_after = " + std::to_string(c.search.shrink_after) + "\n";
    out += "shrink = " + format_double(c.search.step_shrink) + "\n";
    out += "crn_replicas = " + std::to_string(c.search.crn_replicas) + "\n";
    out += "\n[compare]\n";
    out += "verdict_z = " + format_double(c.verdict_z) + "\n";
    out += "consistency_z = " + format_double(c.consistency_z) + "\n";
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    // fingerprint of the experiment's identity: where artifacts land and which
    // files get written cannot change any sampled number, so they are pinned
    // before hashing and reruns into another directory keep the hash
    ExperimentConfig c = config;
    c.output = "out";
    c.jobs = 1;
    c.emit = EmitFlags{};
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : serialize_config(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    return buf;
}

std::vector<Shape> resolve_shapes(const ExperimentConfig& config) {
    std::vector<Shape> shapes;
    shapes.reserve(config.shapes.size());
    for (const auto& descriptor : config.shapes)
        shapes.push_back(resolve_shape(descriptor, config.dimension));
    return shapes;
}

EnsembleParams make_params(const ExperimentConfig& config, std::size_t particle_index,
                           std::size_t pressure_index) {
    EnsembleParams p;
    p.dimension = config.dimension;
    p.particles = static_cast<int>(config.particles.at(particle_index));
    p.beta = config.beta;
    p.pressure = config.pressures.at(pressure_index);
    p.ideal_gas = config.ideal_gas;
    p.volume_cap = config.volume_cap;
    return p;
}

EstimateOptions make_estimate_options(const ExperimentConfig& config) {
    EstimateOptions o;
    o.replicas = config.replicas;
    o.seeds = config.replica_seeds.empty() ? derive_seeds(config.seed, 0, config.replicas)
                                           : config.replica_seeds;
    o.consistency_z = config.consistency_z;
    o.volume_factor = config.volume_factor;
    o.jobs = config.jobs;
    return o;
}

CompareOptions make_compare_options(const ExperimentConfig& config) {
    CompareOptions o;
    o.replicas = config.replicas;
    o.base_seed = config.seed;
    o.consistency_z = config.consistency_z;
    o.verdict_z = config.verdict_z;
    o.volume_factor = config.volume_factor;
    o.jobs = config.jobs;
    return o;
}

}  // namespace wulffmc
