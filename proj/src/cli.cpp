#include "wulffmc/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wulffmc/config.hpp"
#include "wulffmc/search.hpp"
#include "wulffmc/serialize.hpp"
#include "wulffmc/svg.hpp"

namespace wulffmc {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "experiment config file");
    cmd->add_option("--set", args.overrides, "override one key, section.key=value")
        ->type_name("KEY=VAL");
    cmd->add_option("-o,--output-dir", args.output_dir, "output directory (beats run.output)");
    cmd->add_option("--seed", args.seed, "base seed (beats run.seed)");
    cmd->add_option("--jobs", args.jobs, "concurrent replica cap (beats run.jobs)");
}

// file keys first, then --set in order, then the dedicated flags
ExperimentConfig load_config(const CommonArgs& args) {
    std::string text;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("cannot read config file '" + args.config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }
    ExperimentConfig cfg = parse_config(text);
    for (const auto& assignment : args.overrides) apply_override(cfg, assignment);
    if (args.seed) apply_override(cfg, "run.seed=" + std::to_string(*args.seed));
    if (args.jobs) apply_override(cfg, "run.jobs=" + std::to_string(*args.jobs));
    if (!args.output_dir.empty()) apply_override(cfg, "run.output=" + args.output_dir);
    return cfg;
}

fs::path resolve_output(const ExperimentConfig& cfg) {
    fs::path p = cfg.output;
    const char* root = std::getenv(kOutputRootEnv);
    if (root && *root && p.is_relative()) p = fs::path(root) / p;
    return p;
}

struct Provenance {
    std::string hash;
    std::vector<std::uint64_t> seeds;
};

std::string seed_list(const std::vector<std::uint64_t>& seeds) {
    std::string s;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        s += (i ? " " : "") + std::to_string(seeds[i]);
    return s;
}

std::string comment_header(const Provenance& prov, const std::string& schema) {
    return "# wulffmc " + std::string(kVersion) + "\n# config " + prov.hash + "\n# seeds " +
           seed_list(prov.seeds) + "\n# schema " + schema + "\n";
}

std::string svg_header(const Provenance& prov) {
    return "<!-- wulffmc " + std::string(kVersion) + " config " + prov.hash + " seeds " +
           seed_list(prov.seeds) + " -->\n";
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json provenance_json(const Provenance& prov) {
    ordered_json j;
    j["version"] = kVersion;
    j["config"] = prov.hash;
    j["seeds"] = prov.seeds;
    j["timestamp"] = iso_now();  // the only volatile line in any artifact
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string slug(const std::string& label) {
    std::string s;
    for (char c : label)
        s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s;
}

ordered_json estimate_json(const EnergyEstimate& e) {
    ordered_json j;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["samples"] = e.samples;
    j["blocks"] = e.blocks;
    return j;
}

ordered_json shape_estimate_json(const ShapeEstimate& est, const std::string& label) {
    ordered_json j;
    j["shape"] = label;
    j["energy"] = estimate_json(est.energy);
    j["potential"] = estimate_json(est.potential);
    j["volume"] = estimate_json(est.volume);
    auto replicas = ordered_json::array();
    for (const auto& r : est.replicas) {
        ordered_json rj;
        rj["seed"] = r.seed;
        rj["energy_mean"] = r.energy_mean;
        rj["energy_se"] = r.energy_se;
        rj["displacement_rate"] = r.disp_rate;
        rj["volume_rate"] = r.vol_rate;
        replicas.push_back(rj);
    }
    j["replicas"] = replicas;
    return j;
}

ordered_json comparison_json(int particles, double pressure,
                             const std::vector<std::string>& labels, const ShapeComparison& cmp) {
    ordered_json t;
    t["particles"] = particles;
    t["pressure"] = pressure;
    auto entries = ordered_json::array();
    for (std::size_t s = 0; s < cmp.entries.size(); ++s)
        entries.push_back(shape_estimate_json(cmp.entries[s], labels[s]));
    t["entries"] = entries;
    auto pairs = ordered_json::array();
    for (const auto& p : cmp.pairs) {
        ordered_json pj;
        pj["first"] = labels[p.first];
        pj["second"] = labels[p.second];
        pj["delta"] = p.delta;
        pj["se"] = p.se;
        pj["verdict"] = verdict_name(p.verdict);
        pairs.push_back(pj);
    }
    t["pairs"] = pairs;
    return t;
}

void append_pairs(std::string& csv, int particles, double pressure,
                  const std::vector<std::string>& labels, const ShapeComparison& cmp) {
    for (const auto& p : cmp.pairs)
        csv += std::to_string(particles) + "," + format_double(pressure) + "," + labels[p.first] +
               "," + labels[p.second] + "," + format_double(p.delta) + "," + format_double(p.se) +
               "," + format_double(cmp.z) + "," + verdict_name(p.verdict) + "\n";
}

void append_estimates(std::string& csv, int particles, double pressure,
                      const std::vector<std::string>& labels, const ShapeComparison& cmp) {
    for (std::size_t s = 0; s < cmp.entries.size(); ++s) {
        const auto& e = cmp.entries[s];
        csv += std::to_string(particles) + "," + format_double(pressure) + "," + labels[s] + "," +
               format_double(e.energy.mean) + "," + format_double(e.energy.std_error) + "," +
               format_double(e.potential.mean) + "," + format_double(e.potential.std_error) +
               "," + format_double(e.volume.mean) + "," + format_double(e.volume.std_error) +
               "," + std::to_string(e.energy.samples) + "," + std::to_string(e.energy.blocks) +
               "\n";
    }
}

void print_verdicts(std::ostream& out, int particles, double pressure,
                    const std::vector<std::string>& labels, const ShapeComparison& cmp) {
    for (const auto& p : cmp.pairs)
        out << "N=" << particles << " P=" << pressure << "  " << labels[p.first] << " vs "
            << labels[p.second] << ": delta = " << p.delta << " +/- " << p.se << "  ["
            << verdict_name(p.verdict) << "]\n";
}

std::vector<std::string> shape_labels(const ExperimentConfig& cfg) {
    std::vector<std::string> labels;
    labels.reserve(cfg.shapes.size());
    for (const auto& d : cfg.shapes) labels.push_back(d.text);
    return labels;
}

// flattened shape-major replica seeds, as compare_shapes derives them
std::vector<std::uint64_t> comparison_seeds(const ExperimentConfig& cfg) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < cfg.shapes.size(); ++s)
        for (auto v : derive_seeds(cfg.seed, s, cfg.replicas)) seeds.push_back(v);
    return seeds;
}

bool is_monotone(const std::vector<int>& signs) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < signs.size(); ++i) {
        up = up && signs[i] >= signs[i - 1];
        down = down && signs[i] <= signs[i - 1];
    }
    return up || down;
}

ordered_json json_num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;  // infeasible candidates score +inf; JSON has no inf
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out) {
    out << "# config " << config_hash_hex(cfg) << "\n" << serialize_config(cfg);
    return 0;
}

int cmd_oracle(bool minimize, double spacing, double lo, double hi, std::size_t points,
               std::ostream& out) {
    if (minimize) {
        const LatticeMinimum m = minimize_lattice_energy(lo, hi, points);
        out << "spacing " << format_double(m.spacing) << "\n"
            << "energy " << format_double(m.energy) << "\n";
    } else {
        out << format_double(lattice_energy_per_particle(spacing)) << "\n";
    }
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.shapes.size() != 1) throw ConfigError("simulate needs exactly one shape");
    if (cfg.particles.size() != 1) throw ConfigError("simulate needs a single particle count");
    if (cfg.pressures.size() != 1) throw ConfigError("simulate needs a single pressure");

    const Shape shape = resolve_shapes(cfg)[0];
    const EnsembleParams params = make_params(cfg, 0, 0);
    const std::uint64_t seed = cfg.replica_seeds.empty() ? cfg.seed : cfg.replica_seeds[0];
    const Provenance prov{config_hash_hex(cfg), {seed}};

    const fs::path dir = resolve_output(cfg);
    fs::create_directories(dir);
    write_file(dir / "config.txt", comment_header(prov, "config-v1") + serialize_config(cfg));

    SimulationState state = initialize_state(shape, params, StepSizes{}, seed, cfg.volume_factor);
    if (cfg.emit.snapshots) {
        fs::create_directories(dir / "snapshots");
        write_file(dir / "snapshots" / "initial.txt",
                   comment_header(prov, "configuration-v1") + configuration_record(state.config));
    }

    const double kinetic = params.kinetic_mean();
    std::string csv;
    RunObserver observer;
    if (cfg.emit.csv) {
        csv = comment_header(prov, "trajectory-v1");
        csv += "sweep,potential,volume,total,disp_rate,vol_rate\n";
        observer = [&csv, kinetic](const SimulationState&, const TrajectorySample& s) {
            csv += std::to_string(s.sweep) + "," + format_double(s.potential) + "," +
                   format_double(s.volume) + "," + format_double(s.potential + kinetic) + "," +
                   format_double(s.disp_rate) + "," + format_double(s.vol_rate) + "\n";
        };
    }

    const RunResult result = run(state, params, cfg.schedule, observer);

    if (cfg.emit.csv) write_file(dir / "trajectory.csv", csv);
    if (cfg.emit.snapshots)
        write_file(dir / "snapshots" / "final.txt",
                   comment_header(prov, "configuration-v1") + configuration_record(state.config));
    if (cfg.emit.svg) {
        write_file(dir / "shape.svg", svg_header(prov) + shape_svg(shape));
        write_file(dir / "snapshot.svg", svg_header(prov) + snapshot_svg(state.config));
    }
    if (cfg.emit.json) {
        ordered_json j;
        j["provenance"] = provenance_json(prov);
        ordered_json pj;
        pj["dimension"] = params.dimension;
        pj["particles"] = params.particles;
        pj["beta"] = params.beta;
        pj["pressure"] = params.pressure;
        pj["ideal_gas"] = params.ideal_gas;
        pj["volume_cap"] = params.volume_cap;
        pj["shape"] = cfg.shapes[0].text;
        j["params"] = pj;
        ordered_json rj;
        rj["potential"] = estimate_json(result.potential);
        rj["volume"] = estimate_json(result.volume);
        rj["total"] = estimate_json(result.total);
        j["results"] = rj;
        ordered_json aj;
        aj["displacement"] = result.counters.displacement_rate();
        aj["volume"] = result.counters.volume_rate();
        j["acceptance"] = aj;
        ordered_json sj;
        sj["displacement"] = result.steps.displacement;
        sj["log_volume"] = result.steps.log_volume;
        j["steps"] = sj;
        write_file(dir / "summary.json", j.dump(2) + "\n");
    }

    out << "simulate: <U> = " << result.potential.mean << " +/- " << result.potential.std_error
        << ", <V> = " << result.volume.mean << " +/- " << result.volume.std_error
        << ", <E> = " << result.total.mean << " +/- " << result.total.std_error << "\n";
    out << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.shapes.size() < 2) throw ConfigError("compare needs at least 2 shapes");
    const std::vector<Shape> shapes = resolve_shapes(cfg);
    const std::vector<std::string> labels = shape_labels(cfg);
    const CompareOptions options = make_compare_options(cfg);
    const Provenance prov{config_hash_hex(cfg), comparison_seeds(cfg)};

    const fs::path dir = resolve_output(cfg);
    fs::create_directories(dir);
    write_file(dir / "config.txt", comment_header(prov, "config-v1") + serialize_config(cfg));
    if (cfg.emit.svg)
        for (std::size_t s = 0; s < shapes.size(); ++s)
            write_file(dir / ("shape_" + slug(labels[s]) + ".svg"),
                       svg_header(prov) + shape_svg(shapes[s]));

    std::string pairs_csv = comment_header(prov, "comparison-v1") +
                            "particles,pressure,first,second,delta,se,z,verdict\n";
    std::string est_csv =
        comment_header(prov, "estimates-v1") +
        "particles,pressure,shape,energy_mean,energy_se,potential_mean,potential_se,"
        "volume_mean,volume_se,samples,blocks\n";
    auto tables = ordered_json::array();

    const auto flush = [&] {
        if (cfg.emit.csv) {
            write_file(dir / "comparison.csv", pairs_csv);
            write_file(dir / "estimates.csv", est_csv);
        }
        if (cfg.emit.json) {
            ordered_json j;
            j["provenance"] = provenance_json(prov);
            j["verdict_z"] = cfg.verdict_z;
            j["tables"] = tables;
            write_file(dir / "comparison.json", j.dump(2) + "\n");
        }
    };

    try {
        for (std::size_t ni = 0; ni < cfg.particles.size(); ++ni)
            for (std::size_t pi = 0; pi < cfg.pressures.size(); ++pi) {
                const EnsembleParams params = make_params(cfg, ni, pi);
                const ShapeComparison cmp =
                    compare_shapes(shapes, params, cfg.schedule, options);
                append_pairs(pairs_csv, params.particles, params.pressure, labels, cmp);
                append_estimates(est_csv, params.particles, params.pressure, labels, cmp);
                tables.push_back(
                    comparison_json(params.particles, params.pressure, labels, cmp));
                print_verdicts(out, params.particles, params.pressure, labels, cmp);
            }
    } catch (const EquilibrationFailure& e) {
        flush();
        err << "error: " << e.what() << "\n";
        err << "partial results flushed to " << dir.string() << "\n";
        return 3;
    }
    flush();
    out << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_scan(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.shapes.size() < 2) throw ConfigError("scan needs at least 2 shapes");
    const std::vector<Shape> shapes = resolve_shapes(cfg);
    const std::vector<std::string> labels = shape_labels(cfg);
    const CompareOptions options = make_compare_options(cfg);
    const Provenance prov{config_hash_hex(cfg), comparison_seeds(cfg)};

    const fs::path dir = resolve_output(cfg);
    fs::create_directories(dir);
    write_file(dir / "config.txt", comment_header(prov, "config-v1") + serialize_config(cfg));
    if (cfg.emit.svg)
        for (std::size_t s = 0; s < shapes.size(); ++s)
            write_file(dir / ("shape_" + slug(labels[s]) + ".svg"),
                       svg_header(prov) + shape_svg(shapes[s]));

    std::string rows_csv = comment_header(prov, "scan-v1") +
                           "particles,pressure,first,second,delta,se,z,verdict\n";
    std::string est_csv =
        comment_header(prov, "estimates-v1") +
        "particles,pressure,shape,energy_mean,energy_se,potential_mean,potential_se,"
        "volume_mean,volume_se,samples,blocks\n";
    auto sections = ordered_json::array();

    int cur_particles = 0;
    auto cur_rows = ordered_json::array();
    std::vector<PressureScanRow> cur;

    const auto close_section = [&](bool complete, const std::vector<TrendRow>& trends) {
        if (cur_rows.empty()) return;
        ordered_json sec;
        sec["particles"] = cur_particles;
        sec["complete"] = complete;
        sec["rows"] = cur_rows;
        auto tj = ordered_json::array();
        for (const auto& t : trends) {
            ordered_json e;
            e["first"] = labels[t.first];
            e["second"] = labels[t.second];
            e["signs"] = t.signs;
            e["monotone"] = is_monotone(t.signs);
            tj.push_back(e);
        }
        sec["trends"] = tj;
        sections.push_back(sec);
        cur_rows = ordered_json::array();
    };

    const auto flush = [&] {
        if (cfg.emit.csv) {
            write_file(dir / "scan.csv", rows_csv);
            write_file(dir / "estimates.csv", est_csv);
        }
        if (cfg.emit.json) {
            ordered_json j;
            j["provenance"] = provenance_json(prov);
            j["verdict_z"] = cfg.verdict_z;
            j["sections"] = sections;
            write_file(dir / "scan.json", j.dump(2) + "\n");
        }
    };

    const auto curve_svg = [&](int particles, const PressureScan& scan) {
        write_file(dir / ("delta_vs_pressure_N" + std::to_string(particles) + ".svg"),
                   svg_header(prov) + scan_svg(scan, labels));
    };

    try {
        for (std::size_t ni = 0; ni < cfg.particles.size(); ++ni) {
            const EnsembleParams params = make_params(cfg, ni, 0);
            cur_particles = params.particles;
            cur.clear();
            const ScanRowObserver on_row = [&](const PressureScanRow& row) {
                cur.push_back(row);
                append_pairs(rows_csv, cur_particles, row.pressure, labels, row.comparison);
                append_estimates(est_csv, cur_particles, row.pressure, labels, row.comparison);
                cur_rows.push_back(
                    comparison_json(cur_particles, row.pressure, labels, row.comparison));
                print_verdicts(out, cur_particles, row.pressure, labels, row.comparison);
            };
            const PressureScan scan =
                pressure_scan(shapes, params, cfg.pressures, cfg.schedule, options, on_row);
            close_section(true, scan.trends);
            if (cfg.emit.svg) curve_svg(cur_particles, scan);
        }
    } catch (const EquilibrationFailure& e) {
        const bool had_rows = !cur.empty();
        close_section(false, {});
        if (cfg.emit.svg && had_rows) {
            PressureScan partial;
            partial.rows = cur;
            curve_svg(cur_particles, partial);
        }
        flush();
        err << "error: " << e.what() << "\n";
        err << "partial results flushed to " << dir.string() << "\n";
        return 3;
    }
    flush();
    out << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_search(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.particles.size() != 1) throw ConfigError("search needs a single particle count");
    if (cfg.pressures.size() != 1) throw ConfigError("search needs a single pressure");
    if (cfg.shapes.size() > 1)
        throw ConfigError("search starts from at most one shape (got " +
                          std::to_string(cfg.shapes.size()) + ")");

    const Shape start =
        cfg.shapes.empty() ? Shape::ball(cfg.dimension) : resolve_shapes(cfg)[0];
    const EnsembleParams params = make_params(cfg, 0, 0);
    const Provenance prov{config_hash_hex(cfg), {cfg.seed}};

    const fs::path dir = resolve_output(cfg);
    fs::create_directories(dir);
    write_file(dir / "config.txt", comment_header(prov, "config-v1") + serialize_config(cfg));

    const ShapeSearchState result = local_shape_search(start, params, cfg.schedule, cfg.search);

    write_file(dir / "best_shape.txt",
               comment_header(prov, "shape-v1") + shape_record(result.shape));
    if (cfg.emit.csv) {
        std::string csv = comment_header(prov, "search-v1") + "index,accepted,objective,step\n";
        for (const auto& it : result.trace)
            csv += std::to_string(it.index) + "," + (it.accepted ? std::string("1") : "0") +
                   "," + format_double(it.objective) + "," + format_double(it.step) + "\n";
        write_file(dir / "search.csv", csv);
    }
    if (cfg.emit.json) {
        ordered_json j;
        j["provenance"] = provenance_json(prov);
        j["start"] = cfg.shapes.empty() ? "ball" : cfg.shapes[0].text;
        j["objective"] = estimate_json(result.objective);
        j["coefficients"] = result.coefficients;
        j["budget_exhausted"] = result.budget_exhausted;
        auto trace = ordered_json::array();
        for (const auto& it : result.trace) {
            ordered_json tj;
            tj["index"] = it.index;
            tj["accepted"] = it.accepted;
            tj["objective"] = json_num(it.objective);
            tj["step"] = it.step;
            trace.push_back(tj);
        }
        j["trace"] = trace;
        j["shape_record"] = shape_record(result.shape);
        write_file(dir / "search.json", j.dump(2) + "\n");
    }
    if (cfg.emit.svg)
        write_file(dir / "best_shape.svg", svg_header(prov) + shape_svg(result.shape));

    out << "search: best <E> = " << result.objective.mean << " +/- "
        << result.objective.std_error << " after " << result.trace.size() << " proposals"
        << (result.budget_exhausted ? " (budget exhausted)" : "") << "\n";
    out << "artifacts in " << dir.string() << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"NPT Monte Carlo: which container shape minimizes the mean energy"};
    app.name(args.empty() ? "wulffmc" : args[0]);
    bool version = false;
    app.add_flag("--version", version, "print the version and exit");

    CommonArgs sim_args, cmp_args, scan_args, search_args, validate_args;
    CLI::App* sim =
        app.add_subcommand("simulate", "one chain at one (shape, N, beta, P); trajectory + summary");
    add_common(sim, sim_args);
    CLI::App* cmp =
        app.add_subcommand("compare", "pooled estimates and pairwise verdicts for 2+ shapes");
    add_common(cmp, cmp_args);
    CLI::App* scan =
        app.add_subcommand("scan", "compare across the pressure list with warm-started chains");
    add_common(scan, scan_args);
    CLI::App* search =
        app.add_subcommand("search", "local descent over radial container profiles");
    add_common(search, search_args);
    CLI::App* validate =
        app.add_subcommand("validate-config", "parse and echo the canonical config");
    add_common(validate, validate_args);

    bool minimize = false;
    double spacing = 0.0, lo = 1.0, hi = 3.0;
    std::size_t points = 2001;
    CLI::App* oracle =
        app.add_subcommand("oracle", "exact triangular-lattice energy per particle");
    CLI::Option* spacing_opt =
        oracle->add_option("--spacing", spacing, "lattice spacing, at least 1");
    oracle->add_flag("--minimize", minimize, "grid argmin of the energy over [lo, hi]");
    oracle->add_option("--lo", lo, "minimize: lower bound")->needs("--minimize");
    oracle->add_option("--hi", hi, "minimize: upper bound")->needs("--minimize");
    oracle->add_option("--points", points, "minimize: grid points")->needs("--minimize");

    app.require_subcommand(0, 1);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (version) {
            out << "wulffmc " << kVersion << "\n";
            return 0;
        }
        if (*sim) return cmd_simulate(load_config(sim_args), out);
        if (*cmp) return cmd_compare(load_config(cmp_args), out, err);
        if (*scan) return cmd_scan(load_config(scan_args), out, err);
        if (*search) return cmd_search(load_config(search_args), out);
        if (*validate) return cmd_validate(load_config(validate_args), out);
        if (*oracle) {
            if (!minimize && spacing_opt->count() == 0)
                throw ConfigError("oracle needs --spacing or --minimize");
            return cmd_oracle(minimize, spacing, lo, hi, points, out);
        }
        out << app.help();
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const RecordError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const EquilibrationFailure& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace wulffmc
