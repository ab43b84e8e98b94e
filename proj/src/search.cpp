#include "wulffmc/search.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace wulffmc {

namespace {

// run fn(0..count-1) in waves of at most `jobs` threads; exceptions rethrow
// in index order so failures are deterministic
void run_indexed(std::size_t count, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    for (std::size_t base = 0; base < count; base += jobs) {
        const std::size_t end = std::min(base + jobs, count);
        std::vector<std::thread> pool;
        pool.reserve(end - base);
        for (std::size_t i = base; i < end; ++i)
            pool.emplace_back([&, i] {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

EnergyEstimate pool_estimates(std::string name, const std::vector<EnergyEstimate>& parts) {
    EnergyEstimate out;
    out.observable = std::move(name);
    double var = 0.0;
    for (const auto& p : parts) {
        out.mean += p.mean;
        var += p.std_error * p.std_error;
        out.samples += p.samples;
        out.blocks += p.blocks;
    }
    const double r = static_cast<double>(parts.size());
    out.mean /= r;
    out.std_error = std::sqrt(var) / r;
    return out;
}

void check_replica_consistency(const std::vector<ReplicaSummary>& reps, double z) {
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            const double gap = std::abs(reps[a].energy_mean - reps[b].energy_mean);
            const double se = std::hypot(reps[a].energy_se, reps[b].energy_se);
            if (gap > z * se) {
                std::ostringstream msg;
                msg << "replica disagreement: |" << reps[a].energy_mean << " - "
                    << reps[b].energy_mean << "| = " << gap << " exceeds " << z << " x " << se
                    << " combined standard errors; chains have not equilibrated.";
                msg << " replicas:";
                for (const auto& r : reps)
                    msg << " (seed " << r.seed << ": " << r.energy_mean << " +- " << r.energy_se
                        << ", acc " << r.disp_rate << "/" << r.vol_rate << ")";
                throw EquilibrationFailure(msg.str());
            }
        }
}

ShapeEstimate pooled_from_runs(const Shape& shape, const std::vector<RunResult>& runs,
                               const std::vector<std::uint64_t>& seeds, double consistency_z) {
    ShapeEstimate est{shape, {}, {}, {}, {}};
    std::vector<EnergyEstimate> e, u, v;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        e.push_back(runs[i].total);
        u.push_back(runs[i].potential);
        v.push_back(runs[i].volume);
        est.replicas.push_back({seeds[i], runs[i].total.mean, runs[i].total.std_error,
                                runs[i].counters.displacement_rate(),
                                runs[i].counters.volume_rate()});
    }
    check_replica_consistency(est.replicas, consistency_z);
    est.energy = pool_estimates("total_energy", e);
    est.potential = pool_estimates("potential_energy", u);
    est.volume = pool_estimates("volume", v);
    return est;
}

}  // namespace

void EstimateOptions::validate() const {
    if (replicas < 1) throw std::invalid_argument("estimate needs at least one replica");
    if (seeds.size() != replicas)
        throw std::invalid_argument("seed list must have one seed per replica");
    if (!(consistency_z > 0)) throw std::invalid_argument("consistency threshold must be positive");
    if (!(volume_factor > 0)) throw std::invalid_argument("volume factor must be positive");
    if (jobs < 1) throw std::invalid_argument("job limit must be at least 1");
}

ShapeEstimate estimate_shape(const Shape& shape, const EnsembleParams& params,
                             const RunSchedule& schedule, const EstimateOptions& options) {
    options.validate();
    params.validate();
    schedule.validate();
    std::vector<RunResult> runs(options.replicas);
    run_indexed(options.replicas, options.jobs, [&](std::size_t i) {
        SimulationState state =
            initialize_state(shape, params, StepSizes{}, options.seeds[i], options.volume_factor);
        runs[i] = run(state, params, schedule);
    });
    return pooled_from_runs(shape, runs, options.seeds, options.consistency_z);
}

EnergyEstimate estimate_mean_energy(const Shape& shape, const EnsembleParams& params,
                                    const RunSchedule& schedule, const EstimateOptions& options) {
    return estimate_shape(shape, params, schedule, options).energy;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Lower: return "LOWER";
        case Verdict::Higher: return "HIGHER";
        case Verdict::Indistinguishable: return "INDISTINGUISHABLE";
    }
    return "?";
}

namespace {

Verdict judge(double delta, double se, double z) {
    if (delta == 0.0 || std::abs(delta) < z * se) return Verdict::Indistinguishable;
    return delta < 0.0 ? Verdict::Lower : Verdict::Higher;
}

std::vector<PairVerdict> all_pairs(const std::vector<ShapeEstimate>& entries, double z) {
    std::vector<PairVerdict> pairs;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            PairVerdict p;
            p.first = i;
            p.second = j;
            p.delta = entries[i].energy.mean - entries[j].energy.mean;
            p.se = std::hypot(entries[i].energy.std_error, entries[j].energy.std_error);
            p.verdict = judge(p.delta, p.se, z);
            pairs.push_back(p);
        }
    return pairs;
}

}  // namespace

ShapeComparison compare_shapes(const std::vector<Shape>& shapes, const EnsembleParams& params,
                               const RunSchedule& schedule, const CompareOptions& options) {
    if (shapes.size() < 2)
        throw std::invalid_argument("shape comparison needs at least two shapes");
    params.validate();
    schedule.validate();
    ShapeComparison cmp;
    cmp.z = options.verdict_z;
    // every (shape, replica) chain gets an independent derived seed
    std::vector<std::vector<RunResult>> runs(shapes.size());
    std::vector<std::vector<std::uint64_t>> seeds(shapes.size());
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        runs[s].resize(options.replicas);
        seeds[s] = derive_seeds(options.base_seed, s, options.replicas);
    }
    run_indexed(shapes.size() * options.replicas, options.jobs, [&](std::size_t unit) {
        const std::size_t s = unit / options.replicas;
        const std::size_t r = unit % options.replicas;
        SimulationState state =
            initialize_state(shapes[s], params, StepSizes{}, seeds[s][r], options.volume_factor);
        runs[s][r] = run(state, params, schedule);
    });
    cmp.entries.reserve(shapes.size());
    for (std::size_t s = 0; s < shapes.size(); ++s)
        cmp.entries.push_back(
            pooled_from_runs(shapes[s], runs[s], seeds[s], options.consistency_z));
    cmp.pairs = all_pairs(cmp.entries, cmp.z);
    return cmp;
}

PressureScan pressure_scan(const std::vector<Shape>& shapes, const EnsembleParams& params,
                           const std::vector<double>& pressures, const RunSchedule& schedule,
                           const CompareOptions& options, const ScanRowObserver& on_row) {
    if (shapes.size() < 2)
        throw std::invalid_argument("pressure scan needs at least two shapes");
    if (pressures.empty()) throw std::invalid_argument("pressure scan needs at least one pressure");
    for (std::size_t i = 1; i < pressures.size(); ++i)
        if (pressures[i] < pressures[i - 1])
            throw std::invalid_argument("pressure list must be sorted ascending");
    schedule.validate();

    const std::size_t units = shapes.size() * options.replicas;
    std::vector<std::vector<std::uint64_t>> seeds(shapes.size());
    for (std::size_t s = 0; s < shapes.size(); ++s)
        seeds[s] = derive_seeds(options.base_seed, s, options.replicas);

    // chains persist across pressures: each run's final state seeds the next
    std::vector<std::optional<SimulationState>> states(units);
    PressureScan scan;
    for (double pressure : pressures) {
        EnsembleParams p = params;
        p.pressure = pressure;
        p.validate();
        std::vector<std::vector<RunResult>> runs(shapes.size());
        for (auto& r : runs) r.resize(options.replicas);
        run_indexed(units, options.jobs, [&](std::size_t unit) {
            const std::size_t s = unit / options.replicas;
            const std::size_t r = unit % options.replicas;
            if (!states[unit])
                states[unit] = initialize_state(shapes[s], p, StepSizes{}, seeds[s][r],
                                                options.volume_factor);
            runs[s][r] = run(*states[unit], p, schedule);
        });
        PressureScanRow row;
        row.pressure = pressure;
        row.comparison.z = options.verdict_z;
        for (std::size_t s = 0; s < shapes.size(); ++s)
            row.comparison.entries.push_back(
                pooled_from_runs(shapes[s], runs[s], seeds[s], options.consistency_z));
        row.comparison.pairs = all_pairs(row.comparison.entries, options.verdict_z);
        scan.rows.push_back(std::move(row));
        if (on_row) on_row(scan.rows.back());
    }

    for (std::size_t i = 0; i < shapes.size(); ++i)
        for (std::size_t j = i + 1; j < shapes.size(); ++j) {
            TrendRow trend;
            trend.first = i;
            trend.second = j;
            for (const auto& row : scan.rows)
                for (const auto& pair : row.comparison.pairs)
                    if (pair.first == i && pair.second == j)
                        trend.signs.push_back(pair.verdict == Verdict::Indistinguishable ? 0
                                              : pair.verdict == Verdict::Lower          ? -1
                                                                                        : 1);
            scan.trends.push_back(std::move(trend));
        }
    return scan;
}

// ---- local search over radial-function shapes ----

void SearchConfig::validate() const {
    if (basis_modes < 1 || basis_modes > 8)
        throw std::invalid_argument("basis mode count must be in [1, 8]");
    if (grid_resolution < 32 || grid_resolution % 8 != 0)
        throw std::invalid_argument("grid resolution must be a multiple of 8, at least 32");
    if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
    if (patience < 1) throw std::invalid_argument("patience must be at least 1");
    if (shrink_after < 1) throw std::invalid_argument("shrink interval must be at least 1");
    if (!(step_shrink > 0 && step_shrink < 1))
        throw std::invalid_argument("step shrink factor must lie in (0, 1)");
    if (crn_replicas < 1) throw std::invalid_argument("need at least one scoring replica");
}

namespace {

constexpr double kFloorMargin = kRadialFloor + 1e-3;

// 5 traceless quadratics on the sphere (the linear modes are translations,
// excluded like m = 1 in d=2)
double quadratic_mode(int k, const Vec& w) {
    switch (k) {
        case 0: return w.x * w.x - w.y * w.y;
        case 1: return 3.0 * w.z * w.z - 1.0;
        case 2: return w.x * w.y;
        case 3: return w.x * w.z;
        case 4: return w.y * w.z;
    }
    return 0.0;
}

struct SearchBasis {
    int dim;
    int modes;       // d=2 Fourier mode count; d=3 fixed 5 quadratics
    int m2;          // d=2 grid angles
    int np, na;      // d=3 grid
    std::vector<double> polar_nodes, polar_weights;
    std::vector<Vec> directions;  // grid directions in order

    explicit SearchBasis(int dimension, const SearchConfig& cfg)
        : dim(dimension), modes(cfg.basis_modes), m2(cfg.grid_resolution),
          np(cfg.grid_resolution / 8), na(cfg.grid_resolution / 4) {
        if (dim == 2) {
            for (int i = 0; i < m2; ++i) {
                const double th = 2.0 * M_PI * i / m2;
                directions.push_back({std::cos(th), std::sin(th), 0.0});
            }
        } else {
            gauss_legendre(np, polar_nodes, polar_weights);
            for (int i = 0; i < np; ++i)
                for (int j = 0; j < na; ++j) {
                    const double u = polar_nodes[static_cast<std::size_t>(i)];
                    const double phi = 2.0 * M_PI * j / na;
                    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
                    directions.push_back({s * std::cos(phi), s * std::sin(phi), u});
                }
        }
    }

    std::size_t coefficient_count() const {
        return dim == 2 ? 2 * static_cast<std::size_t>(modes) : 5;
    }

    // 1 + sum of basis terms at grid direction index g
    double raw_value(const std::vector<double>& c, std::size_t g) const {
        double v = 1.0;
        if (dim == 2) {
            const double th = 2.0 * M_PI * static_cast<double>(g) / m2;
            for (int k = 0; k < modes; ++k) {
                const double m = static_cast<double>(k + 2);  // modes 2 .. modes+1
                v += c[static_cast<std::size_t>(2 * k)] * std::cos(m * th) +
                     c[static_cast<std::size_t>(2 * k + 1)] * std::sin(m * th);
            }
        } else {
            for (int k = 0; k < 5; ++k)
                v += c[static_cast<std::size_t>(k)] * quadratic_mode(k, directions[g]);
        }
        return v;
    }

    double grid_volume(const std::vector<double>& values) const {
        return dim == 2 ? radial_grid_area(values) : radial_grid_volume3(np, na, values);
    }

    Shape build(std::vector<double> values) const {
        return dim == 2 ? Shape::radial_grid(std::move(values))
                        : Shape::radial_grid3(np, na, std::move(values));
    }

    // coefficients of `shape` sampled onto the grid: discrete Fourier
    // projection (d=2) or a Gram solve over the quadratics (d=3)
    std::vector<double> project_coefficients(const Shape& shape) const {
        std::vector<double> r(directions.size());
        for (std::size_t g = 0; g < directions.size(); ++g)
            r[g] = shape.radius(Direction(directions[g]));
        std::vector<double> c(coefficient_count(), 0.0);
        if (dim == 2) {
            double mean = 0.0;
            for (double v : r) mean += v;
            mean /= static_cast<double>(m2);
            for (int k = 0; k < modes; ++k) {
                const double m = static_cast<double>(k + 2);
                double cc = 0.0, cs = 0.0;
                for (int g = 0; g < m2; ++g) {
                    const double th = 2.0 * M_PI * g / m2;
                    const double f = r[static_cast<std::size_t>(g)] / mean - 1.0;
                    cc += f * std::cos(m * th);
                    cs += f * std::sin(m * th);
                }
                c[static_cast<std::size_t>(2 * k)] = 2.0 * cc / m2;
                c[static_cast<std::size_t>(2 * k + 1)] = 2.0 * cs / m2;
            }
            return c;
        }
        // quadrature inner products; solve the 5x5 Gram system
        const double dphi = 2.0 * M_PI / na;
        double mean = 0.0, total = 0.0;
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < na; ++j) {
                const double w = polar_weights[static_cast<std::size_t>(i)] * dphi;
                mean += w * r[static_cast<std::size_t>(i * na + j)];
                total += w;
            }
        mean /= total;
        double gram[5][5] = {};
        double rhs[5] = {};
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < na; ++j) {
                const std::size_t g = static_cast<std::size_t>(i * na + j);
                const double w = polar_weights[static_cast<std::size_t>(i)] * dphi;
                const double f = r[g] / mean - 1.0;
                for (int a = 0; a < 5; ++a) {
                    const double qa = quadratic_mode(a, directions[g]);
                    rhs[a] += w * f * qa;
                    for (int b = 0; b < 5; ++b) gram[a][b] += w * qa * quadratic_mode(b, directions[g]);
                }
            }
        // Gaussian elimination with partial pivoting
        for (int col = 0; col < 5; ++col) {
            int piv = col;
            for (int row = col + 1; row < 5; ++row)
                if (std::abs(gram[row][col]) > std::abs(gram[piv][col])) piv = row;
            std::swap(gram[col], gram[piv]);
            std::swap(rhs[col], rhs[piv]);
            for (int row = col + 1; row < 5; ++row) {
                const double f = gram[row][col] / gram[col][col];
                for (int k = col; k < 5; ++k) gram[row][k] -= f * gram[col][k];
                rhs[row] -= f * rhs[col];
            }
        }
        for (int row = 4; row >= 0; --row) {
            double s = rhs[row];
            for (int k = row + 1; k < 5; ++k) s -= gram[row][k] * c[static_cast<std::size_t>(k)];
            c[static_cast<std::size_t>(row)] = s / gram[row][row];
        }
        return c;
    }

    // scale the raw profile, clamp to the floor, and bisect the scale until
    // the clamped volume is the reference volume; nullopt when no scale works
    std::optional<Shape> project(const std::vector<double>& c) const {
        std::vector<double> raw(directions.size());
        double raw_max = -1e300;
        for (std::size_t g = 0; g < raw.size(); ++g) {
            raw[g] = raw_value(c, g);
            if (!std::isfinite(raw[g])) return std::nullopt;
            raw_max = std::max(raw_max, raw[g]);
        }
        if (raw_max <= 0.0) return std::nullopt;  // scaling cannot create volume
        const auto clamped_volume = [&](double s) {
            std::vector<double> v(raw.size());
            for (std::size_t g = 0; g < raw.size(); ++g)
                v[g] = std::max(s * raw[g], kFloorMargin);
            return grid_volume(v);
        };
        double lo = 1e-6, hi = 1e-6;
        if (clamped_volume(lo) > kReferenceVolume) return std::nullopt;  // floor alone overshoots
        int expand = 0;
        while (clamped_volume(hi) < kReferenceVolume) {
            hi *= 2.0;
            if (++expand > 120) return std::nullopt;
        }
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (clamped_volume(mid) < kReferenceVolume ? lo : hi) = mid;
        }
        std::vector<double> v(raw.size());
        const double s = 0.5 * (lo + hi);
        for (std::size_t g = 0; g < raw.size(); ++g) v[g] = std::max(s * raw[g], kFloorMargin);
        try {
            return build(std::move(v));
        } catch (const ShapeError&) {
            return std::nullopt;  // factory floor recheck tripped after recentering
        }
    }
};

}  // namespace

ShapeSearchState local_shape_search(const Shape& start, const EnsembleParams& params,
                                    const RunSchedule& schedule, const SearchConfig& config) {
    config.validate();
    params.validate();
    schedule.validate();
    if (start.dim() != params.dimension)
        throw std::invalid_argument("start shape dimension does not match the ensemble");

    const SearchBasis basis(params.dimension, config);
    const Shape canonical_start = canonicalize(start);
    std::vector<double> coeffs = basis.project_coefficients(canonical_start);
    auto projected = basis.project(coeffs);
    if (!projected)
        throw std::invalid_argument("start shape is not representable in the search basis");

    const std::vector<std::uint64_t> crn_seeds =
        derive_seeds(config.base_seed, 0x5EEDu, config.crn_replicas);
    EstimateOptions score;
    score.replicas = config.crn_replicas;
    score.seeds = crn_seeds;
    score.volume_factor = config.volume_factor;
    const auto objective = [&](const Shape& s) {
        return estimate_mean_energy(s, params, schedule, score);
    };

    ShapeSearchState result{*projected, std::move(coeffs), objective(*projected), {}, false};

    Rng proposal_rng(derive_seed(config.base_seed, 0xA11CEu, 0));
    double step = config.step;
    std::uint64_t rejection_streak = 0;
    bool converged = false;
    std::uint64_t evals = 0;
    for (; evals < config.budget; ++evals) {
        std::vector<double> cand = result.coefficients;
        for (double& c : cand) c += step * proposal_rng.normal();
        SearchIteration it;
        it.index = evals;
        it.step = step;
        const auto cand_shape = basis.project(cand);
        if (!cand_shape) {
            it.objective = std::numeric_limits<double>::infinity();
            step *= config.step_shrink;  // infeasible projection: shrink and retry
        } else {
            const EnergyEstimate cand_obj = objective(*cand_shape);
            it.objective = cand_obj.mean;
            if (cand_obj.mean < result.objective.mean) {
                it.accepted = true;
                result.shape = *cand_shape;
                result.coefficients = std::move(cand);
                result.objective = cand_obj;
                rejection_streak = 0;
            }
        }
        if (!it.accepted) {
            ++rejection_streak;
            if (rejection_streak % config.shrink_after == 0) step *= config.step_shrink;
        }
        result.trace.push_back(it);
        if (rejection_streak >= config.patience) {
            converged = true;
            ++evals;
            break;
        }
    }
    result.budget_exhausted = !converged && evals == config.budget;
    return result;
}

double lattice_energy_per_particle(double spacing) {
    if (std::isnan(spacing) || spacing < 1.0)
        throw std::invalid_argument("lattice spacing below the hard-core diameter");
    // sites beyond index 4 sit past the cutoff for any spacing >= 1
    double sum = 0.0;
    const double h = spacing * std::sqrt(3.0) / 2.0;
    for (int m = -4; m <= 4; ++m)
        for (int n = -4; n <= 4; ++n) {
            if (m == 0 && n == 0) continue;
            const double x = spacing * (m + 0.5 * n);
            const double y = h * n;
            sum += pair_energy(std::hypot(x, y)).value();
        }
    return 0.5 * sum;
}

LatticeMinimum minimize_lattice_energy(double lo, double hi, std::size_t grid_points) {
    if (!(1.0 <= lo && lo < hi)) throw std::invalid_argument("need 1 <= lo < hi");
    if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");
    LatticeMinimum best{lo, lattice_energy_per_particle(lo)};
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double a =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        const double e = lattice_energy_per_particle(a);
        if (e < best.energy) best = {a, e};
    }
    return best;
}

}  // namespace wulffmc
