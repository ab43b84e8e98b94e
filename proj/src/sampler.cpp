#include "wulffmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wulffmc {

namespace {

double unit_ball_volume(int dim) { return dim == 2 ? M_PI : 4.0 * M_PI / 3.0; }

void scan_invariants(const SimulationState& state, const EnsembleParams& params) {
    if (!state.config.all_inside(1e-9))
        throw std::runtime_error("invariant violation: particle escaped the container");
    if (!params.ideal_gas && !state.config.total_energy().has_value())
        throw std::runtime_error("invariant violation: hard-core overlap in the chain state");
}

}  // namespace

void EnsembleParams::validate() const {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("dimension must be 2 or 3");
    if (particles < 1) throw std::invalid_argument("particle count must be at least 1");
    if (!(beta > 0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive and finite");
    if (!(pressure >= 0) || !std::isfinite(pressure))
        throw std::invalid_argument("pressure must be nonnegative and finite");
    if (volume_cap < 0 || !std::isfinite(volume_cap))
        throw std::invalid_argument("volume cap must be nonnegative and finite");
    if (pressure == 0.0 && volume_cap == 0.0)
        throw std::invalid_argument(
            "P = 0 makes the volume integral diverge; set a volume cap for such diagnostics");
}

double EnsembleParams::kinetic_mean() const {
    return static_cast<double>(dimension) * static_cast<double>(particles) / (2.0 * beta);
}

void RunSchedule::validate() const {
    if (blocks < 8) throw std::invalid_argument("block count must be at least 8");
    if (thinning < 1) throw std::invalid_argument("thinning interval must be at least 1");
    if (measurement_sweeps / thinning < blocks)
        throw std::invalid_argument("too few measurement samples for the block count");
    if (!(volume_move_fraction >= 0) || !std::isfinite(volume_move_fraction))
        throw std::invalid_argument("volume move fraction must be nonnegative");
    if (!(0.0 < accept_low && accept_low < accept_high && accept_high < 1.0))
        throw std::invalid_argument("acceptance window must satisfy 0 < low < high < 1");
    if (tune_interval < 1) throw std::invalid_argument("tuning interval must be at least 1");
}

SimulationState initialize_state(const Shape& shape, const EnsembleParams& params,
                                 const StepSizes& steps, std::uint64_t seed, double volume_factor,
                                 std::uint64_t retry_budget) {
    params.validate();
    if (shape.dim() != params.dimension)
        throw std::invalid_argument("shape dimension does not match the ensemble dimension");
    if (!(volume_factor > 0) || !std::isfinite(volume_factor))
        throw std::invalid_argument("volume factor must be positive");

    // volume_factor hard-core-ball volumes per particle (diameter 1 => radius 1/2)
    double v0 = volume_factor * static_cast<double>(params.particles) *
                unit_ball_volume(params.dimension) *
                std::pow(0.5, static_cast<double>(params.dimension));
    v0 = std::max(v0, kReferenceVolume);  // never start below the reference volume
    if (params.volume_cap > 0) v0 = std::min(v0, params.volume_cap);

    Rng rng(seed);
    const ScaledContainer container(shape, v0);
    std::vector<Vec> xs;
    xs.reserve(static_cast<std::size_t>(params.particles));
    std::uint64_t rejections = 0;
    while (xs.size() < static_cast<std::size_t>(params.particles)) {
        const Vec p = sample_uniform_point(container, rng);
        bool clear = true;
        if (!params.ideal_gas) {
            for (const Vec& q : xs)
                if (distance2(p, q) < kHardCoreDiameter * kHardCoreDiameter) {
                    clear = false;
                    break;
                }
        }
        if (!clear) {
            if (++rejections > retry_budget)
                throw std::runtime_error(
                    "sequential insertion exhausted its retry budget at volume factor " +
                    std::to_string(volume_factor) + "; rerun with a larger factor (e.g. " +
                    std::to_string(2.0 * volume_factor) + ")");
            continue;
        }
        xs.push_back(p);
    }
    SimulationState state{ParticleConfiguration(container, std::move(xs), !params.ideal_gas), 0.0,
                          std::move(rng), steps, MoveCounters{}};
    state.energy = recompute_energy(state, params).value();
    return state;
}

bool metropolis_accept(double log_ratio, Rng& rng) {
    if (log_ratio >= 0.0) return true;
    return rng.uniform() < std::exp(log_ratio);
}

std::optional<double> recompute_energy(const SimulationState& state,
                                       const EnsembleParams& params) {
    if (params.ideal_gas) return 0.0;
    return state.config.total_energy();
}

bool displacement_move(SimulationState& state, const EnsembleParams& params) {
    ++state.counters.disp_proposed;
    auto& rng = state.rng;
    const std::size_t i = static_cast<std::size_t>(rng.uniform_index(state.config.size()));
    const double a = state.steps.displacement;
    Vec p = state.config.positions()[i];
    p.x += rng.uniform(-a, a);
    p.y += rng.uniform(-a, a);
    if (params.dimension == 3) p.z += rng.uniform(-a, a);
    if (!state.config.container().contains(p)) return false;

    double du = 0.0;
    if (!params.ideal_gas) {
        const auto d = state.config.delta_energy_move(i, p);
        if (!d) return false;  // hard-core overlap
        du = *d;
    }
    if (!metropolis_accept(-params.beta * du, rng)) return false;
    state.config.set_position(i, p);
    state.energy += du;
    ++state.counters.disp_accepted;
    return true;
}

bool volume_move(SimulationState& state, const EnsembleParams& params) {
    ++state.counters.vol_proposed;
    auto& rng = state.rng;
    const double delta = rng.uniform(-state.steps.log_volume, state.steps.log_volume);
    const double v = state.volume();
    const double v_new = v * std::exp(delta);
    if (params.volume_cap > 0 && v_new > params.volume_cap) return false;

    const double factor = std::exp(delta / static_cast<double>(params.dimension));
    double u_new = 0.0;
    if (!params.ideal_gas) {
        const auto u = state.config.scaled_total_energy(factor);
        if (!u) return false;  // compression created an overlap
        u_new = *u;
    }
    const double log_ratio = -params.beta * (u_new - state.energy) -
                             params.beta * params.pressure * (v_new - v) +
                             (static_cast<double>(params.particles) + 1.0) * delta;
    if (!metropolis_accept(log_ratio, rng)) return false;
    state.config.adopt(state.config.container().with_volume(v_new), factor);
    state.energy = u_new;
    ++state.counters.vol_accepted;
    return true;
}

RunResult run(SimulationState& state, const EnsembleParams& params, const RunSchedule& schedule,
              const RunObserver& observer) {
    params.validate();
    schedule.validate();
    if (state.config.size() != static_cast<std::size_t>(params.particles))
        throw std::invalid_argument("state particle count does not match the ensemble");
    if (state.config.container().dim() != params.dimension)
        throw std::invalid_argument("state dimension does not match the ensemble");

    double vol_acc = 0.0;
    const auto sweep_once = [&] {
        for (int k = 0; k < params.particles; ++k) displacement_move(state, params);
        vol_acc += schedule.volume_move_fraction;
        while (vol_acc >= 1.0) {
            volume_move(state, params);
            vol_acc -= 1.0;
        }
    };

    // burn-in with step tuning toward the acceptance window
    MoveCounters window;
    for (std::uint64_t sweep = 0; sweep < schedule.burnin_sweeps; ++sweep) {
        sweep_once();
        if ((sweep + 1) % schedule.tune_interval == 0) {
            const MoveCounters& c = state.counters;
            const auto tune = [&](double rate, std::uint64_t proposed, double& step, double cap) {
                if (proposed == 0) return;
                if (rate < schedule.accept_low)
                    step = std::max(step / 1.25, 1e-6);
                else if (rate > schedule.accept_high)
                    step = std::min(step * 1.25, cap);
            };
            const std::uint64_t dp = c.disp_proposed - window.disp_proposed;
            const std::uint64_t da = c.disp_accepted - window.disp_accepted;
            const std::uint64_t vp = c.vol_proposed - window.vol_proposed;
            const std::uint64_t va = c.vol_accepted - window.vol_accepted;
            tune(dp ? static_cast<double>(da) / static_cast<double>(dp) : 0.0, dp,
                 state.steps.displacement, 1e3);
            tune(vp ? static_cast<double>(va) / static_cast<double>(vp) : 0.0, vp,
                 state.steps.log_volume, 5.0);
            window = c;
        }
        if ((sweep + 1) % 10000 == 0) scan_invariants(state, params);
    }

    // measurement with frozen steps and fresh counters
    state.counters = MoveCounters{};
    RunResult result;
    result.steps = state.steps;
    const std::size_t expected = schedule.measurement_sweeps / schedule.thinning;
    result.u_samples.reserve(expected);
    result.v_samples.reserve(expected);
    for (std::uint64_t sweep = 0; sweep < schedule.measurement_sweeps; ++sweep) {
        sweep_once();
        if ((sweep + 1) % 10000 == 0) scan_invariants(state, params);
        if ((sweep + 1) % schedule.thinning == 0) {
            result.u_samples.push_back(state.energy);
            result.v_samples.push_back(state.volume());
            if (observer) {
                TrajectorySample s{sweep + 1, state.energy, state.volume(),
                                   state.counters.displacement_rate(),
                                   state.counters.volume_rate()};
                observer(state, s);
            }
        }
    }
    result.counters = state.counters;
    result.potential = block_estimate("potential_energy", result.u_samples, schedule.blocks);
    result.volume = block_estimate("volume", result.v_samples, schedule.blocks);
    result.total = result.potential;
    result.total.observable = "total_energy";
    result.total.mean += params.kinetic_mean();
    return result;
}

}  // namespace wulffmc
