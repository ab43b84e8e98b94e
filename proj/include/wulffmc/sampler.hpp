#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wulffmc/estimators.hpp"
#include "wulffmc/interaction.hpp"
#include "wulffmc/rng.hpp"

namespace wulffmc {

// Pressure-temperature ensemble: weight e^{-beta U} e^{-beta P V} V^N over
// particle positions inside the scaled container and the volume V > 0.
// Momenta never appear: their Gaussian integral is done analytically and
// reported means carry the kinetic constant d N / (2 beta).
struct EnsembleParams {
    int dimension = 2;
    int particles = 1;
    double beta = 1.0;      // 1/T with k_B = 1
    double pressure = 1.0;
    bool ideal_gas = false; // disable the pair potential
    double volume_cap = 0.0;  // 0 = none; P = 0 requires a cap (the V-integral
                              // diverges otherwise)

    void validate() const;
    double kinetic_mean() const;  // d N / (2 beta)
};

struct StepSizes {
    double displacement = 0.3;  // half-width of the proposal square/cube
    double log_volume = 0.2;    // half-width of delta in V' = V e^delta
};

struct MoveCounters {
    std::uint64_t disp_proposed = 0;
    std::uint64_t disp_accepted = 0;
    std::uint64_t vol_proposed = 0;
    std::uint64_t vol_accepted = 0;

    double displacement_rate() const {
        return disp_proposed ? static_cast<double>(disp_accepted) /
                                   static_cast<double>(disp_proposed)
                             : 0.0;
    }
    double volume_rate() const {
        return vol_proposed ? static_cast<double>(vol_accepted) / static_cast<double>(vol_proposed)
                            : 0.0;
    }
};

// One Markov chain. `energy` caches the potential (exactly 0 for ideal-gas
// runs); moves keep it within 1e-8 of a fresh recomputation.
struct SimulationState {
    ParticleConfiguration config;
    double energy = 0.0;
    Rng rng;
    StepSizes steps;
    MoveCounters counters;

    double volume() const { return config.container().target_volume(); }
};

// Places N particles by random sequential insertion into the shape scaled to
// volume_factor times N hard-core-ball volumes (capped by volume_cap). Throws
// once `retry_budget` overlapping draws have been discarded, naming a larger
// factor to try.
SimulationState initialize_state(const Shape& shape, const EnsembleParams& params,
                                 const StepSizes& steps, std::uint64_t seed,
                                 double volume_factor = 4.0,
                                 std::uint64_t retry_budget = 100000);

// accept with probability min(1, e^{log_ratio}); exposed so tests can probe
// the bare rule
bool metropolis_accept(double log_ratio, Rng& rng);

// uniform square/cube displacement of one random particle;
// min(1, e^{-beta dU}); exits and overlaps reject
bool displacement_move(SimulationState& state, const EnsembleParams& params);

// V' = V e^delta, positions rescaled by (V'/V)^(1/d);
// min(1, exp(-beta dU - beta P dV + (N+1) delta))
bool volume_move(SimulationState& state, const EnsembleParams& params);

std::optional<double> recompute_energy(const SimulationState& state,
                                       const EnsembleParams& params);

struct RunSchedule {
    std::uint64_t burnin_sweeps = 2000;
    std::uint64_t measurement_sweeps = 20000;
    std::uint64_t thinning = 10;        // record every thinning-th sweep
    double volume_move_fraction = 1.0;  // volume moves per sweep; fractional accumulates
    std::size_t blocks = 16;
    double accept_low = 0.30;   // step-tuning window, burn-in only
    double accept_high = 0.50;
    std::uint64_t tune_interval = 50;  // sweeps between tuning nudges

    void validate() const;
};

struct TrajectorySample {
    std::uint64_t sweep = 0;
    double potential = 0.0;
    double volume = 0.0;
    double disp_rate = 0.0;  // cumulative over the measurement phase
    double vol_rate = 0.0;
};

struct RunResult {
    EnergyEstimate potential;  // <U>
    EnergyEstimate volume;     // <V>
    EnergyEstimate total;      // <E> = <U> + d N / (2 beta), SE identical to <U>
    std::vector<double> u_samples;
    std::vector<double> v_samples;
    MoveCounters counters;  // measurement phase only
    StepSizes steps;        // frozen after burn-in
};

using RunObserver = std::function<void(const SimulationState&, const TrajectorySample&)>;

// One sweep = N displacement attempts plus the scheduled volume moves. Step
// sizes adapt toward the acceptance window during burn-in and freeze after.
// A full containment/hard-core scan runs every 10^4 sweeps and throws on any
// violation. Deterministic for fixed (state, params, schedule).
RunResult run(SimulationState& state, const EnsembleParams& params, const RunSchedule& schedule,
              const RunObserver& observer = {});

}  // namespace wulffmc
