#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wulffmc/sampler.hpp"

namespace wulffmc {

// Replicas disagreed beyond the consistency threshold; the message carries
// per-replica means, errors, and seeds.
class EquilibrationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EstimateOptions {
    std::size_t replicas = 4;
    std::vector<std::uint64_t> seeds;  // one per replica; required
    double consistency_z = 5.0;        // max replica disagreement in combined SEs
    double volume_factor = 4.0;        // insertion inflation for initialize_state
    std::size_t jobs = 1;              // concurrent replica cap

    void validate() const;
};

struct ReplicaSummary {
    std::uint64_t seed = 0;
    double energy_mean = 0.0;
    double energy_se = 0.0;
    double disp_rate = 0.0;
    double vol_rate = 0.0;
};

// Pooled multi-replica estimates for one shape at one (beta, P, N).
struct ShapeEstimate {
    Shape shape;
    EnergyEstimate energy;     // <E>, pooled
    EnergyEstimate potential;  // <U>, pooled
    EnergyEstimate volume;     // <V>, pooled
    std::vector<ReplicaSummary> replicas;
};

// Independent replicas, consistency check, then pooling: mean = average of
// replica means, SE = sqrt(sum SE_i^2) / R.
ShapeEstimate estimate_shape(const Shape& shape, const EnsembleParams& params,
                             const RunSchedule& schedule, const EstimateOptions& options);

EnergyEstimate estimate_mean_energy(const Shape& shape, const EnsembleParams& params,
                                    const RunSchedule& schedule, const EstimateOptions& options);

enum class Verdict { Lower, Higher, Indistinguishable };

std::string verdict_name(Verdict v);

struct PairVerdict {
    std::size_t first = 0;   // indices into ShapeComparison::entries
    std::size_t second = 0;
    double delta = 0.0;      // <E>(first) - <E>(second)
    double se = 0.0;         // sqrt(SE_first^2 + SE_second^2)
    Verdict verdict = Verdict::Indistinguishable;  // of first vs second
};

struct ShapeComparison {
    std::vector<ShapeEstimate> entries;
    std::vector<PairVerdict> pairs;  // all unordered pairs, first < second
    double z = 3.0;
};

struct CompareOptions {
    std::size_t replicas = 4;
    std::uint64_t base_seed = 1;  // per-shape replica seeds derive from this
    double consistency_z = 5.0;
    double verdict_z = 3.0;
    double volume_factor = 4.0;
    std::size_t jobs = 1;
};

// Estimates every shape with independent derived seeds and renders pairwise
// verdicts: INDISTINGUISHABLE when |delta| < z * SE, else LOWER/HIGHER for
// the first shape of the pair.
ShapeComparison compare_shapes(const std::vector<Shape>& shapes, const EnsembleParams& params,
                               const RunSchedule& schedule, const CompareOptions& options);

struct PressureScanRow {
    double pressure = 0.0;
    ShapeComparison comparison;
};

struct TrendRow {
    std::size_t first = 0;
    std::size_t second = 0;
    std::vector<int> signs;  // -1 / 0 / +1 per pressure, verdict of first vs second
};

struct PressureScan {
    std::vector<PressureScanRow> rows;
    std::vector<TrendRow> trends;
};

// called as each pressure's comparison completes; lets callers persist
// partial results before a later pressure fails
using ScanRowObserver = std::function<void(const PressureScanRow&)>;

// Ascending pressures; each shape/replica chain warm-starts from its final
// state at the previous pressure (the schedule's burn-in re-equilibrates).
PressureScan pressure_scan(const std::vector<Shape>& shapes, const EnsembleParams& params,
                           const std::vector<double>& pressures, const RunSchedule& schedule,
                           const CompareOptions& options, const ScanRowObserver& on_row = {});

// Search space: radial grids rho = s * (1 + sum_k c_k q_k) clamped to the
// floor and scaled to volume 10. d=2 uses Fourier modes m = 2 .. modes+1
// (m = 1 is a translation, removed by the motion quotient); d=3 uses the five
// traceless quadratics (same reasoning for the linear modes).
struct SearchConfig {
    int basis_modes = 4;        // d=2 mode count (cap 8); d=3 ignores this (5 quadratics)
    int grid_resolution = 96;   // d=2 angles; d=3 uses resolution/8 x resolution/4
    double step = 0.08;         // proposal spread per coefficient
    std::uint64_t budget = 40;  // proposal evaluations
    std::uint64_t patience = 12;     // stop after this many consecutive rejections
    std::uint64_t shrink_after = 6;  // shrink the step on rejection streaks this long
    double step_shrink = 0.6;
    std::size_t crn_replicas = 2;  // fixed seeds shared by every candidate
    std::uint64_t base_seed = 1;
    double volume_factor = 4.0;

    void validate() const;
};

struct SearchIteration {
    std::uint64_t index = 0;
    bool accepted = false;
    double objective = 0.0;  // candidate <E> under the common random numbers
    double step = 0.0;
};

struct ShapeSearchState {
    Shape shape;                       // best iterate (always a canonical grid)
    std::vector<double> coefficients;  // its basis coefficients
    EnergyEstimate objective;          // CRN estimate of the best iterate
    std::vector<SearchIteration> trace;
    bool budget_exhausted = false;
};

// Stochastic descent over basis coefficients with common random numbers:
// every candidate is scored with the same seed set, accepted only on strict
// improvement, and projected to {rho >= 1, volume = 10} before scoring.
ShapeSearchState local_shape_search(const Shape& start, const EnsembleParams& params,
                                    const RunSchedule& schedule, const SearchConfig& config);

// Per-particle energy of the infinite triangular lattice at spacing a: half
// the sum of v over lattice vectors within the cutoff (finite, exact).
double lattice_energy_per_particle(double spacing);

struct LatticeMinimum {
    double spacing = 0.0;
    double energy = 0.0;
};

// grid argmin of the lattice energy over [lo, hi]; ties keep the smallest a
LatticeMinimum minimize_lattice_energy(double lo = 1.0, double hi = 3.0,
                                       std::size_t grid_points = 2001);

}  // namespace wulffmc
