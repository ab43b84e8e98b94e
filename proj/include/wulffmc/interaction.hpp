#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wulffmc/geometry.hpp"

namespace wulffmc {

// Pair potential: hard core below kHardCoreDiameter, linear well r - 3 on
// [1, 3], zero beyond the cutoff. Overlap is reported as nullopt, never as a
// large float, so callers must treat "no value" as an inadmissible state.
inline constexpr double kHardCoreDiameter = 1.0;
inline constexpr double kInteractionCutoff = 3.0;

std::optional<double> pair_energy(double r);
// same potential evaluated from the squared distance (avoids sqrt outside
// the interacting band)
std::optional<double> pair_energy_squared(double r2);

// Uniform grid over the box [-extent, extent]^d with cell edge >= the
// interaction cutoff, so all pairs within the cutoff sit in adjacent cells.
// Small containers degenerate to a single cell; everything still works.
class CellList {
  public:
    CellList(int dim, double extent, double min_edge = kInteractionCutoff);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    int cells_per_axis() const { return n_; }

    void rebuild(const std::vector<Vec>& positions);
    void move(std::uint32_t index, const Vec& from, const Vec& to);

    // every particle within `radius` of `center` is visited (possibly others
    // too); `skip` is left out
    template <typename Fn>
    void for_neighbors(const Vec& center, double radius, std::uint32_t skip, Fn&& fn) const;

    // unordered pairs (j, k) covering all pairs closer than `radius`
    template <typename Fn>
    void for_pairs_within(double radius, Fn&& fn) const;

  private:
    std::size_t cell_of(const Vec& p) const;

    int dim_;
    double extent_;
    int n_;
    int nz_;
    double edge_;
    std::vector<std::vector<std::uint32_t>> cells_;
};

// Particle positions inside a scaled container, with the cell list kept in
// sync. Holds no energy cache; samplers own that.
class ParticleConfiguration {
  public:
    // `validate_core` off admits overlapping positions (ideal-gas runs)
    ParticleConfiguration(ScaledContainer container, std::vector<Vec> positions,
                          bool validate_core = true);

    const ScaledContainer& container() const { return container_; }
    const std::vector<Vec>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    bool validates_core() const { return validate_core_; }

    void set_position(std::size_t i, const Vec& p);

    // all particles inside the container, within a relative slack on the
    // radial coordinate (guards against ulp drift after rescaling)
    bool all_inside(double relative_slack = 1e-9) const;

    // sum of pair energies over unordered pairs; nullopt on any overlap
    std::optional<double> total_energy() const;

    // energy with every pair distance multiplied by `factor` (volume-move
    // proposals evaluate the rescaled state without touching positions)
    std::optional<double> scaled_total_energy(double factor) const;

    // U(after move of particle i to `p`) - U(before); nullopt if the move
    // creates an overlap
    std::optional<double> delta_energy_move(std::size_t i, const Vec& p) const;

    // replace the container and multiply all positions by `factor` (an
    // accepted volume move); rebuilds the cell list
    void adopt(ScaledContainer container, double factor);

  private:
    ScaledContainer container_;
    std::vector<Vec> positions_;
    bool validate_core_;
    CellList cells_;
};

}  // namespace wulffmc

#include "wulffmc/interaction_inl.hpp"
