#include "wulffmc/interaction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wulffmc {

std::optional<double> pair_energy(double r) {
    if (std::isnan(r) || r < 0.0)
        throw std::invalid_argument("pair distance must be a nonnegative number");
    if (r < kHardCoreDiameter) return std::nullopt;
    if (r <= kInteractionCutoff) return r - 3.0;
    return 0.0;
}

std::optional<double> pair_energy_squared(double r2) {
    if (std::isnan(r2) || r2 < 0.0)
        throw std::invalid_argument("squared pair distance must be a nonnegative number");
    if (r2 < kHardCoreDiameter * kHardCoreDiameter) return std::nullopt;
    if (r2 > kInteractionCutoff * kInteractionCutoff) return 0.0;
    return std::sqrt(r2) - 3.0;
}

CellList::CellList(int dim, double extent, double min_edge) : dim_(dim), extent_(extent) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("cell list dimension must be 2 or 3");
    if (!(extent > 0) || !std::isfinite(extent))
        throw std::invalid_argument("cell list extent must be positive");
    n_ = std::max(1, static_cast<int>(std::floor(2.0 * extent / min_edge)));
    nz_ = dim == 3 ? n_ : 1;
    edge_ = 2.0 * extent / static_cast<double>(n_);
    cells_.resize(static_cast<std::size_t>(nz_) * static_cast<std::size_t>(n_) *
                  static_cast<std::size_t>(n_));
}

std::size_t CellList::cell_of(const Vec& p) const {
    const auto idx = [this](double coord) {
        return std::clamp(static_cast<int>(std::floor((coord + extent_) / edge_)), 0, n_ - 1);
    };
    const int x = idx(p.x), y = idx(p.y);
    const int z = dim_ == 3 ? idx(p.z) : 0;
    return static_cast<std::size_t>((z * n_ + y) * n_ + x);
}

void CellList::rebuild(const std::vector<Vec>& positions) {
    for (auto& c : cells_) c.clear();
    for (std::size_t i = 0; i < positions.size(); ++i)
        cells_[cell_of(positions[i])].push_back(static_cast<std::uint32_t>(i));
}

void CellList::move(std::uint32_t index, const Vec& from, const Vec& to) {
    const std::size_t a = cell_of(from), b = cell_of(to);
    if (a == b) return;
    auto& cell = cells_[a];
    for (std::size_t i = 0; i < cell.size(); ++i)
        if (cell[i] == index) {
            cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    cells_[b].push_back(index);
}

ParticleConfiguration::ParticleConfiguration(ScaledContainer container, std::vector<Vec> positions,
                                             bool validate_core)
    : container_(std::move(container)),
      positions_(std::move(positions)),
      validate_core_(validate_core),
      cells_(container_.dim(), container_.bounding_radius()) {
    if (positions_.empty()) throw std::invalid_argument("configuration needs at least one particle");
    for (const Vec& p : positions_) {
        if (!p.finite()) throw std::invalid_argument("particle position is not finite");
        if (!container_.contains(p))
            throw std::invalid_argument("particle position lies outside the container");
    }
    cells_.rebuild(positions_);
    if (validate_core_ && !total_energy().has_value())
        throw std::invalid_argument("initial configuration has overlapping particles");
}

void ParticleConfiguration::set_position(std::size_t i, const Vec& p) {
    cells_.move(static_cast<std::uint32_t>(i), positions_[i], p);
    positions_[i] = p;
}

bool ParticleConfiguration::all_inside(double relative_slack) const {
    // scale the container up by the slack and test against that
    const double grow = 1.0 + relative_slack;
    const ScaledContainer loose =
        container_.with_volume(container_.target_volume() *
                               std::pow(grow, static_cast<double>(container_.dim())));
    for (const Vec& p : positions_)
        if (!loose.contains(p)) return false;
    return true;
}

std::optional<double> ParticleConfiguration::total_energy() const {
    double sum = 0.0;
    bool overlap = false;
    cells_.for_pairs_within(kInteractionCutoff, [&](std::uint32_t j, std::uint32_t k) {
        if (overlap) return;
        const auto e = pair_energy_squared(distance2(positions_[j], positions_[k]));
        if (!e) {
            overlap = true;
            return;
        }
        sum += *e;
    });
    if (overlap) return std::nullopt;
    return sum;
}

std::optional<double> ParticleConfiguration::scaled_total_energy(double factor) const {
    if (!(factor > 0) || !std::isfinite(factor))
        throw std::invalid_argument("scale factor must be positive");
    double sum = 0.0;
    bool overlap = false;
    const double f2 = factor * factor;
    cells_.for_pairs_within(kInteractionCutoff / factor,
                            [&](std::uint32_t j, std::uint32_t k) {
                                if (overlap) return;
                                const auto e = pair_energy_squared(
                                    f2 * distance2(positions_[j], positions_[k]));
                                if (!e) {
                                    overlap = true;
                                    return;
                                }
                                sum += *e;
                            });
    if (overlap) return std::nullopt;
    return sum;
}

std::optional<double> ParticleConfiguration::delta_energy_move(std::size_t i, const Vec& p) const {
    double after = 0.0;
    bool overlap = false;
    const std::uint32_t self = static_cast<std::uint32_t>(i);
    cells_.for_neighbors(p, kInteractionCutoff, self, [&](std::uint32_t j) {
        if (overlap) return;
        const auto e = pair_energy_squared(distance2(p, positions_[j]));
        if (!e) {
            overlap = true;
            return;
        }
        after += *e;
    });
    if (overlap) return std::nullopt;
    double before = 0.0;
    cells_.for_neighbors(positions_[i], kInteractionCutoff, self, [&](std::uint32_t j) {
        // current state is admissible by invariant; value() would throw on a
        // latent overlap, which is the loud failure we want
        before += pair_energy_squared(distance2(positions_[i], positions_[j])).value();
    });
    return after - before;
}

void ParticleConfiguration::adopt(ScaledContainer container, double factor) {
    container_ = std::move(container);
    for (Vec& p : positions_) p *= factor;
    cells_ = CellList(container_.dim(), container_.bounding_radius());
    cells_.rebuild(positions_);
}

}  // namespace wulffmc
