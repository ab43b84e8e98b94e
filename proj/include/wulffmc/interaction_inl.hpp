#pragma once

#include <algorithm>
#include <cmath>

namespace wulffmc {

template <typename Fn>
void CellList::for_neighbors(const Vec& center, double radius, std::uint32_t skip, Fn&& fn) const {
    const int rings = std::min(static_cast<int>(std::ceil(radius / edge_)), n_ - 1 > 0 ? n_ - 1 : 0);
    const auto clampi = [this](double t) {
        return std::clamp(static_cast<int>(std::floor(t)), 0, n_ - 1);
    };
    const int cx = clampi((center.x + extent_) / edge_);
    const int cy = clampi((center.y + extent_) / edge_);
    const int cz = dim_ == 3 ? clampi((center.z + extent_) / edge_) : 0;
    const int zlo = dim_ == 3 ? std::max(0, cz - rings) : 0;
    const int zhi = dim_ == 3 ? std::min(nz_ - 1, cz + rings) : 0;
    for (int z = zlo; z <= zhi; ++z)
        for (int y = std::max(0, cy - rings); y <= std::min(n_ - 1, cy + rings); ++y)
            for (int x = std::max(0, cx - rings); x <= std::min(n_ - 1, cx + rings); ++x) {
                const std::size_t c =
                    static_cast<std::size_t>((z * n_ + y) * n_ + x);
                for (std::uint32_t j : cells_[c])
                    if (j != skip) fn(j);
            }
}

template <typename Fn>
void CellList::for_pairs_within(double radius, Fn&& fn) const {
    const int rings = std::min(static_cast<int>(std::ceil(radius / edge_)), n_ - 1 > 0 ? n_ - 1 : 0);
    const int nz = dim_ == 3 ? nz_ : 1;
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < n_; ++y)
            for (int x = 0; x < n_; ++x) {
                const std::size_t c = static_cast<std::size_t>((z * n_ + y) * n_ + x);
                const auto& here = cells_[c];
                for (std::size_t a = 0; a < here.size(); ++a)
                    for (std::size_t b = a + 1; b < here.size(); ++b) fn(here[a], here[b]);
                // half stencil: strictly later cells in (z, y, x) order
                for (int dz = 0; dz <= (dim_ == 3 ? rings : 0); ++dz) {
                    const int z2 = z + dz;
                    if (z2 >= nz) break;
                    const int ylo = dz == 0 ? 0 : -rings;
                    for (int dy = ylo; dy <= rings; ++dy) {
                        const int y2 = y + dy;
                        if (y2 < 0 || y2 >= n_) continue;
                        const int xlo = (dz == 0 && dy == 0) ? 1 : -rings;
                        for (int dx = xlo; dx <= rings; ++dx) {
                            const int x2 = x + dx;
                            if (x2 < 0 || x2 >= n_) continue;
                            const std::size_t c2 =
                                static_cast<std::size_t>((z2 * n_ + y2) * n_ + x2);
                            for (std::uint32_t j : here)
                                for (std::uint32_t k : cells_[c2]) fn(j, k);
                        }
                    }
                }
            }
}

}  // namespace wulffmc
