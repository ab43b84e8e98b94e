#include "wulffmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wulffmc {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
// convergence tolerance of the canonical form (centroid offset, alignment)
constexpr double kCanonTol = 1e-12;
constexpr double kFloorSlack = 1e-12;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// ---- d=2 grid: periodic linear interpolation at uniform angles ----

double interp_ring(std::span<const double> values, double angle) {
    const std::size_t m = values.size();
    double t = angle / (kTwoPi / static_cast<double>(m));
    double base = std::floor(t);
    double frac = t - base;
    long i = static_cast<long>(base) % static_cast<long>(m);
    if (i < 0) i += static_cast<long>(m);
    const std::size_t i0 = static_cast<std::size_t>(i);
    const std::size_t i1 = (i0 + 1) % m;
    return values[i0] * (1.0 - frac) + values[i1] * frac;
}

// ---- d=3 grid: bilinear in (cos theta, phi), Gauss-Legendre polar nodes ----

double interp_sphere(int n_polar, int n_azimuth, std::span<const double> values,
                     std::span<const double> u_nodes, const Vec& dir) {
    const double u = clamp(dir.z, u_nodes.front(), u_nodes.back());
    // locate polar interval
    const auto it = std::upper_bound(u_nodes.begin(), u_nodes.end(), u);
    std::size_t hi = static_cast<std::size_t>(std::distance(u_nodes.begin(), it));
    if (hi == 0) hi = 1;
    if (hi >= static_cast<std::size_t>(n_polar)) hi = static_cast<std::size_t>(n_polar) - 1;
    const std::size_t lo = hi - 1;
    const double du = u_nodes[hi] - u_nodes[lo];
    const double fu = du > 0 ? (u - u_nodes[lo]) / du : 0.0;

    double phi = std::atan2(dir.y, dir.x);
    if (phi < 0) phi += kTwoPi;
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    double t = phi / dphi;
    double base = std::floor(t);
    double fp = t - base;
    long j = static_cast<long>(base) % n_azimuth;
    if (j < 0) j += n_azimuth;
    const std::size_t j0 = static_cast<std::size_t>(j);
    const std::size_t j1 = (j0 + 1) % static_cast<std::size_t>(n_azimuth);

    const std::size_t a = static_cast<std::size_t>(n_azimuth);
    const double v00 = values[lo * a + j0], v01 = values[lo * a + j1];
    const double v10 = values[hi * a + j0], v11 = values[hi * a + j1];
    return (v00 * (1.0 - fp) + v01 * fp) * (1.0 - fu) + (v10 * (1.0 - fp) + v11 * fp) * fu;
}

Vec sphere_node_direction(double u, double phi) {
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    return {s * std::cos(phi), s * std::sin(phi), u};
}

// 4-point Gauss-Legendre on [0,1], used for the d=2 centroid integrals
constexpr double kGl4Node[4] = {0.069431844202973712, 0.33000947820757187,
                                0.66999052179242813, 0.93056815579702629};
constexpr double kGl4Weight[4] = {0.17392742256872693, 0.32607257743127307,
                                  0.32607257743127307, 0.17392742256872693};

struct Moments2 {
    double area;
    Vec centroid;
};

Moments2 grid_moments2(std::span<const double> v) {
    const std::size_t m = v.size();
    const double dth = kTwoPi / static_cast<double>(m);
    double area = 0.0;
    Vec first{};
    for (std::size_t i = 0; i < m; ++i) {
        const double a = v[i], b = v[(i + 1) % m];
        area += dth / 6.0 * (a * a + a * b + b * b);
        const double th0 = dth * static_cast<double>(i);
        for (int q = 0; q < 4; ++q) {
            const double t = kGl4Node[q];
            const double rho = a * (1.0 - t) + b * t;
            const double th = th0 + dth * t;
            const double w = kGl4Weight[q] * dth * rho * rho * rho / 3.0;
            first.x += w * std::cos(th);
            first.y += w * std::sin(th);
        }
    }
    return {area, first / area};
}

struct Moments3 {
    double volume;
    Vec centroid;
};

Moments3 grid_moments3(int n_polar, int n_azimuth, std::span<const double> v,
                       std::span<const double> u_nodes, std::span<const double> u_weights) {
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    double vol = 0.0;
    Vec first{};
    for (int i = 0; i < n_polar; ++i) {
        for (int j = 0; j < n_azimuth; ++j) {
            const double rho = v[static_cast<std::size_t>(i * n_azimuth + j)];
            const double w = u_weights[static_cast<std::size_t>(i)] * dphi;
            const double r3 = rho * rho * rho;
            vol += w * r3 / 3.0;
            const Vec dir = sphere_node_direction(u_nodes[static_cast<std::size_t>(i)],
                                                  dphi * static_cast<double>(j));
            first += dir * (w * r3 * rho / 4.0);
        }
    }
    return {vol, first / vol};
}

// second moment matrix Int x x^T dx and scale of the third moments
struct Inertia3 {
    Mat3 second;
    double third_scale;
};

Inertia3 grid_inertia3(int n_polar, int n_azimuth, std::span<const double> v,
                       std::span<const double> u_nodes, std::span<const double> u_weights) {
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    Mat3 sec;
    sec.m.fill(0.0);
    double third_scale = 0.0;
    for (int i = 0; i < n_polar; ++i) {
        for (int j = 0; j < n_azimuth; ++j) {
            const double rho = v[static_cast<std::size_t>(i * n_azimuth + j)];
            const double w = u_weights[static_cast<std::size_t>(i)] * dphi;
            const double r5 = rho * rho * rho * rho * rho;
            const Vec d = sphere_node_direction(u_nodes[static_cast<std::size_t>(i)],
                                                dphi * static_cast<double>(j));
            const double f = w * r5 / 5.0;
            sec(0, 0) += f * d.x * d.x;
            sec(0, 1) += f * d.x * d.y;
            sec(0, 2) += f * d.x * d.z;
            sec(1, 1) += f * d.y * d.y;
            sec(1, 2) += f * d.y * d.z;
            sec(2, 2) += f * d.z * d.z;
            third_scale += w * r5 * rho / 6.0;
        }
    }
    sec(1, 0) = sec(0, 1);
    sec(2, 0) = sec(0, 2);
    sec(2, 1) = sec(1, 2);
    return {sec, third_scale};
}

double grid_third_moment3(int n_polar, int n_azimuth, std::span<const double> v,
                          std::span<const double> u_nodes, std::span<const double> u_weights,
                          const Vec& axis) {
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    double t = 0.0;
    for (int i = 0; i < n_polar; ++i) {
        for (int j = 0; j < n_azimuth; ++j) {
            const double rho = v[static_cast<std::size_t>(i * n_azimuth + j)];
            const double w = u_weights[static_cast<std::size_t>(i)] * dphi;
            const Vec d = sphere_node_direction(u_nodes[static_cast<std::size_t>(i)],
                                                dphi * static_cast<double>(j));
            const double p = d.dot(axis);
            t += w * rho * rho * rho * rho * rho * rho / 6.0 * p * p * p;
        }
    }
    return t;
}

// Jacobi eigensolver for a symmetric 3x3; eigenvectors as columns of V.
void jacobi_eigen(Mat3 a, std::array<double, 3>& eigvals, Mat3& eigvecs) {
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        double diag = std::abs(a(0, 0)) + std::abs(a(1, 1)) + std::abs(a(2, 2));
        if (off <= 1e-15 * std::max(diag, 1e-300)) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a(p, q)) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eigvals = {a(0, 0), a(1, 1), a(2, 2)};
    eigvecs = v;
}

// largest |entry| deviation from the identity
double rotation_deviation(const Mat3& r) {
    double dev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            dev = std::max(dev, std::abs(r(i, j) - (i == j ? 1.0 : 0.0)));
    return dev;
}

// Radius of the region {r <= rho(omega)} seen from interior point c along
// dir: bisection on the containment predicate.
template <typename ContainsFn>
double ray_radius(const ContainsFn& inside, const Vec& c, const Vec& dir, double r_hi) {
    double lo = 0.0, hi = r_hi;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inside(c + dir * mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// One recentering pass for a d=2 grid: re-express rho about new center c.
std::vector<double> recenter_ring(const std::vector<double>& v, const Vec& c) {
    const std::size_t m = v.size();
    const double dth = kTwoPi / static_cast<double>(m);
    const double vmax = *std::max_element(v.begin(), v.end());
    const double r_hi = vmax + c.norm() + 1.0;
    const auto inside = [&](const Vec& p) {
        const double n = std::hypot(p.x, p.y);
        if (n < 1e-300) return true;
        return n <= interp_ring(v, std::atan2(p.y, p.x) < 0
                                       ? std::atan2(p.y, p.x) + kTwoPi
                                       : std::atan2(p.y, p.x));
    };
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double th = dth * static_cast<double>(i);
        out[i] = ray_radius(inside, c, Vec{std::cos(th), std::sin(th), 0.0}, r_hi);
    }
    return out;
}

std::vector<double> recenter_sphere(int n_polar, int n_azimuth, const std::vector<double>& v,
                                    std::span<const double> u_nodes, const Vec& c) {
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    const double vmax = *std::max_element(v.begin(), v.end());
    const double r_hi = vmax + c.norm() + 1.0;
    const auto inside = [&](const Vec& p) {
        const double n = p.norm();
        if (n < 1e-300) return true;
        return n <= interp_sphere(n_polar, n_azimuth, v, u_nodes, p / n);
    };
    std::vector<double> out(v.size());
    for (int i = 0; i < n_polar; ++i)
        for (int j = 0; j < n_azimuth; ++j) {
            const Vec dir = sphere_node_direction(u_nodes[static_cast<std::size_t>(i)],
                                                  dphi * static_cast<double>(j));
            out[static_cast<std::size_t>(i * n_azimuth + j)] = ray_radius(inside, c, dir, r_hi);
        }
    return out;
}

void check_values(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ShapeError("radial value is not finite");
        if (v < kRadialFloor - kFloorSlack)
            throw ShapeError("radial value " + std::to_string(v) + " below the floor rho >= 1");
    }
}

}  // namespace

std::string family_name(ShapeFamily family) {
    switch (family) {
        case ShapeFamily::Ball: return "ball";
        case ShapeFamily::RegularPolygon: return "polygon";
        case ShapeFamily::Cuboctahedron: return "cuboctahedron";
        case ShapeFamily::RadialGrid: return "radial_grid";
    }
    return "?";
}

bool Pose::is_identity(double tol) const {
    return rotation_deviation(rot) <= tol && offset.norm() <= tol;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - static_cast<double>(k) * p2) / (k + 1.0);
            }
            pp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

double radial_grid_area(std::span<const double> values) {
    const std::size_t m = values.size();
    const double dth = kTwoPi / static_cast<double>(m);
    double area = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = values[i], b = values[(i + 1) % m];
        area += dth / 6.0 * (a * a + a * b + b * b);
    }
    return area;
}

double radial_grid_volume3(int n_polar, int n_azimuth, std::span<const double> values) {
    std::vector<double> nodes, w;
    gauss_legendre(n_polar, nodes, w);
    return grid_moments3(n_polar, n_azimuth, values, nodes, w).volume;
}

Vec radial_grid_centroid(std::span<const double> values) {
    return grid_moments2(values).centroid;
}

Vec radial_grid_centroid3(int n_polar, int n_azimuth, std::span<const double> values) {
    std::vector<double> nodes, w;
    gauss_legendre(n_polar, nodes, w);
    return grid_moments3(n_polar, n_azimuth, values, nodes, w).centroid;
}

// ---- canonical form for grid values ----

namespace {

// translate the d=2 values so the centroid sits at the origin
void canonicalize_ring_center(std::vector<double>& v) {
    for (int pass = 0; pass < 50; ++pass) {
        const Vec c = grid_moments2(v).centroid;
        if (c.norm() <= kCanonTol) return;
        v = recenter_ring(v, c);
    }
    throw ShapeError("recentering did not converge; values are degenerate or not star-shaped");
}

void canonicalize_ring_orientation(std::vector<double>& v) {
    const std::size_t m = v.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (v[i] > v[best]) best = i;  // first max = smallest angle on ties
    if (best == 0) return;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = v[(i + best) % m];
    v = out;
}

// rotate d=3 values into the principal frame of the second-moment tensor
void canonicalize_sphere(int n_polar, int n_azimuth, std::vector<double>& v,
                         std::span<const double> u_nodes, std::span<const double> u_weights) {
    const double dphi = kTwoPi / static_cast<double>(n_azimuth);
    for (int pass = 0; pass < 50; ++pass) {
        bool moved = false;
        const Vec c = grid_moments3(n_polar, n_azimuth, v, u_nodes, u_weights).centroid;
        if (c.norm() > kCanonTol) {
            v = recenter_sphere(n_polar, n_azimuth, v, u_nodes, c);
            moved = true;
        }
        const auto inertia = grid_inertia3(n_polar, n_azimuth, v, u_nodes, u_weights);
        std::array<double, 3> ev;
        Mat3 vec;
        jacobi_eigen(inertia.second, ev, vec);
        // order axes by decreasing eigenvalue; ties keep their current order
        std::array<int, 3> order{0, 1, 2};
        const double tie = 1e-9 * std::max({std::abs(ev[0]), std::abs(ev[1]), std::abs(ev[2]), 1e-300});
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return ev[static_cast<std::size_t>(a)] > ev[static_cast<std::size_t>(b)] + tie;
        });
        Mat3 axes;
        for (int col = 0; col < 3; ++col)
            for (int row = 0; row < 3; ++row) axes(row, col) = vec(row, order[static_cast<std::size_t>(col)]);
        // sign convention: first two axes get a positive third moment
        const double third_tol = 1e-12 * std::max(inertia.third_scale, 1e-300);
        for (int col = 0; col < 2; ++col) {
            const Vec axis{axes(0, col), axes(1, col), axes(2, col)};
            const double t = grid_third_moment3(n_polar, n_azimuth, v, u_nodes, u_weights, axis);
            if (t < -third_tol)
                for (int row = 0; row < 3; ++row) axes(row, col) = -axes(row, col);
        }
        // right-handed frame
        const Vec a0{axes(0, 0), axes(1, 0), axes(2, 0)};
        const Vec a1{axes(0, 1), axes(1, 1), axes(2, 1)};
        const Vec a2 = a0.cross(a1);
        axes(0, 2) = a2.x;
        axes(1, 2) = a2.y;
        axes(2, 2) = a2.z;
        if (rotation_deviation(axes) > kCanonTol) {
            // resample in the principal frame: rho'(w) = rho(axes * w)
            std::vector<double> out(v.size());
            for (int i = 0; i < n_polar; ++i)
                for (int j = 0; j < n_azimuth; ++j) {
                    const Vec dir = sphere_node_direction(u_nodes[static_cast<std::size_t>(i)],
                                                          dphi * static_cast<double>(j));
                    out[static_cast<std::size_t>(i * n_azimuth + j)] =
                        interp_sphere(n_polar, n_azimuth, v, u_nodes, axes.apply(dir));
                }
            v = out;
            moved = true;
        }
        if (!moved) return;
    }
    throw ShapeError("principal-frame alignment did not converge");
}

}  // namespace

// ---- Shape ----

Shape Shape::ball(int dim) {
    if (dim != 2 && dim != 3) throw ShapeError("dimension must be 2 or 3");
    Shape s;
    s.family_ = ShapeFamily::Ball;
    s.dim_ = dim;
    s.scale_ = dim == 2 ? std::sqrt(kReferenceVolume / M_PI)
                        : std::cbrt(3.0 * kReferenceVolume / (4.0 * M_PI));
    return s;
}

Shape Shape::regular_polygon(int sides) {
    if (sides < 3) throw ShapeError("polygon needs at least 3 sides");
    Shape s;
    s.family_ = ShapeFamily::RegularPolygon;
    s.dim_ = 2;
    s.sides_ = sides;
    const double k = static_cast<double>(sides);
    s.scale_ = std::sqrt(2.0 * kReferenceVolume / (k * std::sin(kTwoPi / k)));
    if (s.scale_ * std::cos(M_PI / k) < kRadialFloor - kFloorSlack)
        throw ShapeError("polygon inradius falls below the floor rho >= 1 at volume 10");
    return s;
}

Shape Shape::cuboctahedron() {
    Shape s;
    s.family_ = ShapeFamily::Cuboctahedron;
    s.dim_ = 3;
    s.scale_ = std::cbrt(3.0 * kReferenceVolume / (5.0 * std::sqrt(2.0)));
    return s;
}

Shape Shape::radial_grid(std::vector<double> values) {
    if (values.size() < 8) throw ShapeError("d=2 radial grid needs at least 8 angles");
    check_values(values);
    canonicalize_ring_center(values);
    canonicalize_ring_orientation(values);
    const double area = radial_grid_area(values);
    if (!(area > 0)) throw ShapeError("grid encloses no area");
    const double f = std::sqrt(kReferenceVolume / area);
    for (double& v : values) v *= f;
    check_values(values);
    Shape s;
    s.family_ = ShapeFamily::RadialGrid;
    s.dim_ = 2;
    s.values_ = std::move(values);
    return s;
}

Shape Shape::radial_grid3(int n_polar, int n_azimuth, std::vector<double> values) {
    if (n_polar < 4 || n_azimuth < 8) throw ShapeError("d=3 grid too coarse (need >= 4 x 8)");
    if (values.size() != static_cast<std::size_t>(n_polar) * static_cast<std::size_t>(n_azimuth))
        throw ShapeError("grid value count does not match n_polar * n_azimuth");
    check_values(values);
    std::vector<double> nodes, weights;
    gauss_legendre(n_polar, nodes, weights);
    canonicalize_sphere(n_polar, n_azimuth, values, nodes, weights);
    const double vol = grid_moments3(n_polar, n_azimuth, values, nodes, weights).volume;
    if (!(vol > 0)) throw ShapeError("grid encloses no volume");
    const double f = std::cbrt(kReferenceVolume / vol);
    for (double& v : values) v *= f;
    check_values(values);
    Shape s;
    s.family_ = ShapeFamily::RadialGrid;
    s.dim_ = 3;
    s.n_polar_ = n_polar;
    s.n_azimuth_ = n_azimuth;
    s.values_ = std::move(values);
    s.polar_nodes_ = std::move(nodes);
    s.polar_weights_ = std::move(weights);
    return s;
}

int Shape::sides() const {
    if (family_ != ShapeFamily::RegularPolygon) throw ShapeError("not a polygon");
    return sides_;
}

const std::vector<double>& Shape::grid_values() const {
    if (family_ != ShapeFamily::RadialGrid) throw ShapeError("not a radial grid");
    return values_;
}

double Shape::body_radius(const Direction& dir) const {
    const Vec& w = dir.vec();
    switch (family_) {
        case ShapeFamily::Ball:
            return scale_;
        case ShapeFamily::RegularPolygon: {
            const double sector = kTwoPi / static_cast<double>(sides_);
            double th = std::atan2(w.y, w.x);
            if (th < 0) th += kTwoPi;
            const double local = th - sector * std::floor(th / sector);
            return scale_ * std::cos(M_PI / static_cast<double>(sides_)) /
                   std::cos(local - M_PI / static_cast<double>(sides_));
        }
        case ShapeFamily::Cuboctahedron: {
            const double c = scale_ / std::sqrt(2.0);
            const double linf = std::max({std::abs(w.x), std::abs(w.y), std::abs(w.z)});
            const double l1 = std::abs(w.x) + std::abs(w.y) + std::abs(w.z);
            return std::min(c / linf, 2.0 * c / l1);
        }
        case ShapeFamily::RadialGrid:
            if (dim_ == 2) {
                return interp_ring(values_, dir.angle());
            }
            return interp_sphere(n_polar_, n_azimuth_, values_, polar_nodes_, w);
    }
    throw ShapeError("unreachable");
}

double Shape::radius(const Direction& dir) const {
    if (pose_.offset.norm() > 1e-12)
        throw ShapeError("radial function about the origin is undefined for a translated shape");
    return body_radius(Direction(pose_.rot.apply_transposed(dir.vec())));
}

double Shape::max_radius() const {
    switch (family_) {
        case ShapeFamily::Ball: return scale_;
        case ShapeFamily::RegularPolygon: return scale_;
        case ShapeFamily::Cuboctahedron: return scale_;
        case ShapeFamily::RadialGrid: return *std::max_element(values_.begin(), values_.end());
    }
    throw ShapeError("unreachable");
}

double Shape::min_radius() const {
    switch (family_) {
        case ShapeFamily::Ball: return scale_;
        case ShapeFamily::RegularPolygon:
            return scale_ * std::cos(M_PI / static_cast<double>(sides_));
        case ShapeFamily::Cuboctahedron: return scale_ / std::sqrt(2.0);
        case ShapeFamily::RadialGrid: return *std::min_element(values_.begin(), values_.end());
    }
    throw ShapeError("unreachable");
}

double Shape::volume() const {
    switch (family_) {
        case ShapeFamily::Ball:
            return dim_ == 2 ? M_PI * scale_ * scale_
                             : 4.0 * M_PI / 3.0 * scale_ * scale_ * scale_;
        case ShapeFamily::RegularPolygon: {
            const double k = static_cast<double>(sides_);
            return 0.5 * k * scale_ * scale_ * std::sin(kTwoPi / k);
        }
        case ShapeFamily::Cuboctahedron:
            return 5.0 * std::sqrt(2.0) / 3.0 * scale_ * scale_ * scale_;
        case ShapeFamily::RadialGrid:
            return dim_ == 2 ? radial_grid_area(values_)
                             : grid_moments3(n_polar_, n_azimuth_, values_, polar_nodes_,
                                             polar_weights_)
                                   .volume;
    }
    throw ShapeError("unreachable");
}

bool Shape::is_canonical(double tol) const {
    if (!pose_.is_identity(tol)) return false;
    if (std::abs(volume() - reference_volume_) > tol) return false;
    if (family_ == ShapeFamily::RadialGrid) {
        const Vec c = dim_ == 2 ? grid_moments2(values_).centroid
                                : grid_moments3(n_polar_, n_azimuth_, values_, polar_nodes_,
                                                polar_weights_)
                                      .centroid;
        if (c.norm() > tol) return false;
    }
    return true;
}

Shape Shape::transformed(const Mat3& rotation, const Vec& translation) const {
    if (!rotation.is_rotation(1e-9)) throw ShapeError("transform is not a rotation");
    if (!translation.finite()) throw ShapeError("translation is not finite");
    if (dim_ == 2) {
        const bool planar = std::abs(rotation(0, 2)) < 1e-12 && std::abs(rotation(1, 2)) < 1e-12 &&
                            std::abs(rotation(2, 0)) < 1e-12 && std::abs(rotation(2, 1)) < 1e-12 &&
                            std::abs(rotation(2, 2) - 1.0) < 1e-12 && std::abs(translation.z) < 1e-12;
        if (!planar) throw ShapeError("d=2 shapes only admit in-plane motions");
    }
    Shape s = *this;
    s.pose_.rot = rotation.multiply(pose_.rot);
    s.pose_.offset = rotation.apply(pose_.offset) + translation;
    return s;
}

Shape Shape::transformed(double angle, const Vec& translation) const {
    return transformed(Mat3::rotation_z(angle), translation);
}

bool Shape::operator==(const Shape& o) const {
    return family_ == o.family_ && dim_ == o.dim_ && scale_ == o.scale_ && sides_ == o.sides_ &&
           n_polar_ == o.n_polar_ && n_azimuth_ == o.n_azimuth_ && values_ == o.values_ &&
           pose_.rot.m == o.pose_.rot.m && pose_.offset.x == o.pose_.offset.x &&
           pose_.offset.y == o.pose_.offset.y && pose_.offset.z == o.pose_.offset.z &&
           reference_volume_ == o.reference_volume_;
}

Shape canonicalize(const Shape& shape) {
    Shape s = shape;
    s.pose_ = Pose{};
    if (s.family_ == ShapeFamily::RadialGrid) {
        if (s.dim_ == 2) {
            canonicalize_ring_center(s.values_);
            canonicalize_ring_orientation(s.values_);
        } else {
            canonicalize_sphere(s.n_polar_, s.n_azimuth_, s.values_, s.polar_nodes_,
                                s.polar_weights_);
        }
        check_values(s.values_);
    }
    return s;
}

Shape normalize_to_volume(const Shape& shape, double target) {
    if (!(target > 0) || !std::isfinite(target)) throw ShapeError("target volume must be positive");
    const double vol = shape.volume();
    if (!(vol > 0)) throw ShapeError("shape has nonpositive volume");
    const double f = std::pow(target / vol, 1.0 / static_cast<double>(shape.dim_));
    Shape s = shape;
    if (s.min_radius() * f < kRadialFloor - kFloorSlack)
        throw ShapeError("normalizing to volume " + std::to_string(target) +
                         " would push the radial function below 1");
    s.scale_ *= f;
    for (double& v : s.values_) v *= f;
    s.pose_.offset = s.pose_.offset * f;
    s.reference_volume_ = target;
    return s;
}

double volume(const Shape& shape) { return shape.volume(); }

double representation_distance(const Shape& a, const Shape& b) {
    if (a.family() != b.family() || a.dim() != b.dim())
        throw ShapeError("representation distance: family/dimension mismatch");
    double d = std::abs(a.scale() - b.scale());
    if (a.family() == ShapeFamily::RadialGrid) {
        const auto& va = a.grid_values();
        const auto& vb = b.grid_values();
        if (va.size() != vb.size()) throw ShapeError("representation distance: grid size mismatch");
        for (std::size_t i = 0; i < va.size(); ++i) d = std::max(d, std::abs(va[i] - vb[i]));
    }
    if (a.family() == ShapeFamily::RegularPolygon && a.sides() != b.sides())
        throw ShapeError("representation distance: side count mismatch");
    for (int i = 0; i < 9; ++i)
        d = std::max(d, std::abs(a.pose().rot.m[static_cast<std::size_t>(i)] -
                                 b.pose().rot.m[static_cast<std::size_t>(i)]));
    d = std::max(d, (a.pose().offset - b.pose().offset).norm());
    return d;
}

Shape make_shape(const ShapeDescriptor& descriptor, int dim) {
    const std::string& t = descriptor.text;
    const auto colon = t.find(':');
    const std::string head = t.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : t.substr(colon + 1);
    auto want_dim = [&](int d) {
        if (dim != d)
            throw ShapeError("shape '" + t + "' requires dimension " + std::to_string(d) +
                             ", config has dimension " + std::to_string(dim));
    };
    if (head == "ball") return Shape::ball(dim);
    if (head == "disk") {
        want_dim(2);
        return Shape::ball(2);
    }
    if (head == "sphere") {
        want_dim(3);
        return Shape::ball(3);
    }
    if (head == "hexagon") {
        want_dim(2);
        return Shape::regular_polygon(6);
    }
    if (head == "polygon") {
        want_dim(2);
        int k = 0;
        try {
            k = std::stoi(arg);
        } catch (const std::exception&) {
            throw ShapeError("bad polygon side count '" + arg + "'");
        }
        return Shape::regular_polygon(k);
    }
    if (head == "cuboctahedron") {
        want_dim(3);
        return Shape::cuboctahedron();
    }
    if (head == "grid") {
        // ball sampled onto a grid of the requested resolution
        int m = 0;
        try {
            m = std::stoi(arg);
        } catch (const std::exception&) {
            throw ShapeError("bad grid resolution '" + arg + "'");
        }
        if (dim == 2) return Shape::radial_grid(std::vector<double>(static_cast<std::size_t>(m), 1.5));
        return Shape::radial_grid3(m, 2 * m,
                                   std::vector<double>(static_cast<std::size_t>(2 * m * m), 1.5));
    }
    throw ShapeError("unknown shape family '" + t + "'");
}

// ---- ScaledContainer ----

ScaledContainer::ScaledContainer(Shape shape, double target_volume)
    : shape_(std::move(shape)), volume_(target_volume) {
    if (!(target_volume > 0) || !std::isfinite(target_volume))
        throw ShapeError("container volume must be positive and finite");
    scale_ = std::pow(target_volume / shape_.reference_volume(),
                      1.0 / static_cast<double>(shape_.dim()));
}

bool ScaledContainer::contains(const Vec& point) const {
    Vec p = point / scale_;
    p = shape_.pose().rot.apply_transposed(p - shape_.pose().offset);
    const double n = shape_.dim() == 2 ? std::hypot(p.x, p.y) : p.norm();
    if (n < 1e-300) return true;
    return n <= shape_.body_radius(Direction(p));
}

double ScaledContainer::bounding_radius() const {
    return scale_ * (shape_.max_radius() + shape_.pose().offset.norm());
}

Vec sample_uniform_point(const ScaledContainer& container, Rng& rng) {
    const double rb = container.bounding_radius();
    const int d = container.dim();
    while (true) {
        const Vec dir = rng.unit_vector(d);
        const double u = rng.uniform();
        const double r = rb * (d == 2 ? std::sqrt(u) : std::cbrt(u));
        const Vec p = dir * r;
        if (container.contains(p)) return p;
    }
}

Mat3 random_rotation(Rng& rng, int dim) {
    if (dim == 2) return Mat3::rotation_z(rng.uniform(0.0, kTwoPi));
    // uniform quaternion
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& c : q) {
            c = rng.normal();
            n2 += c * c;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    Mat3 r;
    r(0, 0) = 1 - 2 * (y * y + z * z);
    r(0, 1) = 2 * (x * y - z * w);
    r(0, 2) = 2 * (x * z + y * w);
    r(1, 0) = 2 * (x * y + z * w);
    r(1, 1) = 1 - 2 * (x * x + z * z);
    r(1, 2) = 2 * (y * z - x * w);
    r(2, 0) = 2 * (x * z - y * w);
    r(2, 1) = 2 * (y * z + x * w);
    r(2, 2) = 1 - 2 * (x * x + y * y);
    return r;
}

}  // namespace wulffmc
