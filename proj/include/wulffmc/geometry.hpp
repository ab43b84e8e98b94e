#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wulffmc/rng.hpp"
#include "wulffmc/vec.hpp"

namespace wulffmc {

// Every shape in the search space is normalized to this enclosed d-volume.
inline constexpr double kReferenceVolume = 10.0;
// Radial functions must stay at or above this floor.
inline constexpr double kRadialFloor = 1.0;

class ShapeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ShapeFamily { Ball, RegularPolygon, Cuboctahedron, RadialGrid };

std::string family_name(ShapeFamily family);

// Rigid placement of the body-frame region: x_world = rot * x_body + offset.
struct Pose {
    Mat3 rot = Mat3::identity();
    Vec offset{};

    bool is_identity(double tol = 1e-15) const;
};

// Star-shaped container shape: a radial function rho on the unit direction
// sphere with rho >= 1 everywhere and enclosed volume normalized to 10.
// Shapes are immutable; factories return the canonical representative
// (centroid at the origin, orientation fixed by canonicalize()).
//
// Analytic families (ball, regular polygon, cuboctahedron) evaluate rho in
// closed form; RadialGrid tabulates rho on a fixed quadrature grid:
//   d=2: M equally spaced angles, periodic linear interpolation
//   d=3: Gauss-Legendre nodes in cos(polar) x uniform azimuths, bilinear
//        interpolation in (theta, phi)
class Shape {
  public:
    // -- factories (canonicalized, volume normalized to kReferenceVolume) --
    static Shape ball(int dim);
    static Shape regular_polygon(int sides);                  // d=2
    static Shape cuboctahedron();                             // d=3
    static Shape radial_grid(std::vector<double> values);     // d=2
    static Shape radial_grid3(int n_polar, int n_azimuth, std::vector<double> values);

    ShapeFamily family() const { return family_; }
    int dim() const { return dim_; }

    // Radial function rho(alpha) in the world frame. Requires zero offset
    // (the radial description about the origin is only defined then).
    double radius(const Direction& dir) const;
    // Body-frame radial function (pose ignored).
    double body_radius(const Direction& dir) const;
    double max_radius() const;  // body-frame max of rho
    double min_radius() const;

    // Enclosed d-volume: closed form for analytic families, the fixed
    // quadrature rule for grids. Pose-invariant.
    double volume() const;

    const Pose& pose() const { return pose_; }
    bool is_canonical(double tol = 1e-9) const;

    // Exact Euclidean motion: acts on the pose, leaving body data untouched.
    Shape transformed(const Mat3& rotation, const Vec& translation) const;
    Shape transformed(double angle, const Vec& translation) const;  // d=2

    // family parameters
    double scale() const { return scale_; }  // ball radius / circumradius / edge length
    int sides() const;
    const std::vector<double>& grid_values() const;
    int grid_polar() const { return n_polar_; }
    int grid_azimuth() const { return n_azimuth_; }

    // volume the shape was normalized to (kReferenceVolume unless rescaled
    // through normalize_to_volume)
    double reference_volume() const { return reference_volume_; }

    bool operator==(const Shape& o) const;

    friend Shape canonicalize(const Shape& shape);
    friend Shape normalize_to_volume(const Shape& shape, double target);
    // record parser: restores a serialized shape without renormalizing
    friend class ShapeRecordAccess;

  private:
    Shape() = default;

    ShapeFamily family_ = ShapeFamily::Ball;
    int dim_ = 2;
    double scale_ = 1.0;       // analytic families
    int sides_ = 0;            // RegularPolygon
    int n_polar_ = 0;          // RadialGrid d=3
    int n_azimuth_ = 0;
    std::vector<double> values_;  // RadialGrid
    std::vector<double> polar_nodes_;    // d=3: Gauss-Legendre nodes in cos(theta)
    std::vector<double> polar_weights_;
    Pose pose_;
    double reference_volume_ = kReferenceVolume;
};

// Descriptor used by config files and the CLI: "ball", "disk", "sphere",
// "polygon:<k>", "hexagon", "cuboctahedron", "grid:<M>" (d=2 grid sampled
// from a ball, mostly for testing), "file:<path>" handled by the config layer.
struct ShapeDescriptor {
    std::string text;
};

Shape make_shape(const ShapeDescriptor& descriptor, int dim);

double volume(const Shape& shape);
Shape normalize_to_volume(const Shape& shape, double target = kReferenceVolume);
Shape canonicalize(const Shape& shape);

// distance between representations (same family/grids only); used by tests
double representation_distance(const Shape& a, const Shape& b);

// Shape scaled by lambda = (V / reference volume)^(1/d) so that the enclosed
// volume equals V.
class ScaledContainer {
  public:
    ScaledContainer(Shape shape, double target_volume);

    const Shape& shape() const { return shape_; }
    double target_volume() const { return volume_; }
    double linear_scale() const { return scale_; }
    int dim() const { return shape_.dim(); }

    bool contains(const Vec& point) const;
    // every point of the container lies within this distance of the origin
    double bounding_radius() const;

    ScaledContainer with_volume(double new_volume) const { return {shape_, new_volume}; }

  private:
    Shape shape_;
    double volume_;
    double scale_;
};

Vec sample_uniform_point(const ScaledContainer& container, Rng& rng);

// quadrature volume of raw d=2 grid values (exact for the interpolant);
// exposed for convergence tests
double radial_grid_area(std::span<const double> values);
// quadrature volume of raw d=3 grid values
double radial_grid_volume3(int n_polar, int n_azimuth, std::span<const double> values);

// centroid of the region described by raw grid values about the star center
Vec radial_grid_centroid(std::span<const double> values);
Vec radial_grid_centroid3(int n_polar, int n_azimuth, std::span<const double> values);

// Gauss-Legendre nodes/weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// random rotation matrix (Haar-ish via quaternion), used by tests and tools
Mat3 random_rotation(Rng& rng, int dim);

}  // namespace wulffmc
