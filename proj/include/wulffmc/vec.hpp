#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace wulffmc {

// Cartesian point/vector. d=2 callers leave z at zero throughout.
struct Vec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec() = default;
    Vec(double x_, double y_, double z_ = 0.0) : x(x_), y(y_), z(z_) {}

    Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec operator-() const { return {-x, -y, -z}; }
    Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec cross(const Vec& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double distance2(const Vec& a, const Vec& b) { return (a - b).norm2(); }
inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

// Row-major 3x3 matrix; used for rotations.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    static Mat3 rotation_z(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    }

    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    Vec apply(const Vec& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    // transpose-apply: R^T v (inverse for rotations)
    Vec apply_transposed(const Vec& v) const {
        return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
                m[1] * v.x + m[4] * v.y + m[7] * v.z,
                m[2] * v.x + m[5] * v.y + m[8] * v.z};
    }

    Mat3 multiply(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    bool is_rotation(double tol = 1e-9) const {
        const Mat3 rtr = transposed().multiply(*this);
        double off = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                off = std::max(off, std::abs(rtr(i, j) - (i == j ? 1.0 : 0.0)));
        return off <= tol && std::abs(det() - 1.0) <= tol;
    }
};

// Unit vector on the direction sphere S^{d-1}; norm 1 within 1e-12.
class Direction {
  public:
    explicit Direction(const Vec& v) {
        if (!v.finite()) throw std::invalid_argument("direction has non-finite components");
        const double n = v.norm();
        if (n < 1e-300) throw std::invalid_argument("direction vector has zero length");
        v_ = v / n;
    }

    static Direction from_angle(double theta) {
        return Direction(Vec{std::cos(theta), std::sin(theta), 0.0}, unchecked{});
    }

    const Vec& vec() const { return v_; }
    double angle() const {  // d=2: angle in [0, 2*pi)
        double a = std::atan2(v_.y, v_.x);
        if (a < 0) a += 2.0 * M_PI;
        return a;
    }

  private:
    struct unchecked {};
    Direction(const Vec& v, unchecked) : v_(v) {}
    Vec v_;
};

}  // namespace wulffmc
