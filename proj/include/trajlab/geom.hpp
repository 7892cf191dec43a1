#pragma once

#include <cmath>

namespace trajlab {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& v) const { return {x + v.x, y + v.y, z + v.z}; }
    Vec3 operator-(const Vec3& v) const { return {x - v.x, y - v.y, z - v.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    Vec3& operator+=(const Vec3& v) { x += v.x; y += v.y; z += v.z; return *this; }
    Vec3& operator-=(const Vec3& v) { x -= v.x; y -= v.y; z -= v.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& v) const { return x * v.x + y * v.y + z * v.z; }

    Vec3 cross(const Vec3& v) const {
        return {y * v.z - z * v.y, z * v.x - x * v.z, x * v.y - y * v.x};
    }

    double squared_norm() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(squared_norm()); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Unit quaternion for rigid-body orientation (w + xi + yj + zk).
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    Quat operator*(const Quat& q) const {
        return {w * q.w - x * q.x - y * q.y - z * q.z,
                w * q.x + x * q.w + y * q.z - z * q.y,
                w * q.y - x * q.z + y * q.w + z * q.x,
                w * q.z + x * q.y - y * q.x + z * q.w};
    }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    /// Rotate a vector by this quaternion (assumed normalized).
    Vec3 rotate(const Vec3& v) const {
        // v' = v + 2 u x (u x v + w v), u = (x, y, z)
        Vec3 u{x, y, z};
        Vec3 t = u.cross(v) * 2.0;
        return v + t * w + u.cross(t);
    }

    bool finite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    /// Rotation from extrinsic x-y-z Euler angles: R = Rz(c) Ry(b) Rx(a).
    static Quat from_euler_xyz(double a, double b, double c) {
        Quat qx{std::cos(a / 2), std::sin(a / 2), 0, 0};
        Quat qy{std::cos(b / 2), 0, std::sin(b / 2), 0};
        Quat qz{std::cos(c / 2), 0, 0, std::sin(c / 2)};
        return (qz * qy * qx).normalized();
    }

    /// First-order integration under a constant world-frame angular velocity.
    Quat integrated(const Vec3& omega, double dt) const {
        if (omega.x == 0.0 && omega.y == 0.0 && omega.z == 0.0) return *this;
        Quat dq = Quat{0.0, omega.x, omega.y, omega.z} * (*this);
        Quat q{w + 0.5 * dt * dq.w, x + 0.5 * dt * dq.x,
               y + 0.5 * dt * dq.y, z + 0.5 * dt * dq.z};
        return q.normalized();
    }
};

}  // namespace trajlab
