// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <vector>

#include "uavris/linalg.hpp"

namespace uavris {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

inline constexpr Vec3 kUnitX{1.0, 0.0, 0.0};
inline constexpr Vec3 kUnitZ{0.0, 0.0, 1.0};

// Roll/pitch/yaw deviations about the x/y/z axes, in radians.
struct JitterAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
};

struct RotationMatrix {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static RotationMatrix roll(double a);
    static RotationMatrix pitch(double a);
    static RotationMatrix yaw(double a);

    RotationMatrix operator*(const RotationMatrix& o) const;
};

// Azimuth measured from +x in the xy-plane, elevation measured from the pole
// axis; both obtained through arccos, so both live in [0, pi].
struct LinkAngles {
    double azimuth = 0.0;
    double elevation = 0.0;
};

// Uniform planar array: counts and spacings along its two axes.
struct PlanarArrayGeometry {
    int n_first = 1;
    int n_second = 1;
    double spacing_first = 0.0;
    double spacing_second = 0.0;

    int count() const { return n_first * n_second; }
};

// Three independent zero-mean Gaussian draws with standard deviation sigma_j.
JitterAngles sample_jitter(double sigma_j, std::mt19937_64& rng);

// Composite rotation yaw(dz) * pitch(dy) * roll(dx).
RotationMatrix rotation_from_jitter(const JitterAngles& j);

Vec3 rotate(const RotationMatrix& r, const Vec3& v);

// Elevation against the given pole (+e_z or -e_z) and azimuth of the
// xy-projection against e_x. A degenerate projection (norm < 1e-12) yields
// azimuth 0.
LinkAngles recompute_angles(const Vec3& v, const Vec3& pole);

// Planar-array steering vector: Kronecker product of the two axis responses,
// with per-element phase -j*2*pi*spacing*index*factor/lambda, where the factor
// is sin(az)cos(el) on the first axis and sin(az)sin(el) on the second.
CVec steering_vector(const PlanarArrayGeometry& geom, const LinkAngles& ang, double wavelength);

// Element coordinates on a centered rectangular grid in the horizontal plane
// at the center's altitude, row-major in the first axis.
std::vector<Vec3> ris_element_positions(const Vec3& center, const PlanarArrayGeometry& geom);

}  // namespace uavris
