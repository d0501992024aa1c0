// SPDX-License-Identifier: Apache-2.0
#include "uavris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavris {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegenerateProjection = 1e-12;
}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

RotationMatrix RotationMatrix::roll(double a) {
    const double c = std::cos(a), s = std::sin(a);
    RotationMatrix r;
    r.m[0][0] = 1;
    r.m[0][1] = 0;
    r.m[0][2] = 0;
    r.m[1][0] = 0;
    r.m[1][1] = c;
    r.m[1][2] = -s;
    r.m[2][0] = 0;
    r.m[2][1] = s;
    r.m[2][2] = c;
    return r;
}

RotationMatrix RotationMatrix::pitch(double a) {
    const double c = std::cos(a), s = std::sin(a);
    RotationMatrix r;
    r.m[0][0] = c;
    r.m[0][1] = 0;
    r.m[0][2] = s;
    r.m[1][0] = 0;
    r.m[1][1] = 1;
    r.m[1][2] = 0;
    r.m[2][0] = -s;
    r.m[2][1] = 0;
    r.m[2][2] = c;
    return r;
}

RotationMatrix RotationMatrix::yaw(double a) {
    const double c = std::cos(a), s = std::sin(a);
    RotationMatrix r;
    r.m[0][0] = c;
    r.m[0][1] = -s;
    r.m[0][2] = 0;
    r.m[1][0] = s;
    r.m[1][1] = c;
    r.m[1][2] = 0;
    r.m[2][0] = 0;
    r.m[2][1] = 0;
    r.m[2][2] = 1;
    return r;
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
    RotationMatrix out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m[i][k] * o.m[k][j];
            out.m[i][j] = acc;
        }
    return out;
}

JitterAngles sample_jitter(double sigma_j, std::mt19937_64& rng) {
    if (!(sigma_j >= 0.0) || !std::isfinite(sigma_j))
        throw std::invalid_argument("sample_jitter: sigma_j must be finite and >= 0");
    if (sigma_j == 0.0) return {};
    std::normal_distribution<double> gauss(0.0, sigma_j);
    JitterAngles j;
    j.roll = gauss(rng);
    j.pitch = gauss(rng);
    j.yaw = gauss(rng);
    return j;
}

RotationMatrix rotation_from_jitter(const JitterAngles& j) {
    return RotationMatrix::yaw(j.yaw) * RotationMatrix::pitch(j.pitch) * RotationMatrix::roll(j.roll);
}

Vec3 rotate(const RotationMatrix& r, const Vec3& v) {
    return {r.m[0][0] * v.x + r.m[0][1] * v.y + r.m[0][2] * v.z,
            r.m[1][0] * v.x + r.m[1][1] * v.y + r.m[1][2] * v.z,
            r.m[2][0] * v.x + r.m[2][1] * v.y + r.m[2][2] * v.z};
}

LinkAngles recompute_angles(const Vec3& v, const Vec3& pole) {
    const double n = v.norm();
    if (n <= 0.0) throw std::invalid_argument("recompute_angles: zero-length vector");

    LinkAngles ang;
    const double cos_el = std::clamp(v.dot(pole) / n, -1.0, 1.0);
    ang.elevation = std::acos(cos_el);

    const double proj = std::sqrt(v.x * v.x + v.y * v.y);
    if (proj < kDegenerateProjection) {
        ang.azimuth = 0.0;
    } else {
        ang.azimuth = std::acos(std::clamp(v.x / proj, -1.0, 1.0));
    }
    return ang;
}

CVec steering_vector(const PlanarArrayGeometry& geom, const LinkAngles& ang, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("steering_vector: wavelength must be > 0");

    const double sin_az = std::sin(ang.azimuth);
    const double factor_first = sin_az * std::cos(ang.elevation);
    const double factor_second = sin_az * std::sin(ang.elevation);

    auto axis = [&](int count, double spacing, double factor) {
        CVec v(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double phase = -kTwoPi * spacing * i * factor / wavelength;
            v[static_cast<size_t>(i)] = i == 0 ? cdouble(1.0, 0.0) : std::polar(1.0, phase);
        }
        return v;
    };

    return kron(axis(geom.n_first, geom.spacing_first, factor_first),
                axis(geom.n_second, geom.spacing_second, factor_second));
}

std::vector<Vec3> ris_element_positions(const Vec3& center, const PlanarArrayGeometry& geom) {
    std::vector<Vec3> out;
    out.reserve(static_cast<size_t>(geom.count()));
    const double off_first = 0.5 * (geom.n_first - 1);
    const double off_second = 0.5 * (geom.n_second - 1);
    for (int i = 0; i < geom.n_first; ++i)
        for (int j = 0; j < geom.n_second; ++j)
            out.push_back({center.x + (i - off_first) * geom.spacing_first,
                           center.y + (j - off_second) * geom.spacing_second, center.z});
    return out;
}

}  // namespace uavris
