// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>
#include <numeric>
#include <random>

#include "uavris/geometry.hpp"

using namespace uavris;

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_orthonormal(const RotationMatrix& r, double tol) {
    // R^T R == I entrywise
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += r.m[k][i] * r.m[k][j];
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(acc - expect) > tol) return false;
        }
    return true;
}

double det3(const RotationMatrix& r) {
    const auto& m = r.m;
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}
}  // namespace

TEST_CASE("sample_jitter degenerate and determinism") {
    std::mt19937_64 rng(7);
    auto j = sample_jitter(0.0, rng);
    CHECK(j.roll == 0.0);
    CHECK(j.pitch == 0.0);
    CHECK(j.yaw == 0.0);

    std::mt19937_64 a(42), b(42);
    auto ja = sample_jitter(0.1, a);
    auto jb = sample_jitter(0.1, b);
    CHECK(ja.roll == jb.roll);
    CHECK(ja.pitch == jb.pitch);
    CHECK(ja.yaw == jb.yaw);

    CHECK_THROWS_AS(sample_jitter(-0.1, rng), std::invalid_argument);
}

TEST_CASE("sample_jitter Monte-Carlo moments") {
    std::mt19937_64 rng(123);
    const int n = 100000;
    std::vector<double> roll(n), pitch(n), yaw(n);
    for (int i = 0; i < n; ++i) {
        auto j = sample_jitter(0.1, rng);
        roll[i] = j.roll;
        pitch[i] = j.pitch;
        yaw[i] = j.yaw;
    }
    auto sample_std = [](const std::vector<double>& v) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return std::sqrt(acc / (v.size() - 1));
    };
    for (const auto* comp : {&roll, &pitch, &yaw}) {
        const double s = sample_std(*comp);
        CHECK(s > 0.095);
        CHECK(s < 0.105);
    }
}

TEST_CASE("rotation_from_jitter basics") {
    auto id = rotation_from_jitter({0.0, 0.0, 0.0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id.m[i][j] == (i == j ? 1.0 : 0.0));

    // pure yaw by pi/2 maps +x to +y
    auto r = rotation_from_jitter({0.0, 0.0, kPi / 2});
    auto v = rotate(r, {1.0, 0.0, 0.0});
    CHECK(std::abs(v.x) < 1e-15);
    CHECK(v.y == doctest::Approx(1.0));
    CHECK(std::abs(v.z) < 1e-15);
}

TEST_CASE("rotation_from_jitter matches explicit composition order") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 50; ++t) {
        JitterAngles j{u(rng), u(rng), u(rng)};
        auto composed = rotation_from_jitter(j);
        auto manual = RotationMatrix::yaw(j.yaw) * RotationMatrix::pitch(j.pitch) * RotationMatrix::roll(j.roll);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) CHECK(composed.m[a][b] == manual.m[a][b]);
    }
}

TEST_CASE("random rotations are orthonormal with determinant one") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 1000; ++t) {
        auto j = sample_jitter(0.3, rng);
        auto r = rotation_from_jitter(j);
        CHECK(is_orthonormal(r, 1e-9));
        CHECK(det3(r) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("rotate preserves norm and fixes identity") {
    auto id = rotation_from_jitter({0.0, 0.0, 0.0});
    auto v = rotate(id, {3.0, 4.0, 0.0});
    CHECK(v.x == 3.0);
    CHECK(v.y == 4.0);
    CHECK(v.z == 0.0);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int t = 0; t < 200; ++t) {
        auto r = rotation_from_jitter(sample_jitter(0.5, rng));
        Vec3 w{u(rng), u(rng), u(rng)};
        CHECK(rotate(r, w).norm() == doctest::Approx(w.norm()).epsilon(1e-9));
    }
}

TEST_CASE("recompute_angles hand values") {
    auto a = recompute_angles({0.0, 0.0, 1.0}, kUnitZ);
    CHECK(a.elevation == 0.0);
    CHECK(a.azimuth == 0.0);  // degenerate xy-projection

    auto b = recompute_angles({1.0, 0.0, 0.0}, kUnitZ);
    CHECK(b.elevation == doctest::Approx(kPi / 2));
    CHECK(b.azimuth == 0.0);

    auto c = recompute_angles({1.0, 1.0, 0.0}, kUnitZ);
    CHECK(c.elevation == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(c.azimuth == doctest::Approx(kPi / 4).epsilon(1e-12));

    // pole -e_z flips elevation
    auto d = recompute_angles({0.0, 0.0, -2.0}, kUnitZ * -1.0);
    CHECK(d.elevation == 0.0);

    CHECK_THROWS_AS(recompute_angles({0.0, 0.0, 0.0}, kUnitZ), std::invalid_argument);
}

TEST_CASE("recompute_angles invariant to positive scaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> s(0.1, 100.0);
    for (int t = 0; t < 200; ++t) {
        Vec3 v{u(rng), u(rng), u(rng)};
        if (v.norm() < 1e-6) continue;
        const double k = s(rng);
        auto a0 = recompute_angles(v, kUnitZ);
        auto a1 = recompute_angles(v * k, kUnitZ);
        CHECK(a1.azimuth == doctest::Approx(a0.azimuth).epsilon(1e-10));
        CHECK(a1.elevation == doctest::Approx(a0.elevation).epsilon(1e-10));
    }
}

TEST_CASE("steering vector hand values and structure") {
    const double lambda = 0.125;

    PlanarArrayGeometry single{1, 1, lambda / 2, lambda / 2};
    auto sv = steering_vector(single, {0.7, 1.1}, lambda);
    REQUIRE(sv.size() == 1);
    CHECK(sv[0] == cdouble(1.0, 0.0));

    // two elements, half-wavelength spacing, azimuth pi/2, elevation 0:
    // first-axis factor = sin(pi/2)cos(0) = 1 -> second entry exp(-j*pi) = -1
    PlanarArrayGeometry two{2, 1, lambda / 2, lambda / 2};
    auto sv2 = steering_vector(two, {kPi / 2, 0.0}, lambda);
    REQUIRE(sv2.size() == 2);
    CHECK(sv2[0] == cdouble(1.0, 0.0));
    CHECK(sv2[1].real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(sv2[1].imag()) < 1e-12);
}

TEST_CASE("steering vector unit modulus and Kronecker layout") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, kPi);
    const double lambda = 0.125;
    PlanarArrayGeometry geom{4, 3, lambda / 2, lambda / 2};
    for (int t = 0; t < 100; ++t) {
        LinkAngles ang{u(rng), u(rng)};
        auto sv = steering_vector(geom, ang, lambda);
        REQUIRE(static_cast<int>(sv.size()) == geom.count());
        CHECK(sv[0] == cdouble(1.0, 0.0));
        for (const auto& e : sv) CHECK(std::abs(e) == doctest::Approx(1.0).epsilon(1e-12));

        // flat index (i * n_second + j) factors into the two axis responses
        PlanarArrayGeometry first_only{geom.n_first, 1, geom.spacing_first, geom.spacing_second};
        PlanarArrayGeometry second_only{1, geom.n_second, geom.spacing_first, geom.spacing_second};
        auto a = steering_vector(first_only, ang, lambda);
        auto b = steering_vector(second_only, ang, lambda);
        for (int i = 0; i < geom.n_first; ++i)
            for (int j = 0; j < geom.n_second; ++j) {
                auto prod = a[i] * b[j];
                auto got = sv[static_cast<size_t>(i) * geom.n_second + j];
                CHECK(std::abs(got - prod) < 1e-12);
            }
    }
}

TEST_CASE("collapsing one axis reduces the Kronecker product to the other axis") {
    const double lambda = 0.125;
    LinkAngles ang{1.0, 0.4};
    PlanarArrayGeometry row{5, 1, lambda / 2, lambda / 3};
    PlanarArrayGeometry grid{5, 1, lambda / 2, 0.77};  // second spacing irrelevant at count 1
    auto a = steering_vector(row, ang, lambda);
    auto b = steering_vector(grid, ang, lambda);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-15);
}

TEST_CASE("ris_element_positions centered grid") {
    Vec3 center{0.0, 0.0, 25.0};
    PlanarArrayGeometry one{1, 1, 0.06, 0.06};
    auto p1 = ris_element_positions(center, one);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0].x == 0.0);
    CHECK(p1[0].z == 25.0);

    PlanarArrayGeometry pair{2, 1, 0.06, 0.06};
    auto p2 = ris_element_positions(center, pair);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0].x == doctest::Approx(-0.03));
    CHECK(p2[1].x == doctest::Approx(0.03));
    CHECK(p2[0].y == 0.0);

    PlanarArrayGeometry grid{4, 4, 0.0625, 0.0625};
    auto pg = ris_element_positions({3.0, -2.0, 25.0}, grid);
    REQUIRE(pg.size() == 16);
    Vec3 mean{0, 0, 0};
    for (const auto& p : pg) mean = mean + p;
    mean = mean * (1.0 / 16.0);
    CHECK(mean.x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(mean.y == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(mean.z == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("zero jitter end-to-end reproduces nominal angles") {
    auto id = rotation_from_jitter({0.0, 0.0, 0.0});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int t = 0; t < 100; ++t) {
        Vec3 v{u(rng), u(rng), u(rng) + 25.0};
        if (v.norm() < 1e-9) continue;
        auto nominal = recompute_angles(v, kUnitZ);
        auto jittered = recompute_angles(rotate(id, v), kUnitZ);
        CHECK(jittered.azimuth == doctest::Approx(nominal.azimuth).epsilon(1e-12));
        CHECK(jittered.elevation == doctest::Approx(nominal.elevation).epsilon(1e-12));
    }
}
