#include "gazemetry/geometry.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using namespace gazemetry;

namespace {

Vec3 random_point(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    return Vec3(dist(rng), dist(rng), dist(rng));
}

}  // namespace

TEST_CASE("midpoint_time is the arithmetic mean") {
    CHECK(midpoint_time(0.0, 10.0) == 5.0);
    CHECK(midpoint_time(100.0, 110.4) == doctest::Approx(105.2).epsilon(1e-12));
    CHECK_THROWS_AS(midpoint_time(10.0, 10.0), OrderingError);
    CHECK_THROWS_AS(midpoint_time(11.0, 10.0), OrderingError);
}

TEST_CASE("mean_position is the componentwise mean") {
    CHECK(mean_position(Vec3(0, 0, 0), Vec3(2, 4, 6)) == Vec3(1, 2, 3));
    const Vec3 p(3.5, -1.25, 600.0);
    CHECK(mean_position(p, p) == p);
    CHECK(mean_position(Vec3(-1, 0, 0), Vec3(1, 0, 0)) == Vec3(0, 0, 0));
    // expression arguments work too
    CHECK(mean_position(p + Vec3::Zero(), 2.0 * p) == 1.5 * p);
}

TEST_CASE("visual_angle basics") {
    const Vec3 eye(0, 0, 0);
    SUBCASE("right-triangle construction gives 1 degree") {
        const Vec3 g1(0, 0, 600);
        const Vec3 g2(0, 600.0 * std::tan(1.0 / kDegPerRad), 600);
        CHECK(visual_angle(eye, g1, g2).degrees() == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("identical gaze points give exactly zero") {
        const Vec3 g(12.5, -3.0, 610.0);
        CHECK(visual_angle(eye, g, g).degrees() == 0.0);
    }
    SUBCASE("orthogonal rays give 90 degrees") {
        CHECK(visual_angle(eye, Vec3(0, 0, 1), Vec3(0, 1, 0)).degrees() ==
              doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("opposite rays give 180 degrees") {
        CHECK(visual_angle(eye, Vec3(0, 0, 1), Vec3(0, 0, -1)).degrees() ==
              doctest::Approx(180.0).epsilon(1e-12));
    }
    SUBCASE("zero-length gaze vector is degenerate") {
        CHECK_THROWS_AS((void)visual_angle(eye, Vec3(0, 0, 0), Vec3(0, 0, 1)),
                        DegenerateGeometryError);
        CHECK_THROWS_AS((void)visual_angle(eye, Vec3(0, 0, 1), Vec3(1e-9, 0, 0)),
                        DegenerateGeometryError);
    }
}

TEST_CASE("visual_angle properties on random rays") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        const Vec3 eye = random_point(rng, 100.0);
        Vec3 g1 = random_point(rng, 500.0);
        Vec3 g2 = random_point(rng, 500.0);
        if ((g1 - eye).norm() < 1.0 || (g2 - eye).norm() < 1.0) {
            continue;
        }
        const double a12 = visual_angle(eye, g1, g2).degrees();
        const double a21 = visual_angle(eye, g2, g1).degrees();
        CHECK(a12 == a21);  // symmetric, bit-exact
        CHECK(a12 >= 0.0);
        CHECK(a12 <= 180.0);

        // invariant under uniform translation
        const Vec3 shift = random_point(rng, 1000.0);
        const double shifted =
            visual_angle((eye + shift).eval(), (g1 + shift).eval(), (g2 + shift).eval())
                .degrees();
        CHECK(shifted == doctest::Approx(a12).epsilon(1e-6));

        // invariant under rigid rotation about the eye
        const Eigen::AngleAxisd rot(0.7 + 0.001 * i, Vec3(1, 2, 3).normalized());
        const Vec3 r1 = eye + rot * (g1 - eye);
        const Vec3 r2 = eye + rot * (g2 - eye);
        CHECK(visual_angle(eye, r1, r2).degrees() == doctest::Approx(a12).epsilon(1e-6));
    }
}

TEST_CASE("angular_velocity") {
    CHECK(angular_velocity(Angle(0.5), 10.0).deg_per_s() == doctest::Approx(50.0));
    CHECK(angular_velocity(Angle(0.0), 3.7).deg_per_s() == 0.0);
    CHECK(angular_velocity(Angle(1.0), 10.0).deg_per_s() == doctest::Approx(100.0));
    CHECK_THROWS_AS(angular_velocity(Angle(1.0), 0.0), OrderingError);
    CHECK_THROWS_AS(angular_velocity(Angle(1.0), -5.0), OrderingError);

    // halving dt doubles the velocity
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle_dist(0.0, 180.0);
    std::uniform_real_distribution<double> dt_dist(0.1, 100.0);
    for (int i = 0; i < 200; ++i) {
        const Angle angle(angle_dist(rng));
        const double dt = dt_dist(rng);
        const double full = angular_velocity(angle, dt).deg_per_s();
        const double half = angular_velocity(angle, dt / 2.0).deg_per_s();
        CHECK(half == doctest::Approx(2.0 * full).epsilon(1e-12));
    }
}

TEST_CASE("binocular_velocity aggregation") {
    CHECK(binocular_velocity(Velocity(40.0), Velocity(60.0)).deg_per_s() == 50.0);
    CHECK(binocular_velocity(Velocity::invalid(), Velocity(60.0)).deg_per_s() == 60.0);
    CHECK(binocular_velocity(Velocity(40.0), Velocity::invalid()).deg_per_s() == 40.0);
    CHECK_FALSE(binocular_velocity(Velocity::invalid(), Velocity::invalid()).valid());

    // commutative
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        const Velocity a(dist(rng));
        const Velocity b(dist(rng));
        CHECK(binocular_velocity(a, b).deg_per_s() == binocular_velocity(b, a).deg_per_s());
    }
}

TEST_CASE("binocular_angle mirrors the velocity rule") {
    CHECK(binocular_angle(Angle(0.2), Angle(0.4))->degrees() == doctest::Approx(0.3));
    CHECK(binocular_angle(std::nullopt, Angle(0.4))->degrees() == 0.4);
    CHECK(binocular_angle(Angle(0.2), std::nullopt)->degrees() == 0.2);
    CHECK_FALSE(binocular_angle(std::nullopt, std::nullopt).has_value());
}

TEST_CASE("strong types reject out-of-domain values") {
    CHECK_THROWS_AS(Angle(-1.0), ConfigError);
    CHECK_THROWS_AS(Angle(180.5), ConfigError);
    CHECK_THROWS_AS(Angle(std::nan("")), ConfigError);
    CHECK_THROWS_AS(Velocity(-0.1), ConfigError);
    CHECK_THROWS_AS(Velocity(std::numeric_limits<double>::infinity()), ConfigError);
    CHECK_FALSE(Velocity().valid());
}
