#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "delab/quadrature.hpp"
#include "delab/thermo.hpp"

using delab::PressureLaw;

TEST_CASE("pressure law construction rejects gamma <= 1") {
    CHECK_THROWS_AS(PressureLaw(1.0), std::domain_error);
    CHECK_THROWS_AS(PressureLaw(0.5), std::domain_error);
    CHECK_THROWS_AS(PressureLaw(-2.0), std::domain_error);
    CHECK_NOTHROW(PressureLaw(1.0 + 1e-9));
}

TEST_CASE("pressure at reference states") {
    CHECK(PressureLaw(2).pressure(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(PressureLaw(3).pressure(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(PressureLaw(2).pressure(4.0) == doctest::Approx(0.03125).epsilon(1e-14));
    CHECK_THROWS_AS(PressureLaw(2).pressure(0.0), std::domain_error);
    CHECK_THROWS_AS(PressureLaw(2).pressure(-1.0), std::domain_error);
}

TEST_CASE("sound speed at reference states") {
    CHECK(PressureLaw(3).sound_speed(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(PressureLaw(3).sound_speed(2.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(PressureLaw(2).sound_speed(4.0) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK_THROWS_AS(PressureLaw(3).sound_speed(0.0), std::domain_error);
}

TEST_CASE("c(u)^2 equals -p'(u)") {
    for (double gamma : {1.2, 1.5, 2.0, 3.0, 4.5}) {
        PressureLaw law(gamma);
        for (double u = 1e-3; u < 1e3; u *= 3.7) {
            double c = law.sound_speed(u);
            CHECK(c * c == doctest::Approx(-law.dpressure(u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("eta closed form and limits") {
    CHECK(PressureLaw(3).eta(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(PressureLaw(3).eta(0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(PressureLaw(2).eta(4.0) == doctest::Approx(1.0).epsilon(1e-14));
    PressureLaw law(2.5);
    CHECK(law.eta(1e-8) > 1e4);
    CHECK(law.eta(1e8) < 1e-4);
    CHECK_THROWS_AS(law.eta(0.0), std::domain_error);
}

TEST_CASE("eta is the integral of c over [u, infinity)") {
    // Quadrature over [u, U_big] converges to eta(u) once the closed-form
    // tail eta(U_big) is below the 1e-6 check level.
    for (double gamma : {2.0, 3.0}) {
        PressureLaw law(gamma);
        double u_big = law.eta_inverse(1e-7);
        for (double u : {0.5, 1.0, 2.0}) {
            double quad = delab::integrate_adaptive(
                [&](double xi) { return law.sound_speed(xi); }, u, u_big, 1e-9);
            CHECK(std::fabs(quad - law.eta(u)) < 1e-6);
        }
    }
}

TEST_CASE("eta_inverse round trips") {
    CHECK(PressureLaw(3).eta_inverse(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(PressureLaw(3).eta_inverse(2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(PressureLaw(2).eta_inverse(1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(PressureLaw(2).eta_inverse(0.0), std::domain_error);
    for (double gamma : {1.4, 2.0, 3.0, 5.0}) {
        PressureLaw law(gamma);
        for (double e = 1e-4; e < 1e4; e *= 9.7) {
            CHECK(law.eta(law.eta_inverse(e)) == doctest::Approx(e).epsilon(1e-12));
        }
    }
}

TEST_CASE("sound_speed_from_eta matches the two-step route") {
    for (double gamma : {1.5, 2.0, 3.0}) {
        PressureLaw law(gamma);
        for (double u = 1e-2; u < 1e2; u *= 2.9) {
            CHECK(law.sound_speed_from_eta(law.eta(u)) ==
                  doctest::Approx(law.sound_speed(u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("theta values and branches") {
    CHECK(PressureLaw(3).theta(1.0) == doctest::Approx(0.0));
    CHECK(PressureLaw(3).theta(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(PressureLaw(2).theta(16.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(PressureLaw(2).theta(-1.0), std::domain_error);
}

TEST_CASE("theta derivative equals sqrt(c)") {
    for (double gamma : {1.5, 2.0, 2.5, 3.0, 4.0}) {
        PressureLaw law(gamma);
        for (double u : {0.3, 1.0, 2.0, 7.0}) {
            double h = 1e-6 * u;
            double fd = (law.theta(u + h) - law.theta(u - h)) / (2 * h);
            CHECK(fd == doctest::Approx(std::sqrt(law.sound_speed(u))).epsilon(1e-6));
        }
    }
}

TEST_CASE("theta is continuous across the gamma = 3 branch") {
    // Normalized difference theta(u) - theta(1) removes the branch constant.
    PressureLaw at3(3.0);
    for (double eps : {1e-8, -1e-8}) {
        PressureLaw near3(3.0 + eps);
        for (double u : {0.2, 0.7, 1.0, 3.0, 20.0}) {
            double norm_diff = near3.theta(u) - near3.theta(1.0);
            CHECK(norm_diff == doctest::Approx(at3.theta(u)).epsilon(1e-6));
        }
    }
}

TEST_CASE("riemann transforms at reference states") {
    PressureLaw g3(3.0);
    auto [r1, s1] = g3.to_riemann(1.0, 0.0);
    CHECK(r1 == doctest::Approx(-1.0));
    CHECK(s1 == doctest::Approx(1.0));
    auto [r2, s2] = g3.to_riemann(1.0, 2.0);
    CHECK(r2 == doctest::Approx(1.0));
    CHECK(s2 == doctest::Approx(3.0));
    PressureLaw g2(2.0);
    auto [r3, s3] = g2.to_riemann(4.0, 0.5);
    CHECK(r3 == doctest::Approx(-0.5));
    CHECK(s3 == doctest::Approx(1.5));

    auto [u1, v1] = g3.from_riemann(-1.0, 1.0);
    CHECK(u1 == doctest::Approx(1.0));
    CHECK(v1 == doctest::Approx(0.0));
    auto [u2, v2] = g3.from_riemann(1.0, 3.0);
    CHECK(u2 == doctest::Approx(1.0));
    CHECK(v2 == doctest::Approx(2.0));
    CHECK_THROWS_AS(g3.from_riemann(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(g3.from_riemann(1.0, 0.5), std::domain_error);
}

TEST_CASE("riemann round trip over the admissible box") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> log_u(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> vdist(-50.0, 50.0);
    std::uniform_real_distribution<double> gdist(1.1, 4.0);
    for (int i = 0; i < 500; ++i) {
        PressureLaw law(gdist(rng));
        double u = std::exp(log_u(rng));
        double v = vdist(rng);
        auto [r, s] = law.to_riemann(u, v);
        CHECK(s - r > 0.0);
        auto [ub, vb] = law.from_riemann(r, s);
        CHECK(ub == doctest::Approx(u).epsilon(1e-10));
        CHECK(vb == doctest::Approx(v).epsilon(1e-10));
    }
}
