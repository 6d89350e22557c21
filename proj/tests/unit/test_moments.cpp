#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rzero/error.hpp"
#include "rzero/moments.hpp"

using namespace rzero;

namespace {

std::vector<cplx> e1(int k) {
    std::vector<cplx> u(static_cast<std::size_t>(k), 0.0);
    u[0] = 1.0;
    return u;
}

// int_0^inf |log x|^nu w(x) dx, split at the kink x = 1
double log_integral(double nu, const std::function<double(double)>& w) {
    return oracle::tanh_sinh([&](double x) { return x <= 0 ? 0.0 : std::pow(-std::log(x), nu) * w(x); }, 0.0, 1.0) +
           oracle::half_line([&](double x) { return std::pow(std::log(x), nu) * w(x); }, 1.0);
}

}  // namespace

TEST_CASE("log_moment_mc examples") {
    const auto cube = log_moment_mc({CoefficientEnsemble::uniform_unit_cube(), 1, {1.0}, 1.0}, 100000, 1);
    CHECK(std::fabs(cube.mean - 1.0) <= 3.0 * cube.se);
    CHECK(cube.discarded == 0);

    const auto sph = log_moment_mc({CoefficientEnsemble::sphere_uniform(), 2, e1(2), 1.0}, 100000, 2);
    CHECK(std::fabs(sph.mean - std::log(2.0)) <= 3.0 * sph.se);

    const double rg_oracle = 2.0 / std::sqrt(std::numbers::pi) * log_integral(1.0, [](double x) { return std::exp(-x * x); });
    const auto rg = log_moment_mc({CoefficientEnsemble::real_gaussian(), 1, {1.0}, 1.0}, 100000, 3);
    CHECK(std::fabs(rg.mean - rg_oracle) <= 3.0 * rg.se);

    CHECK_THROWS_AS(log_moment_mc({CoefficientEnsemble::real_gaussian(), 2, {1.0, 1.0}, 1.0}, 10, 1), ContractError);
    CHECK_THROWS_AS(log_moment_mc({CoefficientEnsemble::real_gaussian(), 1, {1.0}, 0.5}, 10, 1), ParameterError);
}

TEST_CASE("log_moment_mc is thread-count independent") {
    const MomentQuery q{CoefficientEnsemble::radial(1.0), 5, e1(5), 2.0};
    const auto a = log_moment_mc(q, 3000, 9, 1), b = log_moment_mc(q, 3000, 9, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.se == b.se);
}

TEST_CASE("real Gaussian bound") {
    const double q1 = log_integral(1.0, [](double x) { return std::exp(-x * x); });
    CHECK(bound_real_gaussian(1.0).value == doctest::Approx(4.0 * q1 + 2.0).epsilon(1e-10));
    double prev = 0.0;
    for (double nu : {1.0, 2.0, 3.0}) {
        const auto b = bound_real_gaussian(nu);
        CHECK(b.value >= std::pow(2.0, nu));
        CHECK(b.value > prev);
        prev = b.value;
        for (const auto& [name, v] : b.constituents) CHECK((std::isfinite(v) && v >= 0.0));
    }
}

TEST_CASE("radial bound") {
    const double alpha = 1.0, nu = 1.0;
    const double c0 = 2.0 * std::tgamma(alpha + 0.5) / (std::sqrt(std::numbers::pi) * std::tgamma(alpha));
    const double C = c0 * log_integral(nu, [&](double y) { return std::pow(1 + y * y, -alpha - 0.5); });
    const double Cp = c0 * (oracle::tanh_sinh([&](double x) { return std::pow(-std::log(x), nu) * std::pow(x, -2 * alpha - 1); }, 1.0 / std::sqrt(2.0), 1.0) +
                            oracle::half_line([&](double x) { return std::pow(std::log(x), nu) * std::pow(x, -2 * alpha - 1); }, 1.0));
    const auto b = bound_radial(alpha, nu);
    CHECK(b.value == doctest::Approx(std::pow(2.0, 2 * nu - 1) * C + std::pow(2.0, nu - 1) * Cp + std::pow(2.0, nu)).epsilon(1e-9));
    CHECK(b.constituents.at("C_alpha_nu") == doctest::Approx(C).epsilon(1e-9));
    for (double a : {0.5, 1.0, 3.0})
        for (double n : {1.0, 2.0}) CHECK(bound_radial(a, n).value >= std::pow(2.0, n));
    for (int k : {1, 2, 5}) {
        const auto est = log_moment_mc({CoefficientEnsemble::radial(1.0), k, e1(k), 1.0}, 100000, 10 + k);
        CHECK(est.mean <= b.value + 3.0 * est.se);
    }
    CHECK_THROWS_AS(bound_radial(0.0, 1.0), ParameterError);
}

TEST_CASE("Wallis constant") {
    for (int k : {0, 1, 2, 5, 17}) {
        const double direct = oracle::tanh_sinh([k](double t) { return std::pow(std::cos(t), k); }, 0.0, std::numbers::pi / 2);
        CHECK(wallis_integral(k) == doctest::Approx(direct).epsilon(1e-12));
    }
    double best = 1e300;
    for (int k = 1; k <= 200; ++k) best = std::min(best, wallis_integral(k) * std::sqrt(k));
    CHECK(wallis_constant_A(200) == doctest::Approx(best));
    CHECK(wallis_constant_A() == doctest::Approx(1.0));
}

TEST_CASE("sphere bound") {
    const auto s = CoefficientEnsemble::sphere_uniform();
    for (auto [k, nu] : {std::pair{10, 1.0}, std::pair{100, 2.0}}) {
        Rng rng(5, static_cast<std::uint64_t>(k));
        const auto est = log_moment_mc({s, k, random_unit_direction(k, rng), nu}, 100000, 20 + k);
        CHECK(est.mean <= bound_sphere(k, nu).value + 3.0 * est.se);
    }
    CHECK(bound_sphere(10000, 1.0).value / bound_sphere(100, 1.0).value <= std::log(1e4) / std::log(1e2) * 1.5);
    CHECK_THROWS_AS(bound_sphere(2, 1.0), DomainError);
    CHECK_THROWS_AS(stated_bound(s, 2, 1.0), DomainError);
}

TEST_CASE("i.i.d. bound") {
    const auto d = TabulatedDensity::tent();
    const double rho = d.tail_rho(), c = d.tail_c(), M = d.bound();
    for (int k : {1, 5, 20, 1000})
        for (double nu : {1.0, 1.5}) {
            const auto b = bound_iid(k, nu, rho, c, M);
            CHECK(b.value >= 4.0 * std::sqrt(2.0) * M * std::pow(nu, nu));
            CHECK(bound_iid(4 * k, nu, rho, c, M).value / b.value <= std::pow(4.0, nu / rho) * 1.2);
        }
    const auto est = log_moment_mc({CoefficientEnsemble::iid(d), 20, e1(20), 1.0}, 100000, 31);
    CHECK(est.mean <= bound_iid(20, 1.0, rho, c, M).value + 3.0 * est.se);
    CHECK_THROWS_AS(bound_iid(20, 2.0, 2.0, c, M), DomainError);
    CHECK(stated_bound(CoefficientEnsemble::iid(d), 20, 1.0).value == bound_iid(20, 1.0, rho, c, M).value);
}

TEST_CASE("unit cube bound") {
    CHECK(bound_uniform_cube(1, 1.0).value == 6.0);
    const auto est = log_moment_mc({CoefficientEnsemble::uniform_unit_cube(), 50, e1(50), 1.0}, 100000, 41);
    CHECK(est.mean <= 6.0 + std::log(50.0) + 3.0 * est.se);
    CHECK(1.0 <= bound_uniform_cube(1, 1.0).value);
    for (int k : {1, 3, 50, 1000})
        for (double nu : {1.0, 2.0, 3.0})
            CHECK(bound_uniform_cube(k, nu).value >= std::pow(std::log(double(k)), nu) + 4.0 * std::sqrt(2.0) * std::pow(nu, nu));
    CHECK_THROWS_AS(stated_bound(CoefficientEnsemble::complex_gaussian(), 3, 1.0), DomainError);
}

TEST_CASE("direction independence under rotation invariance") {
    for (const auto& e : {CoefficientEnsemble::real_gaussian(), CoefficientEnsemble::radial(1.0), CoefficientEnsemble::sphere_uniform()}) {
        Rng rng(8, 0);
        const auto u1 = random_unit_direction(4, rng, true), u2 = random_unit_direction(4, rng, true);
        const auto a = log_moment_mc({e, 4, u1, 1.0}, 50000, 51), b = log_moment_mc({e, 4, u2, 1.0}, 50000, 52);
        CHECK(std::fabs(a.mean - b.mean) <= 4.0 * std::hypot(a.se, b.se));
    }
}

TEST_CASE("random_unit_direction") {
    Rng rng(1, 1);
    for (int k : {1, 3, 40}) {
        for (bool real : {false, true}) {
            const auto u = random_unit_direction(k, rng, real);
            double n2 = 0.0;
            for (auto v : u) {
                n2 += std::norm(v);
                if (real) CHECK(v.imag() == 0.0);
            }
            CHECK(std::fabs(n2 - 1.0) <= 1e-14);
        }
    }
}

TEST_CASE("direction-splitting inequality checks") {
    const auto sphere = lemma41_check(CoefficientEnsemble::sphere_uniform(), e1(5), 1.0, 50000, 61);
    CHECK(sphere.ball_applicable);
    CHECK(sphere.ball_holds);
    CHECK(sphere.holds);

    const double h = 1.0 / std::sqrt(2.0);
    std::vector<cplx> u{cplx(h, 0.0), cplx(0.0, h), 0.0};
    const auto rg = lemma41_check(CoefficientEnsemble::real_gaussian(), u, 1.0, 50000, 62);
    CHECK(rg.holds);
    CHECK_FALSE(rg.ball_applicable);

    const auto one = lemma41_check(CoefficientEnsemble::real_gaussian(), {1.0}, 1.0, 50000, 63);
    CHECK(one.K.mean == 0.0);
    CHECK(one.holds);

    // |s| < |t| is rotated into |s| >= |t|
    const auto swapped = lemma41_check(CoefficientEnsemble::real_gaussian(), {cplx(0.0, 1.0), 0.0, 0.0}, 2.0, 20000, 64);
    CHECK(swapped.K.mean == 0.0);
    CHECK(swapped.holds);

    CHECK_THROWS_AS(lemma41_check(CoefficientEnsemble::uniform_unit_cube(), e1(3), 1.0, 100, 1), DomainError);
}

TEST_CASE("truncated log-integral inequality") {
    const auto a = lemma45_check(1.0, 0.0, 0.25);
    CHECK(a.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.rhs == doctest::Approx(4.0 / std::numbers::e * 0.5 + 2.0 * std::log(4.0) / std::sqrt(1.5)).epsilon(1e-14));
    CHECK(a.holds);

    const auto b = lemma45_check(1.0, 100.0, 0.01);
    const double oracle_lhs = oracle::tanh_sinh([](double x) { return -std::log(x) * std::pow(1 - x * x, 100); }, 0.0, 1.0);
    CHECK(b.lhs == doctest::Approx(oracle_lhs).epsilon(1e-9));
    CHECK(b.holds);

    for (double nu : {1.0, 2.0, 3.0})
        for (double bb : {0.0, 1.0, 10.0, 100.0})
            for (double tau : {0.5, 0.1, 0.01}) {
                const auto r = lemma45_check(nu, bb, tau);
                CHECK(r.holds);
                // nu = integer, b = 0: int_0^1 (-log x)^nu dx = nu!
                if (bb == 0.0) CHECK(r.lhs == doctest::Approx(std::tgamma(nu + 1.0)).epsilon(1e-12));
            }
    CHECK_THROWS_AS(lemma45_check(1.0, 1.0, 1.0), ParameterError);
}
