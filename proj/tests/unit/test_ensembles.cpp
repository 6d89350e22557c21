#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rzero/ensembles.hpp"
#include "rzero/error.hpp"

using namespace rzero;

namespace {

std::vector<CoefficientEnsemble> real_ensembles() {
    return {CoefficientEnsemble::real_gaussian(), CoefficientEnsemble::radial(1.0),
            CoefficientEnsemble::sphere_uniform(), CoefficientEnsemble::iid(TabulatedDensity::tent()),
            CoefficientEnsemble::uniform_unit_cube()};
}

}  // namespace

TEST_CASE("sphere draws are real unit vectors") {
    const auto e = CoefficientEnsemble::sphere_uniform();
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto a = sample_coefficients(e, 3, 7, s);
        double n2 = 0.0;
        for (auto v : a) {
            CHECK(v.imag() == 0.0);
            n2 += std::norm(v);
        }
        CHECK(std::fabs(std::sqrt(n2) - 1.0) <= 1e-12);
    }
}

TEST_CASE("unit cube draws lie in [0,1]") {
    const auto e = CoefficientEnsemble::uniform_unit_cube();
    for (std::uint64_t s = 0; s < 200; ++s)
        for (auto v : sample_coefficients(e, 5, 3, s)) {
            CHECK(v.real() >= 0.0);
            CHECK(v.real() <= 1.0);
            CHECK(v.imag() == 0.0);
        }
}

TEST_CASE("every real ensemble is supported in R^k") {
    for (const auto& e : real_ensembles()) {
        CHECK(e.real_supported());
        for (std::uint64_t s = 0; s < 100; ++s)
            for (auto v : sample_coefficients(e, 4, 11, s)) CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("real Gaussian second moment matches the density's quadrature value") {
    // E|a|^2 for pi^{-k/2} e^{-|a|^2} on R^2, by separated quadrature: 2 * int x^2 e^{-x^2}/sqrt(pi)
    const double oracle = 2.0 * 2.0 * oracle::half_line([](double x) { return x * x * std::exp(-x * x) / std::sqrt(std::numbers::pi); });
    const auto e = CoefficientEnsemble::real_gaussian();
    std::vector<double> v;
    v.reserve(1000000);
    Rng rng(5, 0);
    std::vector<cplx> a(2);
    for (int i = 0; i < 1000000; ++i) {
        e.sample(a, rng);
        v.push_back(std::norm(a[0]) + std::norm(a[1]));
    }
    const auto m = oracle::mean_se(v);
    CHECK(std::fabs(m.mean - oracle) <= 3.0 * m.se);
    CHECK(oracle == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("complex Gaussian has uncorrelated real and imaginary parts") {
    const auto e = CoefficientEnsemble::complex_gaussian();
    std::vector<double> cross, mod;
    for (std::uint64_t s = 0; s < 100000; ++s) {
        const auto a = sample_coefficients(e, 1, 9, s);
        cross.push_back(a[0].real() * a[0].imag());
        mod.push_back(std::norm(a[0]));
    }
    const auto c = oracle::mean_se(cross);
    CHECK(std::fabs(c.mean) <= 3.0 * c.se);
    const auto m = oracle::mean_se(mod);
    CHECK(std::fabs(m.mean - 1.0) <= 3.0 * m.se);
    CHECK_FALSE(e.real_supported());
}

TEST_CASE("tail probabilities") {
    SUBCASE("unit cube has no mass beyond e^0.1") {
        const auto t = tail_probability(CoefficientEnsemble::uniform_unit_cube(), 0.1, 10000, 1);
        CHECK(t.mean == 0.0);
    }
    SUBCASE("real Gaussian P(|a| > 1) against erfc") {
        const double oracle = 2.0 * oracle::half_line([](double x) { return std::exp(-x * x) / std::sqrt(std::numbers::pi); }, 1.0);
        CHECK(oracle == doctest::Approx(std::erfc(1.0)).epsilon(1e-12));
        const auto t = tail_probability(CoefficientEnsemble::real_gaussian(), 0.0, 200000, 2);
        CHECK(std::fabs(t.mean - oracle) <= 3.0 * t.se);
    }
    SUBCASE("tabulated density respects its declared tail bound") {
        const auto d = TabulatedDensity::tent();
        const auto e = CoefficientEnsemble::iid(d);
        for (double R : {0.25, 0.5, 0.8, 1.0, 1.5}) {
            const auto t = tail_probability(e, R, 100000, 3);
            CHECK(t.mean <= d.tail_c() * std::pow(R, -d.tail_rho()) + 3.0 * t.se);
            CHECK(d.tail_mass(std::exp(R)) <= d.tail_c() * std::pow(R, -d.tail_rho()) + 1e-15);
        }
    }
}

TEST_CASE("log moments") {
    SUBCASE("unit cube lies in [0, log 2]") {
        const auto m = log_moment_1d(CoefficientEnsemble::uniform_unit_cube(), 1, 20000, 4);
        CHECK(m.mean >= 0.0);
        CHECK(m.mean <= std::log(2.0));
    }
    SUBCASE("real Gaussian n=1 against quadrature") {
        const double oracle = 2.0 * oracle::half_line([](double x) { return std::log1p(x) * std::exp(-x * x) / std::sqrt(std::numbers::pi); });
        const auto m = log_moment_1d(CoefficientEnsemble::real_gaussian(), 1, 200000, 5);
        CHECK(std::fabs(m.mean - oracle) <= 3.0 * m.se);
    }
    SUBCASE("radial alpha=1, k=1, n=2 against quadrature") {
        // density (1/2)(1+x^2)^{-3/2} on R
        const double oracle = oracle::half_line([](double x) { return std::pow(std::log1p(x), 2) * std::pow(1 + x * x, -1.5); });
        const auto m = log_moment_1d(CoefficientEnsemble::radial(1.0), 2, 200000, 6);
        CHECK(std::fabs(m.mean - oracle) <= 3.0 * m.se);
    }
}

TEST_CASE("radial density: normalization and radial law") {
    for (int k = 1; k <= 3; ++k)
        for (double alpha : {0.5, 1.0, 2.5}) {
            // c_k = Gamma(k/2 + alpha) / (pi^{k/2} Gamma(alpha)), surface area 2 pi^{k/2} / Gamma(k/2)
            const double ck = std::exp(std::lgamma(0.5 * k + alpha) - std::lgamma(alpha)) / std::pow(std::numbers::pi, 0.5 * k);
            const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
            auto radial_pdf = [=](double r) { return ck * area * std::pow(r, k - 1) * std::pow(1 + r * r, -0.5 * k - alpha); };
            CHECK(oracle::half_line(radial_pdf) == doctest::Approx(1.0).epsilon(1e-6));

            const auto e = CoefficientEnsemble::radial(alpha);
            std::vector<double> radii;
            for (std::uint64_t s = 0; s < 20000; ++s) {
                const auto a = sample_coefficients(e, k, 12, s);
                double n2 = 0.0;
                for (auto v : a) n2 += std::norm(v);
                radii.push_back(std::sqrt(n2));
            }
            auto cdf = [&](double r) { return oracle::tanh_sinh(radial_pdf, 0.0, r); };
            // 1.95 / sqrt(n) is the 0.1% critical value
            CHECK(oracle::ks_one_sample(radii, cdf) <= 1.95 / std::sqrt(20000.0));
        }
}

TEST_CASE("tabulated density sampling follows its CDF") {
    const auto d = TabulatedDensity::tent();
    const auto e = CoefficientEnsemble::iid(d);
    std::vector<double> x;
    for (std::uint64_t s = 0; s < 20000; ++s) x.push_back(sample_coefficients(e, 1, 13, s)[0].real());
    auto cdf = [](double t) {
        if (t <= -3) return 0.0;
        if (t >= 3) return 1.0;
        return t < 0 ? (t + 3) * (t + 3) / 18.0 : 1.0 - (3 - t) * (3 - t) / 18.0;
    };
    CHECK(oracle::ks_one_sample(x, cdf) <= 1.95 / std::sqrt(20000.0));
    for (double u : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("tabulated density validation") {
    CHECK_THROWS_AS(TabulatedDensity({{0.0, 1.0}}, 1.0, 1.0, 2.0), ParameterError);
    CHECK_THROWS_AS(TabulatedDensity({{1.0, 0.5}, {0.0, 0.5}}, 1.0, 1.0, 2.0), ParameterError);
    CHECK_THROWS_AS(TabulatedDensity({{-1.0, 0.5}, {1.0, 0.5}}, 0.25, 1.0, 2.0), ParameterError);   // M too small
    CHECK_THROWS_AS(TabulatedDensity({{-1.0, 0.5}, {1.0, 0.5}}, 0.5, 1.0, 1.0), ParameterError);    // rho <= 1
    CHECK_THROWS_AS(TabulatedDensity({{-9.0, 0.0}, {0.0, 1.0 / 9}, {9.0, 0.0}}, 1.0, 1e-3, 2.0), ParameterError);  // c too small
    CHECK_THROWS_AS(CoefficientEnsemble::radial(0.0), ParameterError);
    const auto d = TabulatedDensity::tent();
    CHECK(d.minimal_tail_constant(d.tail_rho()) <= d.tail_c());
}

TEST_CASE("rotation invariance of <a, v>") {
    // v = e_1 and Qv = (1,1,1)/sqrt3 in R^3
    const double r3 = 1.0 / std::sqrt(3.0);
    for (const auto& e : {CoefficientEnsemble::real_gaussian(), CoefficientEnsemble::radial(1.0), CoefficientEnsemble::sphere_uniform()}) {
        CHECK(e.rotation_invariant());
        std::vector<double> a1, a2;
        for (std::uint64_t s = 0; s < 100000; ++s) {
            const auto a = sample_coefficients(e, 3, 21, s);
            const auto b = sample_coefficients(e, 3, 22, s);
            a1.push_back(a[0].real());
            a2.push_back((b[0].real() + b[1].real() + b[2].real()) * r3);
        }
        CHECK(oracle::ks_two_sample(a1, a2) <= 0.012);
    }
    CHECK_FALSE(CoefficientEnsemble::uniform_unit_cube().rotation_invariant());
}

TEST_CASE("determinism across calls and thread counts") {
    for (const auto& e : real_ensembles()) {
        CHECK(sample_coefficients(e, 6, 42, 3) == sample_coefficients(e, 6, 42, 3));
        CHECK(sample_coefficients(e, 6, 42, 3) != sample_coefficients(e, 6, 42, 4));
        const auto a = log_moment_1d(e, 2, 5000, 8, 2, 1);
        const auto b = log_moment_1d(e, 2, 5000, 8, 2, 4);
        CHECK(a.mean == b.mean);
        CHECK(a.se == b.se);
    }
}
