#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "rzero/error.hpp"
#include "rzero/parallel.hpp"
#include "rzero/zero_engine.hpp"

using namespace rzero;

namespace {

std::vector<cplx> sorted(std::vector<cplx> z) {
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return z;
}

// Largest distance in a greedy nearest-neighbour matching of a onto b.
double match_distance(std::vector<cplx> a, std::vector<cplx> b, bool relative = false) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (auto z : a) {
        auto it = std::min_element(b.begin(), b.end(), [z](cplx u, cplx v) { return std::abs(u - z) < std::abs(v - z); });
        const double d = std::abs(*it - z) / (relative ? 1.0 + std::abs(z) : 1.0);
        worst = std::max(worst, d);
        b.erase(it);
    }
    return worst;
}

// Unbalanced companion eigenvalues via Eigen, as an independent oracle.
std::vector<cplx> companion_oracle(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) z[i] = es.eigenvalues()[i];
    return z;
}

}  // namespace

TEST_CASE("random_polynomial from explicit coefficients") {
    const std::vector<cplx> ones{1.0, 1.0};
    const auto f = basis_polynomial(OrthonormalBasis::identity(1), ones);
    CHECK(f.degree() == 1);
    CHECK(std::abs(cplx(f.coefficients()[0]) - 1.0) == 0.0);
    CHECK(std::abs(cplx(f.coefficients()[1]) - 1.0) == 0.0);

    const auto g = basis_polynomial(build_basis({SpaceDomain::FubiniStudy, 1}), ones);
    CHECK(std::abs(cplx(g.coefficients()[0]) - std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(cplx(g.coefficients()[1]) - std::sqrt(2.0)) <= 1e-15);

    const std::vector<cplx> e0{1.0, 0.0};
    const auto h = basis_polynomial(build_basis({SpaceDomain::UnitSquareQ, 1}), e0);
    CHECK(h.degree() == 0);
    CHECK(std::abs(cplx(h.coefficients()[0]) - 1.0) <= 1e-14);
    CHECK_THROWS_AS(roots(h), NoRootsError);

    const std::vector<cplx> wrong{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(basis_polynomial(OrthonormalBasis::identity(1), wrong), ContractError);
}

TEST_CASE("random_polynomial is deterministic per seed") {
    const auto b = build_basis({SpaceDomain::PlaneGaussian, 30});
    const auto e = CoefficientEnsemble::complex_gaussian();
    CHECK(random_polynomial(b, e, 5, 2).coefficients() == random_polynomial(b, e, 5, 2).coefficients());
    CHECK(random_polynomial(b, e, 5, 2).coefficients() != random_polynomial(b, e, 5, 3).coefficients());
}

TEST_CASE("roots of small polynomials") {
    auto z = [](std::vector<cplx> c) { return sorted(roots(Polynomial(c)).zeros); };
    auto near = [](std::vector<cplx> a, std::vector<cplx> b) { return match_distance(a, b) <= 1e-14; };
    CHECK(near(z({-1.0, 0.0, 1.0}), {-1.0, 1.0}));
    CHECK(near(z({1.0, 0.0, 1.0}), {cplx(0, 1), cplx(0, -1)}));
    CHECK(near(z({6.0, -5.0, 1.0}), {2.0, 3.0}));
    CHECK(near(z({0.0, 0.0, 2.0, 0.0, -2.0}), {0.0, 0.0, 1.0, -1.0}));
    CHECK(count_real_zeros(roots(Polynomial(std::vector<cplx>{0.0, -1.0, 0.0, 1.0}))) == 3);
    CHECK(count_real_zeros(roots(Polynomial(std::vector<cplx>{1.0, 0.0, 1.0}))) == 0);
    CHECK_THROWS_AS(roots(Polynomial(std::vector<cplx>{3.0})), NoRootsError);
}

TEST_CASE("real-zero policy") {
    RealZeroPolicy pol;
    CHECK(pol.is_real(cplx(5.0, 1e-9)));
    CHECK_FALSE(pol.is_real(cplx(0.0, 1e-8)));
    ZeroSet zs;
    zs.zeros = {cplx(1, 0), cplx(2, 1e-12), cplx(0, 1)};
    CHECK(count_real_zeros(zs) == 2);
    CHECK(count_real_zeros(zs, RealZeroPolicy{1e-13}) == 1);
}

TEST_CASE("backward error and degree conservation on a random corpus") {
    const CoefficientEnsemble ens[] = {CoefficientEnsemble::complex_gaussian(), CoefficientEnsemble::real_gaussian(),
                                       CoefficientEnsemble::uniform_unit_cube(), CoefficientEnsemble::radial(0.5)};
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i < 1000; ++i) {
        const int p = 1 + i % 50;
        const auto& e = ens[i % 4];
        const auto f = random_polynomial(OrthonormalBasis::identity(p), e, 77, static_cast<std::uint64_t>(i));
        const auto zs = roots(f);
        CHECK(static_cast<int>(zs.zeros.size()) == f.degree());
        CHECK(zs.effective_degree == f.degree());
        CHECK(zs.real_count <= zs.effective_degree);
        for (auto r : zs.zeros) CHECK(f.relative_residual(r) <= 1e3 * eps);
        CHECK(zs.max_backward_error <= 1e3 * eps);
    }
}

TEST_CASE("real coefficients give conjugation-closed zero sets") {
    for (int i = 0; i < 200; ++i) {
        const int p = 2 + i % 120;
        const auto f = random_polynomial(OrthonormalBasis::identity(p), CoefficientEnsemble::real_gaussian(), 5, static_cast<std::uint64_t>(i));
        const auto z = roots(f).zeros;
        std::vector<cplx> zc(z.size());
        std::transform(z.begin(), z.end(), zc.begin(), [](cplx v) { return std::conj(v); });
        CHECK(match_distance(z, zc, true) <= 1e-8);
    }
}

TEST_CASE("Aberth and companion paths agree with an independent eigensolve") {
    // degrees on both sides of the companion cutoff
    for (int p : {40, 64, 65, 100, 200}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto f = random_polynomial(OrthonormalBasis::identity(p), CoefficientEnsemble::complex_gaussian(), 31, s);
            std::vector<cplx> c;
            for (auto v : f.coefficients()) c.push_back(cplx(v));
            CHECK(match_distance(roots(f).zeros, companion_oracle(c), true) <= 1e-8);
        }
    }
}

TEST_CASE("large SU2 degrees keep every zero") {
    const auto b = build_basis({SpaceDomain::FubiniStudy, 512});
    const auto zs = roots(random_polynomial(b, CoefficientEnsemble::uniform_unit_cube(), 3, 0));
    CHECK(zs.effective_degree == 512);
    CHECK(zs.max_backward_error <= 1e-12);
}

TEST_CASE("SU2 low degrees with positive coefficients") {
    const auto e = CoefficientEnsemble::uniform_unit_cube();
    const auto b1 = build_basis({SpaceDomain::FubiniStudy, 1});
    const auto b2 = build_basis({SpaceDomain::FubiniStudy, 2});
    for (std::uint64_t t = 0; t < 10000; ++t) {
        for (auto z : roots(random_polynomial(b1, e, 8, t)).zeros) {
            CHECK(z.imag() == 0.0);
            CHECK(z.real() <= 0.0);
        }
        for (auto z : roots(random_polynomial(b2, e, 8, t)).zeros) CHECK(z.real() <= 0.0);
    }
}

TEST_CASE("trimming books vanished zeros at infinity") {
    std::vector<cplxl> c{1.0L, 1.0L, 1e-30L};
    const Polynomial f(c);
    CHECK(f.nominal_degree() == 2);
    CHECK(f.degree() == 1);
    const auto zs = roots(f);
    CHECK(zs.degree == 2);
    CHECK(zs.effective_degree == 1);
    auto m = EmpiricalMeasure2D::counting(Box{}, Grid{8, 8}, 2);
    m.accumulate(zs);
    CHECK(m.total() == 1.0);
    CHECK(m.out_of_box() == 0.5);
}

TEST_CASE("accumulate examples") {
    auto m = EmpiricalMeasure2D::counting(Box{}, Grid{64, 64}, 2);
    m.accumulate(roots(Polynomial(std::vector<cplx>{-1.0, 0.0, 1.0})));
    const auto a = m.locate(1.0), b = m.locate(-1.0);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a != *b);
    CHECK(m.bin_mass(a->first, a->second) == 0.5);
    CHECK(m.bin_mass(b->first, b->second) == 0.5);
    CHECK(m.in_box() == 1.0);

    const int p = 3;
    auto far = EmpiricalMeasure2D::counting(Box{}, Grid{16, 16}, p);
    ZeroSet zs;
    zs.zeros = {10.0, 0.0, 0.5};
    zs.degree = zs.effective_degree = p;
    far.accumulate(zs);
    CHECK(far.out_of_box() == doctest::Approx(1.0 / p));

    auto wrong = EmpiricalMeasure2D::counting(Box{}, Grid{16, 16}, 4);
    CHECK_THROWS_AS(wrong.accumulate(zs), ContractError);
}

TEST_CASE("locate") {
    const EmpiricalMeasure2D m(Box{}, Grid{4, 4});
    CHECK(m.locate(cplx(2.0, 2.0)) == std::make_pair(3, 3));
    CHECK(m.locate(cplx(-2.0, -2.0)) == std::make_pair(0, 0));
    CHECK(m.locate(cplx(0.1, 1.9)) == std::make_pair(3, 2));
    CHECK_FALSE(m.locate(cplx(2.0001, 0.0)));
    CHECK_FALSE(m.locate(cplx(std::nan(""), 0.0)));
}

TEST_CASE("Weyl zeros concentrate in the box") {
    const int p = 200;
    const auto b = build_basis({SpaceDomain::PlaneGaussian, p});
    auto m = EmpiricalMeasure2D::counting(Box{}, Grid{}, p);
    for (std::uint64_t t = 0; t < 50; ++t) m.accumulate(roots(random_polynomial(b, CoefficientEnsemble::complex_gaussian(), 4, t)));
    CHECK(m.in_box() / m.total() >= 0.95);
}

TEST_CASE("mass conservation and merge independence") {
    const int p = 30, T = 300;
    const auto b = build_basis({SpaceDomain::FubiniStudy, p});
    auto accumulate_with = [&](unsigned threads) {
        auto parts = map_chunks(T, threads, [&](std::size_t lo, std::size_t hi) {
            std::optional<EmpiricalMeasure2D> m = EmpiricalMeasure2D::counting(Box{}, Grid{32, 32}, p);
            for (std::size_t t = lo; t < hi; ++t) m->accumulate(roots(random_polynomial(b, CoefficientEnsemble::uniform_unit_cube(), 6, t)));
            return m;
        }, 7);
        return parts;
    };
    auto forward = accumulate_with(1);
    auto threaded = accumulate_with(4);
    auto merged_fwd = *forward.front();
    for (std::size_t i = 1; i < forward.size(); ++i) merged_fwd.merge(*forward[i]);
    auto merged_rev = *threaded.back();
    for (std::size_t i = threaded.size() - 1; i-- > 0;) merged_rev.merge(*threaded[i]);
    CHECK(merged_fwd.total() == T);
    CHECK(merged_fwd.normalized().total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(merged_fwd.out_of_box() == merged_rev.out_of_box());
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c) CHECK(merged_fwd.bin_mass(r, c) == merged_rev.bin_mass(r, c));
}

TEST_CASE("writers") {
    auto m = EmpiricalMeasure2D::counting(Box{}, Grid{3, 5}, 1);
    ZeroSet zs;
    zs.zeros = {cplx(0.0, 1.9)};
    zs.degree = zs.effective_degree = 1;
    m.accumulate(zs);
    std::ostringstream pgm;
    write_pgm(m, pgm);
    const std::string s = pgm.str();
    CHECK(s.substr(0, 11) == "P5\n5 3\n255\n");
    CHECK(s.size() == 11 + 15);
    // +Im row is written first
    CHECK(static_cast<unsigned char>(s[11 + 2]) == 255);

    std::ostringstream csv;
    write_bin_csv(m, csv);
    CHECK(csv.str().rfind("row,col,re,im,mass\n", 0) == 0);
    CHECK(csv.str().find("-1,-1,0,0,0\n") != std::string::npos);

    std::ostringstream zc;
    write_zero_csv_header(zc);
    write_zero_csv_rows(zc, 7, zs);
    CHECK(zc.str() == "trial,re,im\n7,0,1.8999999999999999\n");
}
