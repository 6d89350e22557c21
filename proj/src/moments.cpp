#include "rzero/moments.hpp"

#include <cmath>
#include <numbers>

#include "rzero/error.hpp"
#include "rzero/parallel.hpp"
#include "rzero/quadrature.hpp"

namespace rzero {

namespace {

constexpr double kClampFloor = 1e-300;

void check_nu(double nu) {
    if (!(nu >= 1.0) || !std::isfinite(nu)) throw ParameterError("exponent nu must be >= 1");
}

cplx pairing(std::span<const cplx> a, std::span<const cplx> u) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * u[j];
    return acc;
}

void check_direction(const std::vector<cplx>& u, int k) {
    if (static_cast<int>(u.size()) != k)
        throw ContractError("direction has " + std::to_string(u.size()) + " entries, expected " +
                            std::to_string(k));
    double n2 = 0.0;
    for (auto v : u) n2 += std::norm(v);
    if (std::fabs(std::sqrt(n2) - 1.0) > 1e-12) throw ContractError("direction must have unit norm");
}

// int_0^inf s^nu g(s) ds on [0, inf) for the substituted log integrals
double integrate_half_line(const std::function<double(double)>& f) {
    return quad::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12).value;
}

}  // namespace

MomentEstimate log_moment_mc(const MomentQuery& q, std::size_t trials, std::uint64_t seed,
                             unsigned threads) {
    check_nu(q.nu);
    if (trials < 1) throw ContractError("log_moment_mc needs at least one trial");
    if (q.k < 1) throw ContractError("dimension k must be at least 1");
    check_direction(q.u, q.k);
    struct Chunk {
        RunningStats stats;
        std::size_t discarded = 0, clamped = 0;
    };
    auto chunks = map_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
        Chunk c;
        std::vector<cplx> a(static_cast<std::size_t>(q.k));
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng(seed, t);
            q.ensemble.sample(a, rng);
            double m = std::abs(pairing(a, q.u));
            if (m == 0.0) {
                ++c.discarded;
                continue;
            }
            if (m < kClampFloor) {
                m = kClampFloor;
                ++c.clamped;
            }
            c.stats.push(std::pow(std::fabs(std::log(m)), q.nu));
        }
        return c;
    });
    MomentEstimate out;
    RunningStats total;
    for (const auto& c : chunks) {
        total.merge(c.stats);
        out.discarded += c.discarded;
        out.clamped += c.clamped;
    }
    out.mean = total.mean;
    out.se = total.standard_error();
    out.n = total.n;
    return out;
}

MomentBound bound_real_gaussian(double nu) {
    check_nu(nu);
    // x = e^{-s} on (0, 1], x = e^{s} on [1, inf)
    const double lower = integrate_half_line(
        [nu](double s) { return std::pow(s, nu) * std::exp(-std::exp(-2.0 * s) - s); });
    const double upper = integrate_half_line([nu](double s) {
        if (s > 6.0) return 0.0;  // e^{-e^{12}} underflows
        return std::pow(s, nu) * std::exp(s - std::exp(2.0 * s));
    });
    const double Q = lower + upper;
    MomentBound b{"real_gaussian", std::pow(2.0, 2.0 * nu) * Q + std::pow(2.0, nu), {}};
    b.constituents["log_integral"] = Q;
    b.constituents["nu"] = nu;
    return b;
}

MomentBound bound_radial(double alpha, double nu) {
    check_nu(nu);
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    const double c0 = 2.0 * std::exp(std::lgamma(alpha + 0.5) - std::lgamma(alpha)) /
                      std::sqrt(std::numbers::pi);
    const double e = alpha + 0.5;
    // int_0^inf |log y|^nu (1+y^2)^{-alpha-1/2} dy, split at y = 1
    const double c_low = integrate_half_line([nu, e](double s) {
        return std::pow(s, nu) * std::exp(-s - e * std::log1p(std::exp(-2.0 * s)));
    });
    const double c_high = integrate_half_line([nu, e, alpha](double s) {
        return std::pow(s, nu) * std::exp(-2.0 * alpha * s - e * std::log1p(std::exp(-2.0 * s)));
    });
    const double C = c0 * (c_low + c_high);
    // int_{1/sqrt2}^inf |log x|^nu x^{-2 alpha - 1} dx: the part above 1 is
    // Gamma(nu+1) / (2 alpha)^{nu+1}
    const double cp_low = quad::integrate(
        [nu, alpha](double s) { return std::pow(s, nu) * std::exp(2.0 * alpha * s); }, 0.0,
        0.5 * std::log(2.0), 1e-13).value;
    const double cp_high = std::exp(std::lgamma(nu + 1.0) - (nu + 1.0) * std::log(2.0 * alpha));
    const double Cp = c0 * (cp_low + cp_high);
    MomentBound b{"radial",
                  std::pow(2.0, 2.0 * nu - 1.0) * C + std::pow(2.0, nu - 1.0) * Cp + std::pow(2.0, nu),
                  {}};
    b.constituents["C_alpha_nu"] = C;
    b.constituents["Cprime_alpha_nu"] = Cp;
    b.constituents["alpha"] = alpha;
    b.constituents["nu"] = nu;
    return b;
}

double wallis_integral(int k) {
    if (k < 0) throw ParameterError("wallis_integral: k must be nonnegative");
    return 0.5 * std::sqrt(std::numbers::pi) *
           std::exp(std::lgamma(0.5 * (k + 1)) - std::lgamma(0.5 * k + 1.0));
}

double wallis_constant_A(int kmax) {
    if (kmax < 1) throw ParameterError("wallis_constant_A: kmax must be positive");
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kmax; ++k) best = std::min(best, wallis_integral(k) * std::sqrt(k));
    return best;
}

MomentBound bound_sphere(int k, double nu) {
    check_nu(nu);
    if (k < 3) throw DomainError("bound_sphere: the explicit bound needs k >= 3");
    static const double A = wallis_constant_A(10000);
    const double lk = std::log(static_cast<double>(k));
    const double Ik = (3.0 * std::pow(lk, nu) + std::pow(2.0, nu + 1.0) * std::pow(nu, nu) * std::exp(-nu)) / A;
    MomentBound b{"sphere", std::pow(2.0, nu - 1.0) * Ik + 1.0, {}};
    b.constituents["A"] = A;
    b.constituents["I_k_bound"] = Ik;
    b.constituents["k"] = k;
    b.constituents["nu"] = nu;
    return b;
}

MomentBound bound_iid(int k, double nu, double rho, double c, double M) {
    check_nu(nu);
    if (k < 1) throw ParameterError("bound_iid: k must be positive");
    if (!(rho > 1.0) || !(c > 0.0) || !(M > 0.0)) throw ParameterError("bound_iid: need rho > 1, c > 0, M > 0");
    if (!(nu < rho)) throw DomainError("bound_iid: requires nu < rho");
    const double R0 = std::pow(static_cast<double>(k), 1.0 / rho);
    const double value = std::pow(R0, nu) * (1.0 + std::pow(2.0, rho) * nu * c * k / ((rho - nu) * std::pow(R0, rho))) +
                         4.0 * std::numbers::sqrt2 * M * std::pow(nu, nu);
    MomentBound b{"iid", value, {}};
    b.constituents["R0"] = R0;
    b.constituents["R0_ge_logk"] = R0 >= std::log(static_cast<double>(k)) ? 1.0 : 0.0;
    b.constituents["rho"] = rho;
    b.constituents["c"] = c;
    b.constituents["M"] = M;
    b.constituents["k"] = k;
    b.constituents["nu"] = nu;
    return b;
}

MomentBound bound_uniform_cube(int k, double nu) {
    check_nu(nu);
    if (k < 1) throw ParameterError("bound_uniform_cube: k must be positive");
    MomentBound b{"uniform_cube", std::pow(std::log(static_cast<double>(k)), nu) + 6.0 * std::pow(nu, nu), {}};
    b.constituents["k"] = k;
    b.constituents["nu"] = nu;
    return b;
}

MomentBound stated_bound(const CoefficientEnsemble& ensemble, int k, double nu) {
    switch (ensemble.kind()) {
        case EnsembleKind::RealGaussian: return bound_real_gaussian(nu);
        case EnsembleKind::RadialDensity: return bound_radial(ensemble.alpha(), nu);
        case EnsembleKind::SphereUniform: return bound_sphere(k, nu);
        case EnsembleKind::IIDDensity: {
            const auto& d = *ensemble.density();
            return bound_iid(k, nu, d.tail_rho(), d.tail_c(), d.bound());
        }
        case EnsembleKind::UniformUnitCube: return bound_uniform_cube(k, nu);
        case EnsembleKind::ComplexGaussian: break;
    }
    throw DomainError("no moment bound for " + ensemble.describe());
}

std::vector<cplx> random_unit_direction(int k, Rng& rng, bool real_only) {
    if (k < 1) throw ParameterError("direction dimension must be positive");
    std::vector<cplx> u(static_cast<std::size_t>(k));
    double n2 = 0.0;
    while (n2 == 0.0) {
        n2 = 0.0;
        for (auto& v : u) {
            const double re = rng.normal();
            const double im = real_only ? 0.0 : rng.normal();
            v = cplx(re, im);
            n2 += re * re + im * im;
        }
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : u) v *= inv;
    return u;
}

Lemma41Report lemma41_check(const CoefficientEnsemble& ensemble, std::vector<cplx> u, double nu,
                            std::size_t trials, std::uint64_t seed, unsigned threads) {
    check_nu(nu);
    if (!ensemble.rotation_invariant())
        throw DomainError("lemma41_check needs a rotation-invariant ensemble, got " + ensemble.describe());
    if (trials < 2) throw ContractError("lemma41_check needs at least two trials");
    const int k = static_cast<int>(u.size());
    check_direction(u, k);
    double s2 = 0.0, t2 = 0.0;
    for (auto v : u) {
        s2 += v.real() * v.real();
        t2 += v.imag() * v.imag();
    }
    if (s2 < t2) {
        // -i u swaps the roles of s and t and leaves |<a,u>| unchanged
        for (auto& v : u) v *= cplx(0.0, -1.0);
        std::swap(s2, t2);
    }
    const double tn = std::sqrt(t2);
    const double wI = std::pow(2.0, 2.0 * nu - 1.0), wK = std::pow(2.0, nu - 1.0);
    const bool ball = ensemble.kind() == EnsembleKind::SphereUniform;

    struct Chunk {
        RunningStats J, I, K, D, B;
    };
    auto lg = [nu](double m) { return std::pow(std::fabs(std::log(std::max(m, kClampFloor))), nu); };
    auto chunks = map_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
        Chunk c;
        std::vector<cplx> a(static_cast<std::size_t>(k));
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng(seed, t);
            ensemble.sample(a, rng);
            const double j = lg(std::abs(pairing(a, u)));
            const double a1 = std::abs(a[0]);
            const double i = lg(a1);
            const double kk = a1 * tn > 1.0 / std::numbers::sqrt2 ? lg(a1 * tn) : 0.0;
            c.J.push(j);
            c.I.push(i);
            c.K.push(kk);
            c.D.push(j - wI * i - wK * kk);
            c.B.push(j - wK * i);
        }
        return c;
    });
    Chunk total;
    for (const auto& c : chunks) {
        total.J.merge(c.J);
        total.I.merge(c.I);
        total.K.merge(c.K);
        total.D.merge(c.D);
        total.B.merge(c.B);
    }
    auto est = [](const RunningStats& s) {
        MomentEstimate e;
        e.mean = s.mean;
        e.se = s.standard_error();
        e.n = s.n;
        return e;
    };
    Lemma41Report r;
    r.J = est(total.J);
    r.I = est(total.I);
    r.K = est(total.K);
    r.rhs_constant = std::pow(2.0, nu);
    r.diff_mean = total.D.mean;
    r.diff_se = total.D.standard_error();
    r.holds = r.diff_mean <= r.rhs_constant + 3.0 * r.diff_se;
    r.ball_applicable = ball;
    if (ball) {
        r.ball_diff_mean = total.B.mean;
        r.ball_diff_se = total.B.standard_error();
        r.ball_holds = r.ball_diff_mean <= 1.0 + 3.0 * r.ball_diff_se;
    }
    return r;
}

Lemma45Report lemma45_check(double nu, double b, double tau) {
    check_nu(nu);
    if (!(b >= 0.0)) throw ParameterError("lemma45_check: b must be nonnegative");
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("lemma45_check: tau must lie in (0, 1)");
    Lemma45Report r;
    // x = e^{-s}: int_0^inf s^nu (1 - e^{-2s})^b e^{-s} ds
    r.lhs = integrate_half_line([nu, b](double s) {
        const double base = -std::expm1(-2.0 * s);
        const double factor = b == 0.0 ? 1.0 : std::exp(b * std::log(base));
        return std::pow(s, nu) * factor * std::exp(-s);
    });
    r.rhs = std::pow(2.0, nu + 1.0) * std::pow(nu / std::numbers::e, nu) * std::sqrt(tau) +
            2.0 * std::pow(-std::log(tau), nu) / std::sqrt(b + 1.5);
    r.holds = r.lhs <= r.rhs + 1e-9;
    return r;
}

}  // namespace rzero
