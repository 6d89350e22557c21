#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rzero/ensembles.hpp"

namespace rzero {

/// One logarithmic-moment question: E |log|<a,u>||^nu for a ~ ensemble on C^k.
/// The pairing is bilinear, <a,u> = sum a_j u_j.
struct MomentQuery {
    CoefficientEnsemble ensemble;
    int k = 1;
    std::vector<cplx> u;  // |u| = 1
    double nu = 1.0;
};

struct MomentEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;          // samples used
    std::size_t discarded = 0;  // <a,u> == 0 exactly
    std::size_t clamped = 0;    // 0 < |<a,u>| < 1e-300, clamped to 1e-300
};

MomentEstimate log_moment_mc(const MomentQuery& query, std::size_t trials, std::uint64_t seed,
                             unsigned threads = 1);

struct MomentBound {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> constituents;
};

/// 2^{2nu} int_0^inf |log x|^nu e^{-x^2} dx + 2^nu.
MomentBound bound_real_gaussian(double nu);
/// 2^{2nu-1} C + 2^{nu-1} C' + 2^nu, independent of k.
MomentBound bound_radial(double alpha, double nu);
/// 2^{nu-1} A^{-1} (3 (log k)^nu + 2^{nu+1} nu^nu e^{-nu}) + 1, k >= 3.
MomentBound bound_sphere(int k, double nu);
/// R0^nu (1 + 2^rho nu c k / ((rho - nu) R0^rho)) + 4 sqrt2 M nu^nu, R0 = k^{1/rho}.
/// Constituent "R0_ge_logk" is 1 when the proof's requirement R0 >= log k holds.
MomentBound bound_iid(int k, double nu, double rho, double c, double M);
/// (log k)^nu + 6 nu^nu.
MomentBound bound_uniform_cube(int k, double nu);

/// C_k = int_0^{pi/2} cos^k t dt from its Gamma closed form.
double wallis_integral(int k);
/// min over 1 <= k <= kmax of C_k sqrt(k).
double wallis_constant_A(int kmax = 10000);

/// The stated bound for an ensemble that has one (all but ComplexGaussian).
MomentBound stated_bound(const CoefficientEnsemble& ensemble, int k, double nu);

/// Uniformly distributed unit vector in C^k (or R^k when real_only).
std::vector<cplx> random_unit_direction(int k, Rng& rng, bool real_only = false);

struct Lemma41Report {
    MomentEstimate J, I, K;
    double rhs_constant = 0.0;  // 2^nu
    double diff_mean = 0.0;     // mean of J - 2^{2nu-1} I - 2^{nu-1} K per sample
    double diff_se = 0.0;
    bool holds = false;
    bool ball_applicable = false;  // SphereUniform only
    double ball_diff_mean = 0.0;   // mean of J - 2^{nu-1} I
    double ball_diff_se = 0.0;
    bool ball_holds = false;
};

/// Monte Carlo check of J(u) <= 2^{2nu-1} I + 2^{nu-1} K(t) + 2^nu (and of
/// J(u) <= 2^{nu-1} I + 1 for measures on the unit ball), using per-sample
/// differences so that the verdict carries one combined standard error.
Lemma41Report lemma41_check(const CoefficientEnsemble& ensemble, std::vector<cplx> u, double nu,
                            std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct Lemma45Report {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// int_0^1 (-log x)^nu (1-x^2)^b dx <= 2^{nu+1} (nu/e)^nu sqrt(tau) + 2 (-log tau)^nu (b+3/2)^{-1/2}.
Lemma45Report lemma45_check(double nu, double b, double tau);

}  // namespace rzero
