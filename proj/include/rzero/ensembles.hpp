#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rzero/rng.hpp"

namespace rzero {

using cplx = std::complex<double>;

/// Piecewise-linear probability density on the real line, given as nodes
/// (x_i, phi(x_i)) with strictly increasing x. Zero outside [x_0, x_last].
///
/// Carries the declared constants of the tail condition
///     P(|a| > e^R) <= c R^{-rho}  for all R > 0
/// and the sup bound M. Construction validates all three against the table.
class TabulatedDensity {
public:
    TabulatedDensity(std::vector<std::pair<double, double>> table, double bound_M, double tail_c,
                     double tail_rho);

    double pdf(double x) const;
    double cdf(double x) const;
    /// Inverse CDF on [0, 1].
    double quantile(double u) const;
    /// Mass of {|x| > threshold}.
    double tail_mass(double threshold) const;
    /// Smallest c for which the tail condition holds with exponent rho,
    /// i.e. sup_{R > 0} R^rho P(|a| > e^R). Evaluated exactly on each
    /// segment's breakpoints plus a dense scan.
    double minimal_tail_constant(double rho) const;

    double bound() const noexcept { return M_; }
    double tail_c() const noexcept { return c_; }
    double tail_rho() const noexcept { return rho_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

    /// Centered uniform density on [-sqrt 3, sqrt 3] (mean 0, variance 1).
    static TabulatedDensity centered_uniform();
    /// Symmetric tent on [-3, 3]; the default heavy-shouldered test law.
    static TabulatedDensity tent();

private:
    std::vector<std::pair<double, double>> table_;
    std::vector<double> cumulative_;  // CDF at each node
    double M_;
    double c_;
    double rho_;
};

enum class EnsembleKind {
    ComplexGaussian,  // standard complex normal N_C(0, 1) per coordinate
    RealGaussian,     // density pi^{-k/2} exp(-|a|^2) on R^k
    RadialDensity,    // density proportional to (1 + |a|^2)^{-k/2 - alpha} on R^k
    SphereUniform,    // normalized surface measure on S^{k-1} in R^k
    IIDDensity,       // i.i.d. real coordinates with a tabulated density
    UniformUnitCube,  // i.i.d. uniform on [0, 1]
};

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/// A sampleable probability law on C^k. Immutable after construction.
class CoefficientEnsemble {
public:
    static CoefficientEnsemble complex_gaussian();
    static CoefficientEnsemble real_gaussian();
    static CoefficientEnsemble radial(double alpha);
    static CoefficientEnsemble sphere_uniform();
    static CoefficientEnsemble iid(TabulatedDensity density);
    static CoefficientEnsemble uniform_unit_cube();

    EnsembleKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    const std::optional<TabulatedDensity>& density() const noexcept { return density_; }

    /// True for every law supported in R^k (all but ComplexGaussian).
    bool real_supported() const noexcept { return kind_ != EnsembleKind::ComplexGaussian; }
    /// Invariant under orthogonal maps of R^k.
    bool rotation_invariant() const noexcept;

    /// One draw from the k-fold law into out (k = out.size() >= 1).
    void sample(std::span<cplx> out, Rng& rng) const;
    std::vector<cplx> sample(int k, Rng& rng) const;

    std::string describe() const;

private:
    explicit CoefficientEnsemble(EnsembleKind kind) : kind_(kind) {}

    EnsembleKind kind_;
    double alpha_ = 0.0;
    std::optional<TabulatedDensity> density_;
};

/// One draw of k coefficients from the substream (root_seed, stream).
std::vector<cplx> sample_coefficients(const CoefficientEnsemble& ensemble, int k,
                                      std::uint64_t root_seed, std::uint64_t stream = 0);

/// Monte Carlo mean with its standard error.
struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// Estimate of P(|a_1| > e^R) for the first coordinate of a k-dimensional draw.
McEstimate tail_probability(const CoefficientEnsemble& ensemble, double R, std::size_t trials,
                            std::uint64_t seed, int k = 1, unsigned threads = 1);

/// Estimate of E[(log(1 + |a_1|))^n] for the first coordinate of a k-dimensional draw.
McEstimate log_moment_1d(const CoefficientEnsemble& ensemble, int n, std::size_t trials,
                         std::uint64_t seed, int k = 1, unsigned threads = 1);

}  // namespace rzero
