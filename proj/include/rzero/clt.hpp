#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rzero/zero_engine.hpp"

namespace rzero {

/// Real test function with compact support in the disk |z - center| <= radius.
struct TestFunction {
    std::string name;
    cplx center = 0.0;
    double radius = 0.0;
    std::function<double(cplx)> psi;

    double operator()(cplx z) const { return psi(z); }

    /// (1 - |z-c|^2/R^2)^4 inside the disk, 0 outside. C^3 across the rim.
    static TestFunction bump(cplx center, double radius, double height = 1.0);
    /// Identically zero, with a nominal support disk.
    static TestFunction zero(cplx center, double radius);
};

/// Sum of psi over the zeros.
double linear_statistic(const ZeroSet& zeros, const TestFunction& psi);
double linear_statistic(const std::vector<cplx>& zeros, const TestFunction& psi);

/// Kolmogorov-Smirnov distance of a sample to the standard normal CDF.
double ks_distance_normal(std::vector<double> sample);

struct CLTConfig {
    int degree = 100;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double bulk_radius = 1.0;  // bulk of |z|^2/2 is the open unit disk
};

struct CLTReport {
    int degree = 0;
    std::size_t trials = 0;
    std::vector<double> raw;         // statistic per trial
    std::vector<double> normalized;  // (raw - mean) / sd
    double raw_mean = 0.0;
    double raw_variance = 0.0;       // population variance
    double normalized_mean = 0.0;
    double normalized_variance = 0.0;
    bool degenerate = false;         // zero variance, no KS
    std::optional<double> ks;
};

/// Linear statistics of zeros of random PlaneGaussian polynomials with complex
/// Gaussian coefficients, self-normalized, with their KS distance to N(0,1).
/// DomainError if the support leaves the bulk; InsufficientSampleError below
/// 100 trials.
CLTReport clt_experiment(const TestFunction& psi, const CLTConfig& config);

/// Self-normalize a sample; fills the statistics fields of report.
void normalize_sample(CLTReport& report);

}  // namespace rzero
