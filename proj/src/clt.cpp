#include "rzero/clt.hpp"

#include <algorithm>
#include <cmath>

#include "rzero/error.hpp"
#include "rzero/parallel.hpp"

namespace rzero {

TestFunction TestFunction::bump(cplx center, double radius, double height) {
    if (!(radius > 0.0)) throw ParameterError("bump radius must be positive");
    const double r2 = radius * radius;
    return {"bump", center, radius, [=](cplx z) {
                const double u = 1.0 - std::norm(z - center) / r2;
                if (u <= 0.0) return 0.0;
                const double u2 = u * u;
                return height * u2 * u2;
            }};
}

TestFunction TestFunction::zero(cplx center, double radius) {
    return {"zero", center, radius, [](cplx) { return 0.0; }};
}

double linear_statistic(const std::vector<cplx>& zeros, const TestFunction& psi) {
    double s = 0.0;
    for (auto z : zeros) s += psi(z);
    return s;
}

double linear_statistic(const ZeroSet& zeros, const TestFunction& psi) {
    return linear_statistic(zeros.zeros, psi);
}

double ks_distance_normal(std::vector<double> sample) {
    if (sample.empty()) throw InsufficientSampleError("KS distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

void normalize_sample(CLTReport& r) {
    const std::size_t n = r.raw.size();
    if (n == 0) throw InsufficientSampleError("no statistics to normalize");
    double mean = 0.0;
    for (double x : r.raw) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : r.raw) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    r.raw_mean = mean;
    r.raw_variance = var;
    r.normalized.assign(n, 0.0);
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * (1.0 + std::fabs(mean)))) {
        r.degenerate = true;
        r.ks.reset();
        r.normalized_mean = 0.0;
        r.normalized_variance = 0.0;
        return;
    }
    r.degenerate = false;
    for (std::size_t i = 0; i < n; ++i) r.normalized[i] = (r.raw[i] - mean) / sd;
    // Remove the last rounding-level offset so the moments are exact to ~1e-16.
    double m = 0.0;
    for (double x : r.normalized) m += x;
    m /= static_cast<double>(n);
    double v = 0.0;
    for (auto& x : r.normalized) {
        x -= m;
        v += x * x;
    }
    v /= static_cast<double>(n);
    const double s = 1.0 / std::sqrt(v);
    m = 0.0;
    v = 0.0;
    for (auto& x : r.normalized) {
        x *= s;
        m += x;
        v += x * x;
    }
    r.normalized_mean = m / static_cast<double>(n);
    r.normalized_variance = v / static_cast<double>(n) - r.normalized_mean * r.normalized_mean;
    r.ks = ks_distance_normal(r.normalized);
}

CLTReport clt_experiment(const TestFunction& psi, const CLTConfig& cfg) {
    if (cfg.trials < 100)
        throw InsufficientSampleError("CLT experiment needs at least 100 trials, got " +
                                      std::to_string(cfg.trials));
    if (cfg.degree < 1) throw ParameterError("degree must be at least 1");
    if (!psi.psi) throw ContractError("test function has no evaluator");
    if (!(std::abs(psi.center) + psi.radius < cfg.bulk_radius))
        throw DomainError("test function support must lie inside the open bulk disk of radius " +
                          std::to_string(cfg.bulk_radius));

    const auto basis = build_basis({SpaceDomain::PlaneGaussian, cfg.degree});
    const auto ens = CoefficientEnsemble::complex_gaussian();
    auto chunks = map_chunks(cfg.trials, cfg.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> out;
        out.reserve(end - begin);
        for (std::size_t t = begin; t < end; ++t)
            out.push_back(linear_statistic(roots(random_polynomial(basis, ens, cfg.seed, t)), psi));
        return out;
    });
    CLTReport r;
    r.degree = cfg.degree;
    r.trials = cfg.trials;
    for (auto& c : chunks) r.raw.insert(r.raw.end(), c.begin(), c.end());
    normalize_sample(r);
    return r;
}

}  // namespace rzero
