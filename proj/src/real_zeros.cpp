#include "rzero/real_zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rzero/error.hpp"
#include "rzero/quadrature.hpp"

namespace rzero {

namespace {

// Standard deviation of j under weights w_j = exp(lw_j), normalized.
double weighted_sd(const std::vector<double>& lw) {
    const double top = *std::max_element(lw.begin(), lw.end());
    double total = 0.0, mean = 0.0;
    std::vector<double> w(lw.size());
    for (std::size_t j = 0; j < lw.size(); ++j) {
        w[j] = std::exp(lw[j] - top);
        total += w[j];
        mean += w[j] * static_cast<double>(j);
    }
    mean /= total;
    double var = 0.0;
    for (std::size_t j = 0; j < lw.size(); ++j) {
        const double d = static_cast<double>(j) - mean;
        var += w[j] * d * d;
    }
    return std::sqrt(var / total);
}

}  // namespace

KacIntegrand::KacIntegrand(int degree) : p_(degree) {
    if (degree < 1) throw ParameterError("Kac degree must be at least 1");
}

double KacIntegrand::A(double x) const {
    double s = 0.0, xp = 1.0;
    for (int j = 0; j <= p_; ++j, xp *= x * x) s += xp;
    return s;
}

double KacIntegrand::B(double x) const {
    double s = 0.0, xp = x;
    for (int j = 1; j <= p_; ++j, xp *= x * x) s += j * xp;
    return s;
}

double KacIntegrand::C(double x) const {
    double s = 0.0, xp = 1.0;
    for (int j = 1; j <= p_; ++j, xp *= x * x) s += static_cast<double>(j) * j * xp;
    return s;
}

double KacIntegrand::value(double x) const {
    x = std::fabs(x);
    if (x >= 1.0) throw DomainError("Kac integrand needs |x| < 1");
    if (x == 0.0) return 1.0;
    // w_j = x^{2j}: mean and variance by a stable two-pass sum
    const double x2 = x * x;
    double total = 0.0, mean = 0.0, w = 1.0;
    for (int j = 0; j <= p_ && w > 0.0; ++j, w *= x2) {
        total += w;
        mean += j * w;
    }
    mean /= total;
    double var = 0.0;
    w = 1.0;
    for (int j = 0; j <= p_ && w > 0.0; ++j, w *= x2) var += w * (j - mean) * (j - mean);
    return std::sqrt(var / total) / x;
}

double KacIntegrand::substituted(double t) const {
    const double e = std::exp(-t);
    if (t == 0.0) return value(0.0);
    const double lx = std::log1p(-e);  // log x
    std::vector<double> lw(static_cast<std::size_t>(p_) + 1);
    for (int j = 0; j <= p_; ++j) lw[j] = 2.0 * j * lx;
    return weighted_sd(lw) / -std::expm1(-t) * e;
}

double kac_expected(int p) {
    const KacIntegrand f(p);
    // x = 1 - e^{-t}, truncated at t = 40; split near the mass concentration at t ~ log p
    const double knee = std::log(static_cast<double>(p) + 1.0);
    double total = 0.0;
    const double cuts[] = {0.0, 0.5 * knee, knee, knee + 3.0, knee + 10.0, 40.0};
    for (int i = 0; i + 1 < 6; ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += quad::integrate([&f](double t) { return f.substituted(t); }, cuts[i], cuts[i + 1], 1e-13, 1e-14).value;
    }
    return 4.0 / std::numbers::pi * total;
}

std::string to_string(RealZeroModel model) {
    switch (model) {
        case RealZeroModel::Kac: return "kac";
        case RealZeroModel::Elliptic: return "elliptic";
        case RealZeroModel::Weyl: return "weyl";
        case RealZeroModel::Legendre: return "legendre";
    }
    return "unknown";
}

RealZeroModel real_zero_model_from_string(const std::string& name) {
    for (auto m : {RealZeroModel::Kac, RealZeroModel::Elliptic, RealZeroModel::Weyl, RealZeroModel::Legendre})
        if (to_string(m) == name) return m;
    throw DomainError("unknown real-zero model '" + name + "'");
}

RealZeroEstimate classical_constant(RealZeroModel model, int p) {
    if (p < 1) throw ParameterError("degree must be at least 1");
    const double dp = p;
    switch (model) {
        case RealZeroModel::Elliptic: return {model, p, std::sqrt(dp), "sqrt(p)"};
        case RealZeroModel::Weyl: return {model, p, 2.0 / std::numbers::pi * std::sqrt(dp), "(2/pi) sqrt(p)"};
        case RealZeroModel::Legendre: return {model, p, dp / std::sqrt(3.0), "p/sqrt(3)"};
        case RealZeroModel::Kac: break;
    }
    throw DomainError("no leading-order constant for model " + to_string(model) + "; use kac_expected");
}

double gaussian_real_zero_expectation(const std::vector<double>& log_variance) {
    const std::size_t n = log_variance.size();
    if (n < 2) throw ParameterError("need at least two coefficients");
    for (double v : log_variance)
        if (!std::isfinite(v)) throw ParameterError("log variances must be finite");
    std::vector<double> lw(n);
    auto sd = [&](double s) {
        for (std::size_t j = 0; j < n; ++j) lw[j] = log_variance[j] + 2.0 * static_cast<double>(j) * s;
        return weighted_sd(lw);
    };
    // Tails decay like e^{-|s|} once one endpoint weight dominates. The balance
    // points s_j where w_j = w_{j+1} bracket the support of the integrand.
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double sj = 0.5 * (log_variance[j] - log_variance[j + 1]);
        lo = std::min(lo, sj);
        hi = std::max(hi, sj);
    }
    lo -= 40.0;
    hi += 40.0;
    // Split at the balance points so each panel sees one bump.
    std::vector<double> cuts{lo, hi};
    for (std::size_t j = 0; j + 1 < n; ++j) cuts.push_back(0.5 * (log_variance[j] - log_variance[j + 1]));
    std::sort(cuts.begin(), cuts.end());
    // Keep the panel count bounded for large degree.
    std::vector<double> panels;
    const std::size_t stride = std::max<std::size_t>(1, cuts.size() / 64);
    for (std::size_t i = 0; i < cuts.size(); i += stride) panels.push_back(cuts[i]);
    if (panels.back() != cuts.back()) panels.push_back(cuts.back());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
        if (panels[i + 1] <= panels[i]) continue;
        total += quad::integrate(sd, panels[i], panels[i + 1], 1e-12, 1e-15).value;
    }
    return 2.0 / std::numbers::pi * total;
}

double weyl_expected(int p) {
    if (p < 1) throw ParameterError("degree must be at least 1");
    std::vector<double> lv(static_cast<std::size_t>(p) + 1);
    for (int j = 0; j <= p; ++j) lv[j] = j * std::log(static_cast<double>(p)) - std::lgamma(j + 1.0);
    return gaussian_real_zero_expectation(lv);
}

RadialWeight RadialWeight::gaussian() {
    return {"gaussian", [](double) { return 2.0; }, std::make_pair(-1.0, 1.0)};
}

double radial_weight_limit(const RadialWeight& phi) {
    if (!phi.real_support) throw ContractError("radial weight '" + phi.name + "' has no support interval");
    if (!phi.laplacian) throw ContractError("radial weight '" + phi.name + "' has no Laplacian");
    const auto [a, b] = *phi.real_support;
    if (!(a <= b)) throw ContractError("support interval must satisfy a <= b");
    if (a == b) return 0.0;
    auto f = [&phi](double x) {
        const double d = phi.laplacian(x);
        if (d < 0.0) throw DomainError("Laplacian of a psh weight must be nonnegative");
        return std::sqrt(0.5 * d);
    };
    return quad::integrate(f, a, b, 1e-14, 1e-15).value / std::numbers::pi;
}

}  // namespace rzero
