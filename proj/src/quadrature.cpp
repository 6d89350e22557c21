#include "rzero/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "rzero/error.hpp"

namespace rzero::quad {

Rule gauss_legendre(int m, double a, double b) {
    if (m < 1) throw ParameterError("gauss_legendre: need at least one node");
    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const int half_count = (m + 1) / 2;
    for (int i = 0; i < half_count; ++i) {
        // Tricomi initial guess, then Newton on the three-term recurrence
        long double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L;
            long double p1 = x;
            for (int k = 2; k <= m; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        // recompute derivative at the converged node
        long double p0 = 1.0L;
        long double p1 = x;
        for (int k = 2; k <= m; ++k) {
            const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0L);
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(m - 1 - i);
        rule.nodes[lo] = static_cast<double>(mid - half * x);
        rule.nodes[hi] = static_cast<double>(mid + half * x);
        rule.weights[lo] = static_cast<double>(half * w);
        rule.weights[hi] = static_cast<double>(half * w);
    }
    if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = mid;
    return rule;
}

Rule gauss_laguerre(int n, double alpha) {
    if (n < 1) throw ParameterError("gauss_laguerre: need at least one node");
    if (!(alpha > -1.0)) throw ParameterError("gauss_laguerre: alpha must exceed -1");
    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const long double a = alpha;
    // log of Gamma(n + alpha) / Gamma(n), used in the weight formula
    const long double log_ratio = std::lgamma(static_cast<long double>(n) + a) -
                                  std::lgamma(static_cast<long double>(n));
    long double z = 0.0L;
    for (int i = 0; i < n; ++i) {
        // asymptotic initial guesses (Stroud & Secrest), refined by Newton
        if (i == 0) {
            z = (1.0L + a) * (3.0L + 0.92L * a) / (1.0L + 2.4L * n + 1.8L * a);
        } else if (i == 1) {
            z += (15.0L + 6.25L * a) / (1.0L + 0.9L * a + 2.5L * n);
        } else {
            const long double ai = i - 1;
            z += ((1.0L + 2.55L * ai) / (1.9L * ai) + 1.26L * ai * a / (1.0L + 3.5L * ai)) *
                 (z - static_cast<long double>(rule.nodes[static_cast<std::size_t>(i - 2)])) /
                 (1.0L + 0.3L * a);
        }
        long double p1 = 0.0L;
        long double p2 = 0.0L;
        long double pp = 0.0L;
        for (int iter = 0; iter < 200; ++iter) {
            p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L + a - z) * p2 - (j - 1.0L + a) * p3) / j;
            }
            pp = (n * p1 - (n + a) * p2) / z;
            const long double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-18L * std::fabs(z)) break;
        }
        // re-evaluate at the converged node for the weight
        p1 = 1.0L;
        p2 = 0.0L;
        for (int j = 1; j <= n; ++j) {
            const long double p3 = p2;
            p2 = p1;
            p1 = ((2.0L * j - 1.0L + a - z) * p2 - (j - 1.0L + a) * p3) / j;
        }
        pp = (n * p1 - (n + a) * p2) / z;
        rule.nodes[static_cast<std::size_t>(i)] = static_cast<double>(z);
        // w = -Gamma(n+a) / (Gamma(n) * n * L'_n(z) * L_{n-1}(z))
        const long double w = -std::exp(log_ratio) / (pp * n * p2);
        rule.weights[static_cast<std::size_t>(i)] = static_cast<double>(w);
    }
    return rule;
}

Rule periodic_trapezoid(int m) {
    if (m < 1) throw ParameterError("periodic_trapezoid: need at least one node");
    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.assign(static_cast<std::size_t>(m), 2.0 * std::numbers::pi / m);
    for (int i = 0; i < m; ++i)
        rule.nodes[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / m;
    return rule;
}

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    Result result;
    if (a == b) return result;
    double error = 0.0;
    // max_depth 20 allows ~10^6 subintervals for stubborn integrands
    result.value = gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &error);
    result.error = error;
    if (!std::isfinite(result.value) || !std::isfinite(result.error))
        throw NumericError("integrate: non-finite result on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    const double target = std::max(abs_tol, rel_tol * std::fabs(result.value));
    if (result.error > 1e3 * target && result.error > 1e-300)
        throw NumericError("integrate: error estimate " + std::to_string(result.error) +
                           " far above tolerance");
    return result;
}

}  // namespace rzero::quad
