#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace rzero::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2m - 1.
Rule gauss_legendre(int m, double a = -1.0, double b = 1.0);

/// n-point generalized Gauss-Laguerre rule for the weight x^alpha e^{-x} on
/// [0, inf); exact for polynomials of degree 2n - 1. alpha > -1.
Rule gauss_laguerre(int n, double alpha = 0.0);

/// m-point periodic trapezoid rule on [0, 2 pi); integrates e^{i k theta}
/// exactly for |k| < m.
Rule periodic_trapezoid(int m);

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod quadrature of f over [a, b]. Either bound may be
/// infinite. Throws NumericError when the integral or its error estimate is
/// not finite, or when the error estimate exceeds max(abs_tol, rel_tol*|I|)
/// by more than a factor of 1e3.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0);

}  // namespace rzero::quad
