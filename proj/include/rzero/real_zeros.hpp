#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rzero {

/// The sums A(x) = sum x^{2j}, B(x) = sum j x^{2j-1}, C(x) = sum j^2 x^{2j-2},
/// j = 0..p, for |x| < 1.
class KacIntegrand {
public:
    explicit KacIntegrand(int degree);
    int degree() const noexcept { return p_; }
    double A(double x) const;
    double B(double x) const;
    double C(double x) const;
    /// sqrt(A C - B^2) / A, computed as the standard deviation of j under the
    /// weights x^{2j} / A divided by x, so no cancellation occurs.
    double value(double x) const;
    /// value(1 - e^{-t}) e^{-t}.
    double substituted(double t) const;

private:
    int p_;
};

/// Expected number of real zeros of the Kac polynomial of degree p.
double kac_expected(int p);

enum class RealZeroModel { Kac, Elliptic, Weyl, Legendre };
std::string to_string(RealZeroModel model);
RealZeroModel real_zero_model_from_string(const std::string& name);

struct RealZeroEstimate {
    RealZeroModel model;
    int degree = 0;
    double value = 0.0;
    std::string formula;
};

/// Leading-order real-zero count for Elliptic, Weyl and Legendre; DomainError for Kac.
RealZeroEstimate classical_constant(RealZeroModel model, int p);

/// Exact E[#real zeros] of sum_j sigma_j a_j x^j with i.i.d. real Gaussian a_j,
/// given log sigma_j^2. Uses x = +-e^s and integrates the weighted standard
/// deviation of j over s.
double gaussian_real_zero_expectation(const std::vector<double>& log_variance);

/// Same for the Weyl model, sigma_j^2 = p^j / j!.
double weyl_expected(int p);

/// Radial weight phi(|z|) described through its Laplacian on the real axis and
/// the real trace of its support set.
struct RadialWeight {
    std::string name;
    std::function<double(double)> laplacian;
    std::optional<std::pair<double, double>> real_support;

    /// phi = |z|^2 / 2, Laplacian 2, support [-1, 1].
    static RadialWeight gaussian();
};

/// (1/pi) int_{support} sqrt(Laplacian / 2) dx.
double radial_weight_limit(const RadialWeight& phi);

}  // namespace rzero
