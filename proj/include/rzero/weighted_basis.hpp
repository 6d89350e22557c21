#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rzero {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

enum class SpaceDomain {
    UnitSquareQ,    // Lebesgue measure on [-1/2, 1/2]^2, no weight
    PlaneGaussian,  // Lebesgue measure on C, weight e^{-p|z|^2}
    FubiniStudy,    // (1 + |z|^2)^{-p} dlambda / (pi (1 + |z|^2)^2)
};

std::string to_string(SpaceDomain domain);
SpaceDomain space_domain_from_string(const std::string& name);

/// Largest degree accepted for the square model; its monomial Gram matrix is
/// exponentially ill-conditioned.
inline constexpr int kMaxSquareDegree = 60;

struct WeightedSpace {
    SpaceDomain domain = SpaceDomain::UnitSquareQ;
    int degree = 0;

    /// Weight function phi with (f, g)_p = int f conj(g) e^{-2 p phi} dnu.
    double phi(cplx z) const;
    std::string describe() const;
};

/// Gram matrix s_lj = <z^l, z^j> of the monomials. Hermitian, (p+1) x (p+1).
Eigen::MatrixXcd gram_matrix(const WeightedSpace& space);

/// A basis P_0..P_p of polynomials of degree <= p, P_j = sum_{l <= j} R_lj z^l,
/// with R upper triangular and positive on the diagonal. Diagonal bases are
/// held as log|R_jj| so that large degrees do not overflow.
class OrthonormalBasis {
public:
    enum class Representation { Diagonal, Triangular };

    /// Monomial basis (R = Id), used for the Kac model.
    static OrthonormalBasis identity(int degree);
    static OrthonormalBasis from_log_diagonal(std::vector<long double> log_diag,
                                              std::optional<WeightedSpace> space = std::nullopt);
    /// R given column-major, n x n, upper triangular.
    static OrthonormalBasis from_triangular(std::vector<cplxl> R, int n,
                                            std::optional<WeightedSpace> space = std::nullopt);

    int degree() const noexcept { return n_ - 1; }
    int dimension() const noexcept { return n_; }
    Representation representation() const noexcept { return rep_; }
    const std::optional<WeightedSpace>& space() const noexcept { return space_; }

    /// Entry R_lj in extended precision (zero below the diagonal).
    cplxl entry(int l, int j) const;
    /// R rounded to double. Entries beyond double range become infinite.
    Eigen::MatrixXcd matrix() const;

    /// (P_0(z), ..., P_p(z)).
    std::vector<cplx> evaluate(cplx z) const;
    std::vector<cplxl> evaluate_ld(cplxl z) const;

    /// Monomial coefficients of sum_j a_j P_j.
    std::vector<cplxl> combine(std::span<const cplx> a) const;
    /// E_l = sum_j |R_lj|, the size of coefficient l for a unit-size draw.
    std::vector<long double> row_envelope() const;

    /// log sum_j |P_j(z)|^2; factors out z^p when |z| > 2.
    long double log_bergman_diag(cplx z) const;

    /// Diagnostics filled by the constructors that have them.
    double cholesky_residual = 0.0;
    double gram_condition = 0.0;

private:
    OrthonormalBasis() = default;

    int n_ = 0;
    Representation rep_ = Representation::Diagonal;
    std::optional<WeightedSpace> space_;
    std::vector<long double> log_diag_;
    std::vector<cplxl> R_;  // column-major n x n
};

/// R = (L^*)^{-1} for S = L L^*, computed in extended precision.
/// Throws DecompositionError naming the first non-positive pivot.
OrthonormalBasis cholesky_onb(const Eigen::MatrixXcd& S,
                              std::optional<WeightedSpace> space = std::nullopt);

/// Closed-form basis for PlaneGaussian and FubiniStudy; DomainError otherwise.
OrthonormalBasis closed_form_basis(const WeightedSpace& space);

/// Closed form where available, Gram + Cholesky for the square.
OrthonormalBasis build_basis(const WeightedSpace& space);

std::vector<cplx> evaluate_basis(const OrthonormalBasis& basis, cplx z);

/// sum_j |P_j(z)|^2. Throws NumericError if it leaves double range.
double bergman_diag(const OrthonormalBasis& basis, cplx z);

/// (1/2p) log(K(z) e^{-2p phi(z)}) + phi(z) = (1/2p) log K(z), p >= 1.
double extremal_estimate(const OrthonormalBasis& basis, cplx z);

/// max |R^* S R - I|, accumulated in extended precision.
double onb_residual(const OrthonormalBasis& basis, const Eigen::MatrixXcd& S);

/// max |G - I| where G is the basis Gram recomputed with a quadrature rule
/// that shares no nodes with gram_matrix.
double requadrature_residual(const OrthonormalBasis& basis);

/// Spectral condition number of S, lambda_max(S) * sigma_max(R)^2.
double condition_number(const Eigen::MatrixXcd& S, const OrthonormalBasis& basis);

/// CSV with header row,col,re,im listing R_lj for l <= j.
void write_basis_csv(const OrthonormalBasis& basis, std::ostream& out);

}  // namespace rzero
