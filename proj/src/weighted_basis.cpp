#include "rzero/weighted_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "rzero/error.hpp"
#include "rzero/quadrature.hpp"

namespace rzero {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;

void check_space(const WeightedSpace& space) {
    if (space.degree < 0) throw ParameterError("degree must be nonnegative");
    if (space.domain == SpaceDomain::PlaneGaussian && space.degree < 1)
        throw ParameterError("PlaneGaussian space needs degree >= 1 (weight e^{-p|z|^2})");
    if (space.domain == SpaceDomain::UnitSquareQ && space.degree > kMaxSquareDegree)
        throw ParameterError("square model degree " + std::to_string(space.degree) +
                             " exceeds the cap " + std::to_string(kMaxSquareDegree));
}

// log of (p+1) * binom(p, l)
long double log_fs_norm(int p, int l) {
    return std::lgamma(static_cast<long double>(p) + 2.0L) -
           std::lgamma(static_cast<long double>(l) + 1.0L) -
           std::lgamma(static_cast<long double>(p - l) + 1.0L);
}

long double log_sum_exp(const std::vector<long double>& terms) {
    long double top = -std::numeric_limits<long double>::infinity();
    for (auto t : terms) top = std::max(top, t);
    if (!std::isfinite(top)) return top;
    long double acc = 0.0L;
    for (auto t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

}  // namespace

std::string to_string(SpaceDomain domain) {
    switch (domain) {
        case SpaceDomain::UnitSquareQ: return "square";
        case SpaceDomain::PlaneGaussian: return "plane_gaussian";
        case SpaceDomain::FubiniStudy: return "fubini_study";
    }
    return "unknown";
}

SpaceDomain space_domain_from_string(const std::string& name) {
    if (name == "square") return SpaceDomain::UnitSquareQ;
    if (name == "plane_gaussian" || name == "weyl") return SpaceDomain::PlaneGaussian;
    if (name == "fubini_study" || name == "su2") return SpaceDomain::FubiniStudy;
    throw ParameterError("unknown space '" + name + "'");
}

double WeightedSpace::phi(cplx z) const {
    switch (domain) {
        case SpaceDomain::UnitSquareQ: return 0.0;
        case SpaceDomain::PlaneGaussian: return 0.5 * std::norm(z);
        case SpaceDomain::FubiniStudy: return 0.5 * std::log1p(std::norm(z));
    }
    return 0.0;
}

std::string WeightedSpace::describe() const {
    return to_string(domain) + "(p=" + std::to_string(degree) + ")";
}

// --- Gram matrices ----------------------------------------------------------

Eigen::MatrixXcd gram_matrix(const WeightedSpace& space) {
    check_space(space);
    const int p = space.degree;
    const int n = p + 1;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);

    switch (space.domain) {
        case SpaceDomain::UnitSquareQ: {
            const int m = p + 4;
            const auto rule = quad::gauss_legendre(m, -0.5, 0.5);
            std::vector<long double> acc(static_cast<std::size_t>(n * n), 0.0L);
            std::vector<cplxl> pw(static_cast<std::size_t>(n));
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    const cplxl z(rule.nodes[a], rule.nodes[b]);
                    const long double w =
                        static_cast<long double>(rule.weights[a]) * rule.weights[b];
                    pw[0] = 1.0L;
                    for (int l = 1; l < n; ++l) pw[l] = pw[l - 1] * z;
                    for (int l = 0; l < n; ++l)
                        for (int j = l; j < n; j += 4)
                            acc[l + j * n] += w * (pw[l] * std::conj(pw[j])).real();
                }
            }
            // the square is invariant under z -> iz and z -> conj(z): entries
            // vanish unless l = j mod 4 and are real
            for (int l = 0; l < n; ++l)
                for (int j = l; j < n; j += 4) {
                    const double v = static_cast<double>(acc[l + j * n]);
                    S(l, j) = v;
                    S(j, l) = v;
                }
            break;
        }
        case SpaceDomain::PlaneGaussian: {
            // t = p r^2: s_lj = (1/2p) int (t/p)^{(l+j)/2} e^{-t} dt * int e^{i(l-j)theta}
            const auto lag = quad::gauss_laguerre(p + 4, 0.0);
            const auto trap = quad::periodic_trapezoid(2 * p + 4);
            const long double log_p = std::log(static_cast<long double>(p));
            for (int l = 0; l < n; ++l) {
                for (int j = 0; j < n; ++j) {
                    cplxl angular = 0.0L;
                    for (std::size_t k = 0; k < trap.nodes.size(); ++k)
                        angular += static_cast<long double>(trap.weights[k]) *
                                   std::polar(1.0L, static_cast<long double>(l - j) *
                                                        trap.nodes[k]);
                    if (std::abs(angular) < 1e-12L) continue;
                    long double radial = 0.0L;
                    const long double half = 0.5L * (l + j);
                    for (std::size_t k = 0; k < lag.nodes.size(); ++k)
                        radial += static_cast<long double>(lag.weights[k]) *
                                  std::exp(half * (std::log(static_cast<long double>(
                                                       lag.nodes[k])) -
                                                   log_p));
                    radial /= 2.0L * p;
                    const cplxl v = radial * angular;
                    S(l, j) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
                }
            }
            break;
        }
        case SpaceDomain::FubiniStudy:
            for (int l = 0; l < n; ++l)
                S(l, l) = static_cast<double>(std::exp(-log_fs_norm(p, l)));
            break;
    }
    if (!S.allFinite()) throw NumericError("gram_matrix: non-finite entry for " + space.describe());
    return S;
}

// --- OrthonormalBasis -------------------------------------------------------

OrthonormalBasis OrthonormalBasis::identity(int degree) {
    if (degree < 0) throw ParameterError("degree must be nonnegative");
    return from_log_diagonal(std::vector<long double>(static_cast<std::size_t>(degree + 1), 0.0L));
}

OrthonormalBasis OrthonormalBasis::from_log_diagonal(std::vector<long double> log_diag,
                                                     std::optional<WeightedSpace> space) {
    if (log_diag.empty()) throw ParameterError("basis needs at least one element");
    OrthonormalBasis b;
    b.n_ = static_cast<int>(log_diag.size());
    b.rep_ = Representation::Diagonal;
    b.log_diag_ = std::move(log_diag);
    b.space_ = space;
    return b;
}

OrthonormalBasis OrthonormalBasis::from_triangular(std::vector<cplxl> R, int n,
                                                   std::optional<WeightedSpace> space) {
    if (n < 1 || R.size() != static_cast<std::size_t>(n) * n)
        throw ContractError("from_triangular: R must be n x n");
    for (int j = 0; j < n; ++j) {
        for (int l = j + 1; l < n; ++l)
            if (R[l + j * n] != 0.0L) throw ContractError("from_triangular: R is not upper triangular");
        const cplxl d = R[j + j * n];
        if (!(d.real() > 0.0L) || d.imag() != 0.0L)
            throw ContractError("from_triangular: diagonal must be real and positive");
    }
    OrthonormalBasis b;
    b.n_ = n;
    b.rep_ = Representation::Triangular;
    b.R_ = std::move(R);
    b.space_ = space;
    return b;
}

cplxl OrthonormalBasis::entry(int l, int j) const {
    if (l < 0 || j < 0 || l >= n_ || j >= n_) throw ContractError("basis entry out of range");
    if (rep_ == Representation::Diagonal) return l == j ? std::exp(log_diag_[l]) : 0.0L;
    return R_[l + static_cast<std::size_t>(j) * n_];
}

Eigen::MatrixXcd OrthonormalBasis::matrix() const {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
        for (int l = 0; l <= j; ++l) {
            const cplxl v = entry(l, j);
            M(l, j) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
        }
    return M;
}

std::vector<cplxl> OrthonormalBasis::evaluate_ld(cplxl z) const {
    std::vector<cplxl> out(static_cast<std::size_t>(n_));
    if (rep_ == Representation::Diagonal) {
        if (z == 0.0L) {
            out[0] = std::exp(log_diag_[0]);
            return out;
        }
        const long double log_r = std::log(std::abs(z));
        const long double theta = std::arg(z);
        for (int j = 0; j < n_; ++j)
            out[j] = std::polar(std::exp(log_diag_[j] + j * log_r), j * theta);
        return out;
    }
    std::vector<cplxl> pw(static_cast<std::size_t>(n_));
    pw[0] = 1.0L;
    for (int l = 1; l < n_; ++l) pw[l] = pw[l - 1] * z;
    for (int j = 0; j < n_; ++j) {
        cplxl acc = 0.0L;
        for (int l = j; l >= 0; --l) acc += R_[l + static_cast<std::size_t>(j) * n_] * pw[l];
        out[j] = acc;
    }
    return out;
}

std::vector<cplx> OrthonormalBasis::evaluate(cplx z) const {
    const auto v = evaluate_ld(cplxl(z.real(), z.imag()));
    std::vector<cplx> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        out[j] = cplx(static_cast<double>(v[j].real()), static_cast<double>(v[j].imag()));
    return out;
}

std::vector<cplxl> OrthonormalBasis::combine(std::span<const cplx> a) const {
    if (static_cast<int>(a.size()) != n_)
        throw ContractError("combine: expected " + std::to_string(n_) + " coefficients, got " +
                            std::to_string(a.size()));
    std::vector<cplxl> c(static_cast<std::size_t>(n_), 0.0L);
    if (rep_ == Representation::Diagonal) {
        for (int j = 0; j < n_; ++j)
            c[j] = std::exp(log_diag_[j]) * cplxl(a[j].real(), a[j].imag());
        return c;
    }
    for (int j = 0; j < n_; ++j) {
        const cplxl aj(a[j].real(), a[j].imag());
        for (int l = 0; l <= j; ++l) c[l] += R_[l + static_cast<std::size_t>(j) * n_] * aj;
    }
    return c;
}

std::vector<long double> OrthonormalBasis::row_envelope() const {
    std::vector<long double> e(static_cast<std::size_t>(n_), 0.0L);
    if (rep_ == Representation::Diagonal) {
        for (int l = 0; l < n_; ++l) e[l] = std::exp(log_diag_[l]);
        return e;
    }
    for (int j = 0; j < n_; ++j)
        for (int l = 0; l <= j; ++l) e[l] += std::abs(R_[l + static_cast<std::size_t>(j) * n_]);
    return e;
}

long double OrthonormalBasis::log_bergman_diag(cplx z) const {
    const long double r = std::abs(cplxl(z.real(), z.imag()));
    std::vector<long double> terms(static_cast<std::size_t>(n_));
    if (rep_ == Representation::Diagonal) {
        if (r == 0.0L) return 2.0L * log_diag_[0];
        const long double log_r = std::log(r);
        for (int j = 0; j < n_; ++j) terms[j] = 2.0L * (log_diag_[j] + j * log_r);
        return log_sum_exp(terms);
    }
    if (r <= 2.0L) {
        long double acc = 0.0L;
        for (const auto& v : evaluate_ld(cplxl(z.real(), z.imag()))) acc += std::norm(v);
        return std::log(acc);
    }
    // P_j(z) = z^j sum_l R_lj w^{j-l}, w = 1/z
    const cplxl w = 1.0L / cplxl(z.real(), z.imag());
    const long double log_r = std::log(r);
    std::vector<cplxl> pw(static_cast<std::size_t>(n_));
    pw[0] = 1.0L;
    for (int l = 1; l < n_; ++l) pw[l] = pw[l - 1] * w;
    for (int j = 0; j < n_; ++j) {
        cplxl q = 0.0L;
        for (int l = 0; l <= j; ++l) q += R_[l + static_cast<std::size_t>(j) * n_] * pw[j - l];
        terms[j] = std::log(std::norm(q)) + 2.0L * j * log_r;
    }
    return log_sum_exp(terms);
}

// --- constructions ----------------------------------------------------------

OrthonormalBasis cholesky_onb(const Eigen::MatrixXcd& S, std::optional<WeightedSpace> space) {
    const auto n = static_cast<int>(S.rows());
    if (n < 1 || S.cols() != n) throw ContractError("cholesky_onb: S must be square and nonempty");
    if (!S.allFinite()) throw NumericError("cholesky_onb: S has non-finite entries");
    auto at = [n](int i, int j) { return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * n; };

    std::vector<cplxl> L(static_cast<std::size_t>(n) * n, 0.0L);
    for (int j = 0; j < n; ++j) {
        long double d = static_cast<long double>(S(j, j).real());
        for (int k = 0; k < j; ++k) d -= std::norm(L[at(j, k)]);
        if (!(d > 0.0L) || !std::isfinite(d))
            throw DecompositionError("cholesky_onb: matrix is not positive definite (pivot " +
                                         std::to_string(j) + " = " +
                                         std::to_string(static_cast<double>(d)) + ")",
                                     j);
        const long double ljj = std::sqrt(d);
        L[at(j, j)] = ljj;
        for (int i = j + 1; i < n; ++i) {
            cplxl s(S(i, j).real(), S(i, j).imag());
            for (int k = 0; k < j; ++k) s -= L[at(i, k)] * std::conj(L[at(j, k)]);
            L[at(i, j)] = s / ljj;
        }
    }
    // X = L^{-1} by forward substitution, then R = X^*
    std::vector<cplxl> X(static_cast<std::size_t>(n) * n, 0.0L);
    for (int c = 0; c < n; ++c) {
        X[at(c, c)] = 1.0L / L[at(c, c)];
        for (int i = c + 1; i < n; ++i) {
            cplxl s = 0.0L;
            for (int k = c; k < i; ++k) s -= L[at(i, k)] * X[at(k, c)];
            X[at(i, c)] = s / L[at(i, i)];
        }
    }
    std::vector<cplxl> R(static_cast<std::size_t>(n) * n, 0.0L);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l <= j; ++l) R[at(l, j)] = std::conj(X[at(j, l)]);
    for (int j = 0; j < n; ++j) R[at(j, j)] = R[at(j, j)].real();

    auto basis = OrthonormalBasis::from_triangular(std::move(R), n, space);
    basis.cholesky_residual = onb_residual(basis, S);
    basis.gram_condition = condition_number(S, basis);
    return basis;
}

OrthonormalBasis closed_form_basis(const WeightedSpace& space) {
    check_space(space);
    const int p = space.degree;
    std::vector<long double> log_diag(static_cast<std::size_t>(p + 1));
    switch (space.domain) {
        case SpaceDomain::PlaneGaussian:
            // sqrt(p^{j+1} / (pi j!))
            for (int j = 0; j <= p; ++j)
                log_diag[j] = 0.5L * ((j + 1) * std::log(static_cast<long double>(p)) -
                                      std::log(kPiL) - std::lgamma(j + 1.0L));
            break;
        case SpaceDomain::FubiniStudy:
            // sqrt((p+1) binom(p, j))
            for (int j = 0; j <= p; ++j) log_diag[j] = 0.5L * log_fs_norm(p, j);
            break;
        default:
            throw DomainError("closed_form_basis: no closed form for " + space.describe());
    }
    return OrthonormalBasis::from_log_diagonal(std::move(log_diag), space);
}

OrthonormalBasis build_basis(const WeightedSpace& space) {
    if (space.domain == SpaceDomain::UnitSquareQ) return cholesky_onb(gram_matrix(space), space);
    return closed_form_basis(space);
}

std::vector<cplx> evaluate_basis(const OrthonormalBasis& basis, cplx z) {
    return basis.evaluate(z);
}

double bergman_diag(const OrthonormalBasis& basis, cplx z) {
    const long double lk = basis.log_bergman_diag(z);
    const double v = static_cast<double>(std::exp(lk));
    if (!std::isfinite(v))
        throw NumericError("bergman_diag: value exp(" + std::to_string(static_cast<double>(lk)) +
                           ") is outside double range; use log_bergman_diag");
    return v;
}

double extremal_estimate(const OrthonormalBasis& basis, cplx z) {
    const int p = basis.degree();
    if (p < 1) throw ParameterError("extremal_estimate needs degree >= 1");
    return static_cast<double>(basis.log_bergman_diag(z) / (2.0L * p));
}

// --- diagnostics ------------------------------------------------------------

double onb_residual(const OrthonormalBasis& basis, const Eigen::MatrixXcd& S) {
    const int n = basis.dimension();
    if (S.rows() != n || S.cols() != n) throw ContractError("onb_residual: size mismatch");
    std::vector<cplxl> SR(static_cast<std::size_t>(n) * n, 0.0L);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            cplxl acc = 0.0L;
            for (int m = 0; m <= j; ++m)
                acc += cplxl(S(l, m).real(), S(l, m).imag()) * basis.entry(m, j);
            SR[l + static_cast<std::size_t>(j) * n] = acc;
        }
    long double worst = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplxl acc = 0.0L;
            for (int l = 0; l <= i; ++l)
                acc += std::conj(basis.entry(l, i)) * SR[l + static_cast<std::size_t>(j) * n];
            if (i == j) acc -= 1.0L;
            worst = std::max(worst, std::abs(acc));
        }
    return static_cast<double>(worst);
}

double requadrature_residual(const OrthonormalBasis& basis) {
    if (!basis.space()) throw DomainError("requadrature_residual: basis has no weighted space");
    const auto& space = *basis.space();
    const int p = space.degree;
    const int n = basis.dimension();
    std::vector<cplxl> G(static_cast<std::size_t>(n) * n, 0.0L);
    auto add_node = [&](cplxl z, long double w) {
        const auto v = basis.evaluate_ld(z);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) G[i + static_cast<std::size_t>(j) * n] += w * v[i] * std::conj(v[j]);
    };
    switch (space.domain) {
        case SpaceDomain::UnitSquareQ: {
            const auto rule = quad::gauss_legendre(p + 9, -0.5, 0.5);
            for (std::size_t a = 0; a < rule.nodes.size(); ++a)
                for (std::size_t b = 0; b < rule.nodes.size(); ++b)
                    add_node(cplxl(rule.nodes[a], rule.nodes[b]),
                             static_cast<long double>(rule.weights[a]) * rule.weights[b]);
            break;
        }
        case SpaceDomain::PlaneGaussian: {
            // r = sqrt(t/p), measure e^{-t} dt dtheta / (2p)
            const auto lag = quad::gauss_laguerre(p + 10, 0.0);
            const auto trap = quad::periodic_trapezoid(2 * p + 7);
            for (std::size_t a = 0; a < lag.nodes.size(); ++a) {
                const long double r = std::sqrt(static_cast<long double>(lag.nodes[a]) / p);
                for (std::size_t b = 0; b < trap.nodes.size(); ++b)
                    add_node(std::polar(r, static_cast<long double>(trap.nodes[b])),
                             static_cast<long double>(lag.weights[a]) * trap.weights[b] /
                                 (2.0L * p));
            }
            break;
        }
        case SpaceDomain::FubiniStudy: {
            // u = r^2/(1+r^2), measure (1-u)^p du dtheta / (2 pi)
            const auto leg = quad::gauss_legendre(p + 5, 0.0, 1.0);
            const auto trap = quad::periodic_trapezoid(2 * p + 7);
            for (std::size_t a = 0; a < leg.nodes.size(); ++a) {
                const long double u = leg.nodes[a];
                const long double r = std::sqrt(u / (1.0L - u));
                const long double w = leg.weights[a] * std::pow(1.0L - u, p) / (2.0L * kPiL);
                for (std::size_t b = 0; b < trap.nodes.size(); ++b)
                    add_node(std::polar(r, static_cast<long double>(trap.nodes[b])),
                             w * trap.weights[b]);
            }
            break;
        }
    }
    long double worst = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplxl g = G[i + static_cast<std::size_t>(j) * n];
            if (i == j) g -= 1.0L;
            worst = std::max(worst, std::abs(g));
        }
    return static_cast<double>(worst);
}

double condition_number(const Eigen::MatrixXcd& S, const OrthonormalBasis& basis) {
    const int n = basis.dimension();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(S, Eigen::EigenvaluesOnly);
    const double lambda_max = eig.eigenvalues().maxCoeff();
    // sigma_max(R)^2 = lambda_max(R R^*) = 1 / lambda_min(S), by power iteration
    std::vector<cplxl> x(static_cast<std::size_t>(n), 1.0L), y(static_cast<std::size_t>(n));
    long double sigma2 = 0.0L;
    for (int iter = 0; iter < 500; ++iter) {
        // y = R^* x
        for (int j = 0; j < n; ++j) {
            cplxl acc = 0.0L;
            for (int l = 0; l <= j; ++l) acc += std::conj(basis.entry(l, j)) * x[l];
            y[j] = acc;
        }
        // x = R y
        long double norm = 0.0L;
        for (int l = 0; l < n; ++l) {
            cplxl acc = 0.0L;
            for (int j = l; j < n; ++j) acc += basis.entry(l, j) * y[j];
            x[l] = acc;
            norm += std::norm(acc);
        }
        norm = std::sqrt(norm);
        if (!(norm > 0.0L)) break;
        for (auto& v : x) v /= norm;
        const long double prev = sigma2;
        sigma2 = norm;
        if (std::fabs(sigma2 - prev) <= 1e-14L * sigma2) break;
    }
    return static_cast<double>(lambda_max * sigma2);
}

void write_basis_csv(const OrthonormalBasis& basis, std::ostream& out) {
    out << "row,col,re,im\n";
    char buf[128];
    for (int l = 0; l < basis.dimension(); ++l)
        for (int j = l; j < basis.dimension(); ++j) {
            const cplxl v = basis.entry(l, j);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", l, j,
                          static_cast<double>(v.real()), static_cast<double>(v.imag()));
            out << buf;
        }
}

}  // namespace rzero
