#include "rzero/zero_engine.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "rzero/error.hpp"

namespace rzero {

namespace {

constexpr long double kEps = std::numeric_limits<double>::epsilon();

cplx to_double(cplxl z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace

// --- Polynomial -------------------------------------------------------------

Polynomial::Polynomial(std::vector<cplxl> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ContractError("polynomial needs at least one coefficient");
    long double top = 0.0L;
    for (const auto& c : coeffs_) top = std::max(top, std::abs(c));
    const long double p = static_cast<long double>(coeffs_.size() - 1);
    trim(std::vector<long double>(coeffs_.size(), kEps * p * top));
}

Polynomial::Polynomial(std::vector<cplx> coeffs)
    : Polynomial([&] {
          std::vector<cplxl> c;
          c.reserve(coeffs.size());
          for (auto v : coeffs) c.emplace_back(v.real(), v.imag());
          return c;
      }()) {}

Polynomial::Polynomial(std::vector<cplxl> coeffs, const std::vector<long double>& envelope,
                       long double scale)
    : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ContractError("polynomial needs at least one coefficient");
    if (envelope.size() != coeffs_.size()) throw ContractError("envelope size mismatch");
    const long double p = static_cast<long double>(coeffs_.size() - 1);
    std::vector<long double> threshold(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) threshold[j] = kEps * p * scale * envelope[j];
    trim(threshold);
}

void Polynomial::trim(const std::vector<long double>& threshold) {
    for (const auto& c : coeffs_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NumericError("polynomial has a non-finite coefficient");
    mag_.resize(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) mag_[j] = std::abs(coeffs_[j]);
    degree_ = static_cast<int>(coeffs_.size()) - 1;
    while (degree_ > 0 && std::abs(coeffs_[degree_]) <= threshold[degree_]) --degree_;
}

bool Polynomial::real_coefficients() const noexcept {
    for (int j = 0; j <= degree_; ++j)
        if (coeffs_[j].imag() != 0.0L) return false;
    return true;
}

cplxl Polynomial::operator()(cplxl z) const {
    cplxl acc = 0.0L;
    for (int j = degree_; j >= 0; --j) acc = acc * z + coeffs_[j];
    return acc;
}

double Polynomial::relative_residual(cplx z) const {
    const cplxl zl(z.real(), z.imag());
    const long double r = std::abs(zl);
    cplxl f = 0.0L;
    long double s = 0.0L;
    if (r <= 1.0L) {
        for (int j = degree_; j >= 0; --j) {
            f = f * zl + coeffs_[j];
            s = s * r + mag_[j];
        }
    } else {
        // f(z) / z^n through the reversed polynomial in w = 1/z
        const cplxl w = 1.0L / zl;
        const long double rw = 1.0L / r;
        for (int j = 0; j <= degree_; ++j) {
            f = f * w + coeffs_[j];
            s = s * rw + mag_[j];
        }
    }
    if (s == 0.0L) return 0.0;
    return static_cast<double>(std::abs(f) / s);
}

Polynomial basis_polynomial(const OrthonormalBasis& basis, std::span<const cplx> a) {
    long double scale = 0.0L;
    for (auto v : a) scale = std::max<long double>(scale, std::abs(v));
    return Polynomial(basis.combine(a), basis.row_envelope(), scale);
}

Polynomial random_polynomial(const OrthonormalBasis& basis, const CoefficientEnsemble& ensemble,
                             std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed, stream);
    const auto a = ensemble.sample(basis.dimension(), rng);
    return basis_polynomial(basis, a);
}

// --- root finding -----------------------------------------------------------

namespace {

// c has degree k >= 1 with c[0] != 0 and c[k] != 0.
std::vector<cplx> closed_form_roots(const std::vector<cplxl>& c, bool real) {
    const int k = static_cast<int>(c.size()) - 1;
    if (k == 1) return {to_double(-c[0] / c[1])};
    if (real) {
        const long double a = c[2].real(), b = c[1].real(), cc = c[0].real();
        const long double disc = b * b - 4.0L * a * cc;
        if (disc >= 0.0L) {
            const long double q = -0.5L * (b + std::copysign(std::sqrt(disc), b));
            return {cplx(static_cast<double>(q / a), 0.0), cplx(static_cast<double>(cc / q), 0.0)};
        }
        const long double re = -b / (2.0L * a);
        const long double im = std::sqrt(-disc) / (2.0L * a);
        return {cplx(static_cast<double>(re), static_cast<double>(im)),
                cplx(static_cast<double>(re), static_cast<double>(-im))};
    }
    const cplxl a = c[2], b = c[1], cc = c[0];
    cplxl s = std::sqrt(b * b - 4.0L * a * cc);
    if ((std::conj(b) * s).real() < 0.0L) s = -s;
    const cplxl q = -0.5L * (b + s);
    return {to_double(q / a), to_double(cc / q)};
}

template <typename Matrix>
void balance(Matrix& A) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const auto n = A.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(A(j, i));
                    r += std::abs(A(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

// Newton correction f/f' in extended precision, through the reversed
// polynomial when |x| > 1; also returns |f| / sum |c_j||x|^j.
std::pair<cplxl, long double> newton_ratio(const std::vector<cplxl>& c,
                                           const std::vector<long double>& mag, cplxl x) {
    using L = long double;
    const int k = static_cast<int>(c.size()) - 1;
    const L r = std::abs(x);
    const bool reversed = r > 1.0L;
    const cplxl v = reversed ? 1.0L / x : x;
    const L vr = v.real(), vi = v.imag(), rv = reversed ? 1.0L / r : r;
    L fr = 0, fi = 0, dr = 0, di = 0, s = 0;
    for (int i = 0; i <= k; ++i) {
        const int j = reversed ? i : k - i;
        const L tdr = dr * vr - di * vi + fr;
        di = dr * vi + di * vr + fi;
        dr = tdr;
        const L tfr = fr * vr - fi * vi + c[j].real();
        fi = fr * vi + fi * vr + c[j].imag();
        fr = tfr;
        s = s * rv + mag[j];
    }
    const cplxl f(fr, fi), df(dr, di);
    const L res = std::abs(f) / s;
    if (!reversed) return {df == 0.0L ? cplxl(0.0L) : f / df, res};
    const cplxl den = static_cast<L>(k) * f - v * df;
    return {den == 0.0L ? cplxl(0.0L) : x * f / den, res};
}

// Newton steps in extended precision; a step is kept only if it lowers the
// relative residual.
void polish(const std::vector<cplxl>& c, std::vector<cplx>& z) {
    std::vector<long double> mag(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) mag[j] = std::abs(c[j]);
    for (auto& root : z) {
        cplxl x(root.real(), root.imag());
        auto [step, res] = newton_ratio(c, mag, x);
        for (int iter = 0; iter < 3 && step != 0.0L; ++iter) {
            const cplxl next = x - step;
            auto [next_step, next_res] = newton_ratio(c, mag, next);
            if (!(next_res < res)) break;
            x = next;
            step = next_step;
            res = next_res;
        }
        root = to_double(x);
    }
}

template <typename Scalar, typename Solver>
std::vector<cplx> companion_eigenvalues(const std::vector<cplx>& monic_tail, int k) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix C = Matrix::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        if constexpr (std::is_same_v<Scalar, double>)
            C(0, j) = -monic_tail[k - 1 - j].real();
        else
            C(0, j) = -monic_tail[k - 1 - j];
    }
    for (int i = 1; i < k; ++i) C(i, i - 1) = 1.0;
    balance(C);
    Solver solver(C, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigensolve did not converge");
    std::vector<cplx> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[i] = solver.eigenvalues()[i];
    return out;
}

std::vector<cplx> companion_roots(const std::vector<cplxl>& c, bool real) {
    const int k = static_cast<int>(c.size()) - 1;
    std::vector<cplx> tail(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) tail[j] = to_double(c[j] / c[k]);
    auto z = real ? companion_eigenvalues<double, Eigen::EigenSolver<Eigen::MatrixXd>>(tail, k)
                  : companion_eigenvalues<cplx, Eigen::ComplexEigenSolver<Eigen::MatrixXcd>>(tail, k);
    polish(c, z);
    return z;
}

// Upper convex hull of (j, log|c_j|) gives one circle per hull edge; roots
// start evenly spread on the circles.
std::vector<cplx> newton_polygon_start(const std::vector<long double>& logmag) {
    const int k = static_cast<int>(logmag.size()) - 1;
    std::vector<int> hull;
    for (int j = 0; j <= k; ++j) {
        if (!std::isfinite(logmag[j])) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            const long double cross = (b - a) * (logmag[j] - logmag[a]) - (j - a) * (logmag[b] - logmag[a]);
            if (cross >= 0.0L)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(j);
    }
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(k));
    for (std::size_t h = 1; h < hull.size(); ++h) {
        const int i = hull[h - 1], j = hull[h];
        const int count = j - i;
        const double radius = static_cast<double>(std::exp((logmag[i] - logmag[j]) / count));
        const double offset = 2.0 * std::numbers::pi * i / k + 0.4;
        for (int m = 0; m < count; ++m)
            z.push_back(std::polar(radius, 2.0 * std::numbers::pi * m / count + offset));
    }
    return z;
}

template <typename T>
std::vector<cplx> aberth_roots(const std::vector<cplxl>& c) {
    const int k = static_cast<int>(c.size()) - 1;
    long double top = 0.0L;
    for (const auto& v : c) top = std::max(top, std::abs(v));
    std::vector<T> cr(c.size()), ci(c.size()), ca(c.size());
    std::vector<long double> logmag(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        cr[j] = static_cast<T>(c[j].real() / top);
        ci[j] = static_cast<T>(c[j].imag() / top);
        ca[j] = static_cast<T>(std::abs(c[j]) / top);
        logmag[j] = c[j] == 0.0L ? -std::numeric_limits<long double>::infinity()
                                 : std::log(std::abs(c[j]));
    }
    const auto start = newton_polygon_start(logmag);
    std::vector<T> zr(static_cast<std::size_t>(k)), zi(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        zr[i] = start[i].real();
        zi[i] = start[i].imag();
    }
    std::vector<char> done(static_cast<std::size_t>(k), 0);
    const T eps = static_cast<T>(kEps);
    int remaining = k;

    for (int sweep = 0; sweep < 500 && remaining > 0; ++sweep) {
        for (int i = 0; i < k; ++i) {
            if (done[i]) continue;
            const T xr = zr[i], xi = zi[i];
            const T r2 = xr * xr + xi * xi;
            // numerator / denominator of the Newton ratio
            T nr, ni, dr, di, fabs_val, bound;
            if (r2 <= 1) {
                T fr = 0, fi = 0, gr = 0, gi = 0, s = 0;
                const T r = std::sqrt(r2);
                for (int j = k; j >= 0; --j) {
                    const T tgr = gr * xr - gi * xi + fr;
                    gi = gr * xi + gi * xr + fi;
                    gr = tgr;
                    const T tfr = fr * xr - fi * xi + cr[j];
                    fi = fr * xi + fi * xr + ci[j];
                    fr = tfr;
                    s = s * r + ca[j];
                }
                nr = fr;
                ni = fi;
                dr = gr;
                di = gi;
                fabs_val = std::sqrt(fr * fr + fi * fi);
                bound = s;
            } else {
                // g(w) = sum c_j w^{k-j}, f/f' = z g / (k g - w g')
                const T wr = xr / r2, wi = -xi / r2;
                const T rw = 1 / std::sqrt(r2);
                T fr = 0, fi = 0, gr = 0, gi = 0, s = 0;
                for (int j = 0; j <= k; ++j) {
                    const T tgr = gr * wr - gi * wi + fr;
                    gi = gr * wi + gi * wr + fi;
                    gr = tgr;
                    const T tfr = fr * wr - fi * wi + cr[j];
                    fi = fr * wi + fi * wr + ci[j];
                    fr = tfr;
                    s = s * rw + ca[j];
                }
                nr = xr * fr - xi * fi;
                ni = xr * fi + xi * fr;
                dr = k * fr - (wr * gr - wi * gi);
                di = k * fi - (wr * gi + wi * gr);
                fabs_val = std::sqrt(fr * fr + fi * fi);
                bound = s;
            }
            if (fabs_val <= 4 * eps * bound) {
                done[i] = 1;
                --remaining;
                continue;
            }
            T sr = 0, si = 0;
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                const T ar = xr - zr[j], ai = xi - zi[j];
                const T inv = 1 / (ar * ar + ai * ai);
                sr += ar * inv;
                si -= ai * inv;
            }
            // delta = N / (1 - N S) = num / (den - num S)
            const T er = dr - (nr * sr - ni * si);
            const T ei = di - (nr * si + ni * sr);
            const T e2 = er * er + ei * ei;
            if (!(e2 > 0) || !std::isfinite(e2)) continue;
            const T delta_r = (nr * er + ni * ei) / e2;
            const T delta_i = (ni * er - nr * ei) / e2;
            zr[i] = xr - delta_r;
            zi[i] = xi - delta_i;
            if (delta_r * delta_r + delta_i * delta_i <= 4 * eps * eps * r2) {
                done[i] = 1;
                --remaining;
            }
        }
    }
    std::vector<cplx> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out[i] = cplx(static_cast<double>(zr[i]), static_cast<double>(zi[i]));
        if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
            throw NumericError("Aberth iteration produced a non-finite root");
    }
    return out;
}

}  // namespace

ZeroSet roots(const Polynomial& poly, RealZeroPolicy policy) {
    const int n = poly.degree();
    if (n < 1) throw NoRootsError("polynomial has degree 0 after trimming; no zeros to compute");
    const auto& all = poly.coefficients();
    ZeroSet out;
    out.degree = poly.nominal_degree();
    out.effective_degree = n;
    out.zeros.reserve(static_cast<std::size_t>(n));

    int low = 0;
    while (all[low] == 0.0L) ++low;  // exact zeros at the origin
    for (int i = 0; i < low; ++i) out.zeros.emplace_back(0.0, 0.0);
    std::vector<cplxl> c(all.begin() + low, all.begin() + n + 1);
    const int k = n - low;
    const bool real = poly.real_coefficients();

    if (k >= 1) {
        std::vector<cplx> z;
        if (k <= 2) {
            z = closed_form_roots(c, real);
        } else if (k <= kCompanionMaxDegree) {
            z = companion_roots(c, real);
        } else {
            long double hi = 0.0L, lo = std::numeric_limits<long double>::infinity();
            for (const auto& v : c)
                if (v != 0.0L) {
                    hi = std::max(hi, std::abs(v));
                    lo = std::min(lo, std::abs(v));
                }
            z = hi / lo > 1e280L ? aberth_roots<long double>(c) : aberth_roots<double>(c);
            polish(c, z);
        }
        for (auto root : z) {
            out.max_backward_error = std::max(out.max_backward_error, poly.relative_residual(root));
            out.zeros.push_back(root);
        }
    }
    out.real_count = count_real_zeros(out, policy);
    return out;
}

int count_real_zeros(const ZeroSet& zeros, RealZeroPolicy policy) {
    int count = 0;
    for (auto z : zeros.zeros)
        if (policy.is_real(z)) ++count;
    return count;
}

// --- EmpiricalMeasure2D -----------------------------------------------------

EmpiricalMeasure2D::EmpiricalMeasure2D(Box box, Grid grid, int divisor)
    : box_(box), grid_(grid), divisor_(divisor) {
    if (grid.rows < 1 || grid.cols < 1) throw ParameterError("grid must be nonempty");
    if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin)) throw ParameterError("box is empty");
    if (divisor < 1) throw ParameterError("divisor must be at least 1");
    raw_.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0.0);
}

std::size_t EmpiricalMeasure2D::index(int row, int col) const {
    if (row < 0 || col < 0 || row >= grid_.rows || col >= grid_.cols)
        throw ContractError("bin index out of range");
    return static_cast<std::size_t>(row) * grid_.cols + col;
}

std::optional<std::pair<int, int>> EmpiricalMeasure2D::locate(cplx z) const {
    const double x = z.real(), y = z.imag();
    if (!(x >= box_.xmin && x <= box_.xmax && y >= box_.ymin && y <= box_.ymax)) return std::nullopt;
    int col = static_cast<int>(std::floor((x - box_.xmin) / (box_.xmax - box_.xmin) * grid_.cols));
    int row = static_cast<int>(std::floor((y - box_.ymin) / (box_.ymax - box_.ymin) * grid_.rows));
    col = std::clamp(col, 0, grid_.cols - 1);
    row = std::clamp(row, 0, grid_.rows - 1);
    return std::make_pair(row, col);
}

cplx EmpiricalMeasure2D::bin_center(int row, int col) const {
    const double hx = (box_.xmax - box_.xmin) / grid_.cols;
    const double hy = (box_.ymax - box_.ymin) / grid_.rows;
    return {box_.xmin + (col + 0.5) * hx, box_.ymin + (row + 0.5) * hy};
}

void EmpiricalMeasure2D::accumulate(const ZeroSet& zeros) {
    if (zeros.degree != divisor_)
        throw ContractError("accumulate: measure counts degree-" + std::to_string(divisor_) +
                            " zeros, got a degree-" + std::to_string(zeros.degree) + " zero set");
    for (auto z : zeros.zeros) {
        if (auto bin = locate(z))
            raw_[index(bin->first, bin->second)] += 1.0;
        else
            raw_out_ += 1.0;
    }
    raw_out_ += static_cast<double>(zeros.degree - static_cast<int>(zeros.zeros.size()));
}

void EmpiricalMeasure2D::add_mass(int row, int col, double mass) {
    if (divisor_ != 1) throw ContractError("add_mass on a counting measure");
    if (!(mass >= 0.0)) throw ContractError("add_mass: mass must be nonnegative");
    raw_[index(row, col)] += mass;
}

void EmpiricalMeasure2D::add_out_of_box(double mass) {
    if (divisor_ != 1) throw ContractError("add_out_of_box on a counting measure");
    if (!(mass >= 0.0)) throw ContractError("add_out_of_box: mass must be nonnegative");
    raw_out_ += mass;
}

void EmpiricalMeasure2D::merge(const EmpiricalMeasure2D& other) {
    if (!same_grid(other) || divisor_ != other.divisor_)
        throw ContractError("merge: measures differ in box, grid or divisor");
    for (std::size_t i = 0; i < raw_.size(); ++i) raw_[i] += other.raw_[i];
    raw_out_ += other.raw_out_;
}

double EmpiricalMeasure2D::bin_mass(int row, int col) const { return raw_[index(row, col)] / divisor_; }

double EmpiricalMeasure2D::out_of_box() const { return raw_out_ / divisor_; }

double EmpiricalMeasure2D::in_box() const {
    double acc = 0.0;
    for (double v : raw_) acc += v;
    return acc / divisor_;
}

double EmpiricalMeasure2D::total() const {
    double acc = raw_out_;
    for (double v : raw_) acc += v;
    return acc / divisor_;
}

EmpiricalMeasure2D EmpiricalMeasure2D::normalized() const {
    double acc = raw_out_;
    for (double v : raw_) acc += v;
    if (!(acc > 0.0)) throw ContractError("normalized: measure has zero total mass");
    EmpiricalMeasure2D out(box_, grid_, 1);
    for (std::size_t i = 0; i < raw_.size(); ++i) out.raw_[i] = raw_[i] / acc;
    out.raw_out_ = raw_out_ / acc;
    return out;
}

// --- output -----------------------------------------------------------------

void write_bin_csv(const EmpiricalMeasure2D& m, std::ostream& out) {
    out << "row,col,re,im,mass\n";
    char buf[160];
    for (int r = 0; r < m.grid().rows; ++r)
        for (int c = 0; c < m.grid().cols; ++c) {
            const cplx z = m.bin_center(r, c);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r, c, z.real(), z.imag(),
                          m.bin_mass(r, c));
            out << buf;
        }
    std::snprintf(buf, sizeof buf, "-1,-1,0,0,%.17g\n", m.out_of_box());
    out << buf;
}

void write_pgm(const EmpiricalMeasure2D& m, std::ostream& out) {
    const int rows = m.grid().rows, cols = m.grid().cols;
    double top = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) top = std::max(top, m.bin_mass(r, c));
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    std::vector<unsigned char> line(static_cast<std::size_t>(cols));
    for (int r = rows - 1; r >= 0; --r) {
        for (int c = 0; c < cols; ++c)
            line[c] = top > 0.0 ? static_cast<unsigned char>(std::lround(255.0 * m.bin_mass(r, c) / top))
                                : 0;
        out.write(reinterpret_cast<const char*>(line.data()), cols);
    }
}

void write_zero_csv_header(std::ostream& out) { out << "trial,re,im\n"; }

void write_zero_csv_rows(std::ostream& out, std::size_t trial, const ZeroSet& zeros) {
    char buf[96];
    for (auto z : zeros.zeros) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", trial, z.real(), z.imag());
        out << buf;
    }
}

}  // namespace rzero
