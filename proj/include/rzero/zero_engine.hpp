#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rzero/ensembles.hpp"
#include "rzero/weighted_basis.hpp"

namespace rzero {

/// Monomial-basis polynomial c_0 + c_1 z + ... + c_p z^p with extended-range
/// coefficients. Leading coefficients that are negligible relative to their
/// expected size are trimmed; the nominal degree p is kept for normalization.
class Polynomial {
public:
    /// Trim rule: drop c_j while |c_j| <= eps * p * max|c|.
    explicit Polynomial(std::vector<cplxl> coeffs);
    Polynomial(std::vector<cplx> coeffs);  // NOLINT: implicit from double coefficients
    /// Trim rule scaled per coefficient: drop c_j while
    /// |c_j| <= eps * p * scale * envelope_j.
    Polynomial(std::vector<cplxl> coeffs, const std::vector<long double>& envelope, long double scale);

    int nominal_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    int degree() const noexcept { return degree_; }
    const std::vector<cplxl>& coefficients() const noexcept { return coeffs_; }
    bool real_coefficients() const noexcept;

    cplxl operator()(cplxl z) const;
    /// |f(z)| / sum |c_j||z|^j, evaluated without overflow.
    double relative_residual(cplx z) const;

private:
    void trim(const std::vector<long double>& threshold);

    std::vector<cplxl> coeffs_;
    std::vector<long double> mag_;
    int degree_ = 0;
};

/// f = sum_j a_j P_j with a drawn from the substream (seed, stream).
Polynomial random_polynomial(const OrthonormalBasis& basis, const CoefficientEnsemble& ensemble,
                             std::uint64_t seed, std::uint64_t stream = 0);
/// Same, with explicit coefficients a (size = basis dimension).
Polynomial basis_polynomial(const OrthonormalBasis& basis, std::span<const cplx> a);

struct RealZeroPolicy {
    double eps = 1e-9;
    bool is_real(cplx z) const { return std::abs(z.imag()) <= eps * (1.0 + std::abs(z)); }
};

struct ZeroSet {
    std::vector<cplx> zeros;
    int degree = 0;            // nominal degree p (normalization)
    int effective_degree = 0;  // number of finite zeros
    int real_count = 0;
    double max_backward_error = 0.0;
};

/// All finite zeros. Closed forms up to degree 2, balanced companion matrix up
/// to kCompanionMaxDegree, Aberth-Ehrlich iteration above.
inline constexpr int kCompanionMaxDegree = 64;
ZeroSet roots(const Polynomial& poly, RealZeroPolicy policy = {});

int count_real_zeros(const ZeroSet& zeros, RealZeroPolicy policy = {});

/// Rectangle [xmin, xmax] x [ymin, ymax].
struct Box {
    double xmin = -2.0, xmax = 2.0, ymin = -2.0, ymax = 2.0;
    bool operator==(const Box&) const = default;
};

struct Grid {
    int rows = 256, cols = 256;
    bool operator==(const Grid&) const = default;
};

/// Binned measure on a box plus one out-of-box cell. Row index grows with Im z.
///
/// Counting measures (divisor p) store integer zero counts and report
/// mass = count / p, so accumulation and merging are exact. Real-mass measures
/// (divisor 1) hold arbitrary nonnegative masses, e.g. binned references.
class EmpiricalMeasure2D {
public:
    EmpiricalMeasure2D(Box box, Grid grid, int divisor = 1);

    static EmpiricalMeasure2D counting(Box box, Grid grid, int degree) {
        return EmpiricalMeasure2D(box, grid, degree);
    }

    const Box& box() const noexcept { return box_; }
    const Grid& grid() const noexcept { return grid_; }
    int divisor() const noexcept { return divisor_; }

    std::optional<std::pair<int, int>> locate(cplx z) const;
    cplx bin_center(int row, int col) const;

    /// Adds every zero with weight 1/p, and p - effective_degree zeros at
    /// infinity to the out-of-box cell. Requires divisor == zeros.degree.
    void accumulate(const ZeroSet& zeros);
    /// Real-mass measures only.
    void add_mass(int row, int col, double mass);
    void add_out_of_box(double mass);
    void merge(const EmpiricalMeasure2D& other);

    double bin_mass(int row, int col) const;
    double out_of_box() const;
    double in_box() const;
    double total() const;
    /// Real-mass copy scaled to total 1. ContractError if total is zero.
    EmpiricalMeasure2D normalized() const;
    bool same_grid(const EmpiricalMeasure2D& other) const {
        return box_ == other.box_ && grid_ == other.grid_;
    }

private:
    std::size_t index(int row, int col) const;

    Box box_;
    Grid grid_;
    int divisor_;
    std::vector<double> raw_;
    double raw_out_ = 0.0;
};

/// CSV row,col,re,im,mass for every bin, then -1,-1,0,0,<out-of-box>.
void write_bin_csv(const EmpiricalMeasure2D& m, std::ostream& out);
/// Binary P5 raster, 8-bit, scaled by the largest bin; +Im points up.
void write_pgm(const EmpiricalMeasure2D& m, std::ostream& out);
/// CSV trial,re,im.
void write_zero_csv_header(std::ostream& out);
void write_zero_csv_rows(std::ostream& out, std::size_t trial, const ZeroSet& zeros);

}  // namespace rzero
