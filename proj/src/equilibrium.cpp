#include "rzero/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rzero/error.hpp"
#include "rzero/quadrature.hpp"
#include "rzero/rng.hpp"
#include "rzero/weighted_basis.hpp"

namespace rzero {

std::string to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::UnitDiskUniform: return "unit_disk";
        case ReferenceKind::FubiniStudyMeasure: return "fubini_study";
        case ReferenceKind::SquareBoundary: return "square_boundary";
    }
    return "unknown";
}

ReferenceMeasure ReferenceMeasure::square_boundary(int degree) {
    if (degree < 1 || degree > kMaxSquareDegree)
        throw ParameterError("square_boundary: degree must lie in [1, " +
                             std::to_string(kMaxSquareDegree) + "]");
    ReferenceMeasure m(ReferenceKind::SquareBoundary);
    m.degree_ = degree;
    return m;
}

double ReferenceMeasure::density(cplx z) const {
    switch (kind_) {
        case ReferenceKind::UnitDiskUniform:
            return std::norm(z) <= 1.0 ? std::numbers::inv_pi : 0.0;
        case ReferenceKind::FubiniStudyMeasure: {
            const double s = 1.0 + std::norm(z);
            return std::numbers::inv_pi / (s * s);
        }
        case ReferenceKind::SquareBoundary:
            break;
    }
    throw DomainError("the square's equilibrium measure lives on a curve and has no pointwise density");
}

double ReferenceMeasure::total_mass() const {
    if (!has_density()) throw DomainError("total_mass: no pointwise density");
    // radial densities: mass = int_0^inf 2 pi r rho(r) dr
    const double upper = kind_ == ReferenceKind::UnitDiskUniform
                             ? 1.0
                             : std::numeric_limits<double>::infinity();
    auto f = [this](double r) { return 2.0 * std::numbers::pi * r * density(cplx(r, 0.0)); };
    return quad::integrate(f, 0.0, upper).value;
}

namespace {

// Mass of [0, x] x [0, y] (signed, odd in each argument) under a density kind.
double corner_mass(ReferenceKind kind, double x, double y) {
    const double sx = std::copysign(1.0, x), sy = std::copysign(1.0, y);
    x = std::fabs(x);
    y = std::fabs(y);
    double m = 0.0;
    if (kind == ReferenceKind::UnitDiskUniform) {
        x = std::min(x, 1.0);
        y = std::min(y, 1.0);
        if (x * x + y * y <= 1.0) {
            m = x * y;
        } else {
            // int_0^x min(y, sqrt(1-u^2)) du, the two branches meeting at u* = sqrt(1-y^2)
            auto S = [](double t) { return 0.5 * (t * std::sqrt(std::max(0.0, 1.0 - t * t)) + std::asin(t)); };
            const double us = std::sqrt(1.0 - y * y);
            m = y * us + S(x) - S(us);
        }
        m *= std::numbers::inv_pi;
    } else {
        const double ax = std::sqrt(1.0 + x * x), ay = std::sqrt(1.0 + y * y);
        m = (x / ax * std::atan(y / ax) + y / ay * std::atan(x / ay)) / (2.0 * std::numbers::pi);
    }
    return sx * sy * m;
}

double rectangle_mass(ReferenceKind kind, double x0, double x1, double y0, double y1) {
    return corner_mass(kind, x1, y1) - corner_mass(kind, x0, y1) - corner_mass(kind, x1, y0) +
           corner_mass(kind, x0, y0);
}

}  // namespace

EmpiricalMeasure2D bin_reference(const ReferenceMeasure& measure, Box box, Grid grid) {
    if (grid.rows < 1 || grid.cols < 1) throw ParameterError("bin_reference: empty grid");
    EmpiricalMeasure2D out(box, grid);
    const double hx = (box.xmax - box.xmin) / grid.cols;
    const double hy = (box.ymax - box.ymin) / grid.rows;

    if (measure.has_density()) {
        for (int r = 0; r < grid.rows; ++r)
            for (int c = 0; c < grid.cols; ++c) {
                const double x0 = box.xmin + c * hx, y0 = box.ymin + r * hy;
                const double x1 = c + 1 == grid.cols ? box.xmax : x0 + hx;
                const double y1 = r + 1 == grid.rows ? box.ymax : y0 + hy;
                out.add_mass(r, c, std::max(0.0, rectangle_mass(measure.kind(), x0, x1, y0, y1)));
            }
        const double in_box = rectangle_mass(measure.kind(), box.xmin, box.xmax, box.ymin, box.ymax);
        out.add_out_of_box(std::max(0.0, 1.0 - in_box));
        return out;
    }

    // dd^c V = (1/2pi) Laplacian(V) dlambda on a ghost-padded grid of centres
    const auto basis = build_basis({SpaceDomain::UnitSquareQ, measure.degree()});
    const int R = grid.rows + 2, C = grid.cols + 2;
    std::vector<double> V(static_cast<std::size_t>(R) * C);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            const cplx z(box.xmin + (c - 0.5) * hx, box.ymin + (r - 0.5) * hy);
            V[static_cast<std::size_t>(r) * C + c] = extremal_estimate(basis, z);
        }
    auto at = [&](int r, int c) { return V[static_cast<std::size_t>(r) * C + c]; };
    std::vector<double> mass(static_cast<std::size_t>(grid.rows) * grid.cols);
    double total = 0.0;
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c) {
            const double centre = at(r + 1, c + 1);
            const double lap = (at(r + 1, c) + at(r + 1, c + 2) - 2.0 * centre) / (hx * hx) +
                               (at(r, c + 1) + at(r + 2, c + 1) - 2.0 * centre) / (hy * hy);
            const double m = std::max(0.0, lap * hx * hy / (2.0 * std::numbers::pi));
            mass[static_cast<std::size_t>(r) * grid.cols + c] = m;
            total += m;
        }
    if (!(total > 0.0)) throw NumericError("bin_reference: square boundary Laplacian has no positive mass");
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            out.add_mass(r, c, mass[static_cast<std::size_t>(r) * grid.cols + c] / total);
    return out;
}

double tv_distance(const EmpiricalMeasure2D& a, const EmpiricalMeasure2D& b) {
    if (!a.same_grid(b)) throw ContractError("tv_distance: measures live on different grids");
    const auto na = a.normalized();
    const auto nb = b.normalized();
    double acc = std::fabs(na.out_of_box() - nb.out_of_box());
    for (int r = 0; r < a.grid().rows; ++r)
        for (int c = 0; c < a.grid().cols; ++c) acc += std::fabs(na.bin_mass(r, c) - nb.bin_mass(r, c));
    return std::min(1.0, 0.5 * acc);
}

double distance_to_square_boundary(cplx z) {
    const double ax = std::fabs(z.real()) - 0.5;
    const double ay = std::fabs(z.imag()) - 0.5;
    if (ax <= 0.0 && ay <= 0.0) return std::min(-ax, -ay);
    return std::hypot(std::max(ax, 0.0), std::max(ay, 0.0));
}

double square_boundary_fraction(const EmpiricalMeasure2D& m, double dist) {
    const auto n = m.normalized();
    double acc = 0.0;
    for (int r = 0; r < n.grid().rows; ++r)
        for (int c = 0; c < n.grid().cols; ++c)
            if (distance_to_square_boundary(n.bin_center(r, c)) <= dist) acc += n.bin_mass(r, c);
    return acc;
}

std::vector<cplx> sample_fubini_study(std::size_t n, std::uint64_t seed) {
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(seed, i);
        const double u = rng.uniform();
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        out[i] = std::polar(std::sqrt(u / (1.0 - u)), theta);
    }
    return out;
}

}  // namespace rzero
