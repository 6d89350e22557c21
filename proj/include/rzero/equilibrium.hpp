#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rzero/zero_engine.hpp"

namespace rzero {

enum class ReferenceKind {
    UnitDiskUniform,     // (1/pi) on the closed unit disk
    FubiniStudyMeasure,  // 1 / (pi (1 + |z|^2)^2)
    SquareBoundary,      // equilibrium measure of [-1/2, 1/2]^2, binned only
};

std::string to_string(ReferenceKind kind);

class ReferenceMeasure {
public:
    static ReferenceMeasure unit_disk() { return ReferenceMeasure(ReferenceKind::UnitDiskUniform); }
    static ReferenceMeasure fubini_study() {
        return ReferenceMeasure(ReferenceKind::FubiniStudyMeasure);
    }
    /// Binned as the discrete Laplacian of the degree-`degree` extremal estimate.
    static ReferenceMeasure square_boundary(int degree = 40);

    ReferenceKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return degree_; }
    bool has_density() const noexcept { return kind_ != ReferenceKind::SquareBoundary; }

    /// Pointwise density; DomainError for SquareBoundary.
    double density(cplx z) const;
    /// Total mass by adaptive radial quadrature (density kinds).
    double total_mass() const;

private:
    explicit ReferenceMeasure(ReferenceKind kind) : kind_(kind) {}

    ReferenceKind kind_;
    int degree_ = 0;
};

/// Real-mass measure on the grid. Density kinds: exact rectangle masses from
/// closed-form corner integrals, out-of-box = 1 - in-box. SquareBoundary: 5-point
/// Laplacian of the extremal estimate at bin centres, negatives clipped,
/// normalized to 1 with nothing outside the box.
EmpiricalMeasure2D bin_reference(const ReferenceMeasure& measure, Box box, Grid grid);

/// Half the L1 distance of the normalized bin masses, with the out-of-box
/// cell as one more bin.
double tv_distance(const EmpiricalMeasure2D& a, const EmpiricalMeasure2D& b);

/// Distance from z to the boundary of [-1/2, 1/2]^2.
double distance_to_square_boundary(cplx z);
/// Fraction of the (normalized) mass in bins whose centre lies within `dist`
/// of the boundary of [-1/2, 1/2]^2.
double square_boundary_fraction(const EmpiricalMeasure2D& m, double dist);

/// n independent points from the Fubini-Study measure: |z|^2 = u / (1 - u).
std::vector<cplx> sample_fubini_study(std::size_t n, std::uint64_t seed);

}  // namespace rzero
