#include "rzero/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rzero/error.hpp"
#include "rzero/parallel.hpp"

namespace rzero {

// --- TabulatedDensity -------------------------------------------------------

TabulatedDensity::TabulatedDensity(std::vector<std::pair<double, double>> table, double bound_M,
                                   double tail_c, double tail_rho)
    : table_(std::move(table)), M_(bound_M), c_(tail_c), rho_(tail_rho) {
    if (table_.size() < 2) throw ParameterError("tabulated density needs at least two nodes");
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const auto [x, y] = table_[i];
        if (!std::isfinite(x) || !std::isfinite(y) || y < 0.0)
            throw ParameterError("tabulated density: node " + std::to_string(i) +
                                 " is not a finite nonnegative value");
        if (i > 0 && !(x > table_[i - 1].first))
            throw ParameterError("tabulated density: abscissae must be strictly increasing");
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < table_.size(); ++i)
        integral += 0.5 * (table_[i].first - table_[i - 1].first) *
                    (table_[i].second + table_[i - 1].second);
    if (std::fabs(integral - 1.0) > 1e-3)
        throw ParameterError("tabulated density integrates to " + std::to_string(integral) +
                             ", expected 1");
    for (auto& node : table_) node.second /= integral;

    cumulative_.assign(table_.size(), 0.0);
    for (std::size_t i = 1; i < table_.size(); ++i)
        cumulative_[i] = cumulative_[i - 1] + 0.5 * (table_[i].first - table_[i - 1].first) *
                                                  (table_[i].second + table_[i - 1].second);

    if (!(M_ > 0.0)) throw ParameterError("density bound M must be positive");
    double peak = 0.0;
    for (const auto& node : table_) peak = std::max(peak, node.second);
    if (peak > M_ * (1.0 + 1e-12))
        throw ParameterError("tabulated density exceeds its declared bound M");
    if (!(c_ > 0.0)) throw ParameterError("tail constant c must be positive");
    if (!(rho_ > 1.0)) throw ParameterError("tail exponent rho must exceed 1");
    if (minimal_tail_constant(rho_) > c_ * (1.0 + 1e-9))
        throw ParameterError("tabulated density violates the declared tail bound c R^-rho");
}

double TabulatedDensity::pdf(double x) const {
    if (x < table_.front().first || x > table_.back().first) return 0.0;
    auto it = std::upper_bound(table_.begin(), table_.end(), x,
                               [](double v, const auto& node) { return v < node.first; });
    if (it == table_.end()) return table_.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

double TabulatedDensity::cdf(double x) const {
    if (x <= table_.front().first) return 0.0;
    if (x >= table_.back().first) return 1.0;
    auto it = std::upper_bound(table_.begin(), table_.end(), x,
                               [](double v, const auto& node) { return v < node.first; });
    const auto i = static_cast<std::size_t>(it - table_.begin()) - 1;
    return cumulative_[i] + 0.5 * (x - table_[i].first) * (table_[i].second + pdf(x));
}

double TabulatedDensity::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return table_.back().first;
    const auto i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    const double width = table_[i + 1].first - table_[i].first;
    const double y0 = table_[i].second;
    const double slope = (table_[i + 1].second - y0) / width;
    const double r = u - cumulative_[i];
    // solve y0 t + slope t^2 / 2 = r without cancellation
    const double disc = std::max(0.0, y0 * y0 + 2.0 * slope * r);
    const double denom = y0 + std::sqrt(disc);
    const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
    return table_[i].first + std::clamp(t, 0.0, width);
}

double TabulatedDensity::tail_mass(double threshold) const {
    if (threshold < 0.0) return 1.0;
    return std::max(0.0, cdf(-threshold) + (1.0 - cdf(threshold)));
}

double TabulatedDensity::minimal_tail_constant(double rho) const {
    const double reach = std::max(std::fabs(table_.front().first), std::fabs(table_.back().first));
    if (reach <= 1.0) return 0.0;
    const double r_max = std::log(reach);
    auto g = [&](double R) { return std::pow(R, rho) * tail_mass(std::exp(R)); };
    constexpr int kScan = 4096;
    double best = 0.0;
    int best_i = 0;
    for (int i = 1; i <= kScan; ++i) {
        const double v = g(r_max * i / kScan);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    // golden-section polish around the best scan point
    double lo = r_max * std::max(0, best_i - 1) / kScan;
    double hi = r_max * std::min(kScan, best_i + 1) / kScan;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int iter = 0; iter < 60; ++iter) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        if (g(a) > g(b))
            hi = b;
        else
            lo = a;
    }
    return std::max(best, g(0.5 * (lo + hi)));
}

TabulatedDensity TabulatedDensity::centered_uniform() {
    const double h = std::sqrt(3.0);
    const double level = 1.0 / (2.0 * h);
    // sup_R R^2 P(|a| > e^R) = 0.0286... for this law; c = 1 is generous
    return TabulatedDensity({{-h, level}, {h, level}}, level, 1.0, 2.0);
}

TabulatedDensity TabulatedDensity::tent() {
    return TabulatedDensity({{-3.0, 0.0}, {0.0, 1.0 / 3.0}, {3.0, 0.0}}, 1.0 / 3.0, 1.0, 2.0);
}

// --- CoefficientEnsemble ----------------------------------------------------

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::ComplexGaussian: return "complex_gaussian";
        case EnsembleKind::RealGaussian: return "real_gaussian";
        case EnsembleKind::RadialDensity: return "radial";
        case EnsembleKind::SphereUniform: return "sphere_uniform";
        case EnsembleKind::IIDDensity: return "iid";
        case EnsembleKind::UniformUnitCube: return "uniform_unit_cube";
    }
    return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
    for (auto kind : {EnsembleKind::ComplexGaussian, EnsembleKind::RealGaussian,
                      EnsembleKind::RadialDensity, EnsembleKind::SphereUniform,
                      EnsembleKind::IIDDensity, EnsembleKind::UniformUnitCube})
        if (to_string(kind) == name) return kind;
    throw ParameterError("unknown ensemble kind '" + name + "'");
}

CoefficientEnsemble CoefficientEnsemble::complex_gaussian() {
    return CoefficientEnsemble(EnsembleKind::ComplexGaussian);
}

CoefficientEnsemble CoefficientEnsemble::real_gaussian() {
    return CoefficientEnsemble(EnsembleKind::RealGaussian);
}

CoefficientEnsemble CoefficientEnsemble::radial(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ParameterError("radial density needs alpha > 0");
    CoefficientEnsemble e(EnsembleKind::RadialDensity);
    e.alpha_ = alpha;
    return e;
}

CoefficientEnsemble CoefficientEnsemble::sphere_uniform() {
    return CoefficientEnsemble(EnsembleKind::SphereUniform);
}

CoefficientEnsemble CoefficientEnsemble::iid(TabulatedDensity density) {
    CoefficientEnsemble e(EnsembleKind::IIDDensity);
    e.density_.emplace(std::move(density));
    return e;
}

CoefficientEnsemble CoefficientEnsemble::uniform_unit_cube() {
    return CoefficientEnsemble(EnsembleKind::UniformUnitCube);
}

bool CoefficientEnsemble::rotation_invariant() const noexcept {
    return kind_ == EnsembleKind::RealGaussian || kind_ == EnsembleKind::RadialDensity ||
           kind_ == EnsembleKind::SphereUniform;
}

void CoefficientEnsemble::sample(std::span<cplx> out, Rng& rng) const {
    if (out.empty()) throw ContractError("sample: k must be at least 1");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind_) {
        case EnsembleKind::ComplexGaussian:
            for (auto& a : out) {
                const double re = rng.normal();
                const double im = rng.normal();
                a = cplx(re * inv_sqrt2, im * inv_sqrt2);
            }
            return;
        case EnsembleKind::RealGaussian:
            for (auto& a : out) a = cplx(rng.normal() * inv_sqrt2, 0.0);
            return;
        case EnsembleKind::RadialDensity: {
            // a = g / sqrt(G) with g ~ N(0, I/2) and G ~ Gamma(alpha): then
            // |a|^2 = Gamma(k/2) / Gamma(alpha), i.e. |a|^2/(1+|a|^2) ~ Beta(k/2, alpha),
            // which is exactly the radial law of (1+|a|^2)^{-k/2-alpha}.
            for (auto& a : out) a = cplx(rng.normal() * inv_sqrt2, 0.0);
            const double scale = 1.0 / std::sqrt(rng.gamma(alpha_));
            for (auto& a : out) a *= scale;
            return;
        }
        case EnsembleKind::SphereUniform: {
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (auto& a : out) {
                    const double x = rng.normal();
                    a = cplx(x, 0.0);
                    norm2 += x * x;
                }
            } while (norm2 == 0.0);
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& a : out) a *= inv;
            return;
        }
        case EnsembleKind::IIDDensity:
            for (auto& a : out) a = cplx(density_->quantile(rng.uniform()), 0.0);
            return;
        case EnsembleKind::UniformUnitCube:
            for (auto& a : out) a = cplx(rng.uniform(), 0.0);
            return;
    }
}

std::vector<cplx> CoefficientEnsemble::sample(int k, Rng& rng) const {
    if (k < 1) throw ContractError("sample: k must be at least 1");
    std::vector<cplx> out(static_cast<std::size_t>(k));
    sample(out, rng);
    return out;
}

std::string CoefficientEnsemble::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == EnsembleKind::RadialDensity) os << "(alpha=" << alpha_ << ")";
    if (kind_ == EnsembleKind::IIDDensity)
        os << "(M=" << density_->bound() << ", c=" << density_->tail_c()
           << ", rho=" << density_->tail_rho() << ", nodes=" << density_->table().size() << ")";
    return os.str();
}

std::vector<cplx> sample_coefficients(const CoefficientEnsemble& ensemble, int k,
                                      std::uint64_t root_seed, std::uint64_t stream) {
    Rng rng(root_seed, stream);
    return ensemble.sample(k, rng);
}

namespace {

template <typename Statistic>
McEstimate first_coordinate_mc(const CoefficientEnsemble& ensemble, std::size_t trials,
                               std::uint64_t seed, int k, unsigned threads, Statistic stat) {
    if (trials < 1) throw ContractError("Monte Carlo estimate needs at least one trial");
    if (k < 1) throw ContractError("dimension k must be at least 1");
    auto chunks = map_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
        RunningStats acc;
        std::vector<cplx> a(static_cast<std::size_t>(k));
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng(seed, t);
            ensemble.sample(a, rng);
            acc.push(stat(std::abs(a[0])));
        }
        return acc;
    });
    RunningStats total;
    for (const auto& c : chunks) total.merge(c);
    return {total.mean, total.standard_error(), total.n};
}

}  // namespace

McEstimate tail_probability(const CoefficientEnsemble& ensemble, double R, std::size_t trials,
                            std::uint64_t seed, int k, unsigned threads) {
    if (!(R >= 0.0)) throw ParameterError("tail_probability: R must be nonnegative");
    const double threshold = std::exp(R);
    return first_coordinate_mc(ensemble, trials, seed, k, threads,
                               [threshold](double m) { return m > threshold ? 1.0 : 0.0; });
}

McEstimate log_moment_1d(const CoefficientEnsemble& ensemble, int n, std::size_t trials,
                         std::uint64_t seed, int k, unsigned threads) {
    if (n < 1) throw ParameterError("log_moment_1d: exponent must be a positive integer");
    return first_coordinate_mc(ensemble, trials, seed, k, threads,
                               [n](double m) { return std::pow(std::log1p(m), n); });
}

}  // namespace rzero
