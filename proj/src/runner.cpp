#include "rzero/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "rzero/clt.hpp"
#include "rzero/equilibrium.hpp"
#include "rzero/error.hpp"
#include "rzero/moments.hpp"
#include "rzero/parallel.hpp"
#include "rzero/real_zeros.hpp"
#include "rzero/weighted_basis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rzero {

namespace {

constexpr ExperimentKind kAllKinds[] = {ExperimentKind::Onb,       ExperimentKind::Zeros,
                                        ExperimentKind::Equilibrium, ExperimentKind::RealZeros,
                                        ExperimentKind::Moments,   ExperimentKind::Clt};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool is_monomial(const std::string& space) { return space == "monomial" || space == "kac"; }

// Basis for a config space name at degree p.
OrthonormalBasis make_basis(const std::string& space, int p) {
    if (is_monomial(space)) return OrthonormalBasis::identity(p);
    return build_basis({space_domain_from_string(space), p});
}

ReferenceMeasure make_reference(const std::string& name, int degree) {
    if (name == "unit_disk") return ReferenceMeasure::unit_disk();
    if (name == "fubini_study") return ReferenceMeasure::fubini_study();
    if (name == "square_boundary") return ReferenceMeasure::square_boundary(degree);
    throw ConfigError("unknown reference '" + name + "'");
}

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

// Collects outputs and their checksums.
class OutputDir {
public:
    OutputDir(fs::path root, RunManifest& manifest) : root_(std::move(root)), manifest_(manifest) {}

    void write(const std::string& rel, const std::function<void(std::ostream&)>& body) {
        const fs::path path = root_ / rel;
        {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
            body(f);
            f.flush();
            if (!f) throw std::runtime_error("write failed for " + path.string());
        }
        manifest_.files.push_back({rel, sha256_file(path), fs::file_size(path)});
    }

private:
    fs::path root_;
    RunManifest& manifest_;
};

void write_measure(OutputDir& out, const std::string& stem, const EmpiricalMeasure2D& m) {
    out.write("bins_" + stem + ".csv", [&](std::ostream& o) { write_bin_csv(m, o); });
    out.write("raster_" + stem + ".pgm", [&](std::ostream& o) { write_pgm(m, o); });
}

json basis_diagnostics(const std::string& space, const OrthonormalBasis& basis) {
    json d = json::object();
    if (is_monomial(space)) return d;
    const auto domain = space_domain_from_string(space);
    if (domain == SpaceDomain::UnitSquareQ) {
        d["cholesky_residual"] = basis.cholesky_residual;
        d["gram_condition"] = basis.gram_condition;
    }
    // The independent re-quadrature costs O(p^3); skip it for the large SU2 degrees.
    if (basis.degree() <= 128) d["requadrature_residual"] = requadrature_residual(basis);
    return d;
}

void run_onb(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    std::ostringstream summary;
    summary << "p,onb_residual,requadrature_residual,condition_number\n";
    for (int p : c.degrees) {
        const auto t0 = std::chrono::steady_clock::now();
        const WeightedSpace space{space_domain_from_string(c.space), p};
        const auto basis = build_basis(space);
        const auto S = gram_matrix(space);
        const double res = onb_residual(basis, S);
        const double req = requadrature_residual(basis);
        const double cond = condition_number(S, basis);
        out.write("basis_p" + std::to_string(p) + ".csv", [&](std::ostream& o) { write_basis_csv(basis, o); });
        summary << p << ',' << fmt(res) << ',' << fmt(req) << ',' << fmt(cond) << '\n';
        m.diagnostics["p" + std::to_string(p)] = {{"onb_residual", res},
                                                 {"requadrature_residual", req},
                                                 {"condition_number", cond}};
        m.timings["p" + std::to_string(p)] = seconds_since(t0);
    }
    const std::string s = summary.str();
    out.write("onb_summary.csv", [&](std::ostream& o) { o << s; });
}

void run_zeros(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    const auto ens = c.make_ensemble();
    std::optional<EmpiricalMeasure2D> ref;
    if (c.reference) ref = bin_reference(make_reference(*c.reference, c.reference_degree), c.box, c.grid);
    std::ostringstream summary;
    summary << "p,trials,in_box,out_of_box,tv,max_backward_error,mean_real_zeros\n";
    json rows = json::array();
    for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        const int p = c.degrees[i];
        const std::size_t N = c.trials_for(i);
        const auto t0 = std::chrono::steady_clock::now();
        const auto basis = make_basis(c.space, p);
        const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(p));
        auto chunks = map_chunks(N, c.threads, [&](std::size_t b, std::size_t e) {
            std::vector<ZeroSet> v;
            v.reserve(e - b);
            for (std::size_t t = b; t < e; ++t) v.push_back(roots(random_polynomial(basis, ens, seed, t)));
            return v;
        });
        auto measure = EmpiricalMeasure2D::counting(c.box, c.grid, p);
        double backward = 0.0;
        RunningStats real;
        for (const auto& chunk : chunks)
            for (const auto& z : chunk) {
                measure.accumulate(z);
                backward = std::max(backward, z.max_backward_error);
                real.push(z.real_count);
            }
        const std::string stem = "p" + std::to_string(p);
        if (c.write_zeros)
            out.write("zeros_" + stem + ".csv", [&](std::ostream& o) {
                write_zero_csv_header(o);
                std::size_t t = 0;
                for (const auto& chunk : chunks)
                    for (const auto& z : chunk) write_zero_csv_rows(o, t++, z);
            });
        write_measure(out, stem, measure);
        json row = {{"p", p},
                    {"trials", N},
                    {"in_box", measure.in_box()},
                    {"out_of_box", measure.out_of_box()},
                    {"max_backward_error", backward},
                    {"mean_real_zeros", real.mean}};
        double tv = std::nan("");
        if (ref) {
            tv = tv_distance(measure, *ref);
            row["tv"] = tv;
        }
        if (c.space == "square") row["boundary_fraction_0.1"] = square_boundary_fraction(measure, 0.1);
        summary << p << ',' << N << ',' << fmt(measure.in_box()) << ',' << fmt(measure.out_of_box()) << ','
                << (ref ? fmt(tv) : std::string()) << ',' << fmt(backward) << ',' << fmt(real.mean) << '\n';
        rows.push_back(row);
        m.diagnostics[stem] = basis_diagnostics(c.space, basis);
        m.diagnostics[stem]["max_backward_error"] = backward;
        m.timings[stem] = seconds_since(t0);
    }
    if (ref) write_measure(out, "reference", *ref);
    const std::string s = summary.str();
    out.write("summary.csv", [&](std::ostream& o) { o << s; });
    m.results["degrees"] = rows;
}

void run_equilibrium(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ref = bin_reference(make_reference(c.reference.value_or("unit_disk"), c.reference_degree), c.box, c.grid);
    write_measure(out, "reference", ref);
    m.results["reference_in_box"] = ref.in_box();
    m.results["reference_out_of_box"] = ref.out_of_box();
    if (c.reference == "square_boundary") m.results["boundary_fraction_0.1"] = square_boundary_fraction(ref, 0.1);
    if (c.samples > 0) {
        if (c.reference != "fubini_study") throw ConfigError("samples are only drawn for the fubini_study reference");
        const auto pts = sample_fubini_study(c.samples, c.seed);
        EmpiricalMeasure2D emp(c.box, c.grid);
        const double w = 1.0 / static_cast<double>(pts.size());
        for (auto z : pts) {
            if (auto rc = emp.locate(z)) emp.add_mass(rc->first, rc->second, w);
            else emp.add_out_of_box(w);
        }
        out.write("points.csv", [&](std::ostream& o) {
            o << "index,re,im\n";
            for (std::size_t i = 0; i < pts.size(); ++i)
                o << i << ',' << fmt(pts[i].real()) << ',' << fmt(pts[i].imag()) << '\n';
        });
        write_measure(out, "samples", emp);
        m.results["sample_tv"] = tv_distance(emp, ref);
    }
    m.timings["equilibrium"] = seconds_since(t0);
}

void run_realzeros(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    const auto ens = c.make_ensemble();
    if (!ens.real_supported()) throw ConfigError("real-zero counts need a real coefficient ensemble");
    std::ostringstream table;
    table << "p,kac_expected,empirical_mean,empirical_se\n";
    json rows = json::array();
    for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        const int p = c.degrees[i];
        const std::size_t N = c.trials_for(i);
        const auto t0 = std::chrono::steady_clock::now();
        const auto basis = c.model == "weyl" ? build_basis({SpaceDomain::PlaneGaussian, p}) : OrthonormalBasis::identity(p);
        const double expected = c.model == "weyl" ? weyl_expected(p) : kac_expected(p);
        const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(p));
        auto chunks = map_chunks(N, c.threads, [&](std::size_t b, std::size_t e) {
            RunningStats s;
            for (std::size_t t = b; t < e; ++t) s.push(roots(random_polynomial(basis, ens, seed, t)).real_count);
            return s;
        });
        RunningStats total;
        for (const auto& s : chunks) total.merge(s);
        table << p << ',' << fmt(expected) << ',' << fmt(total.mean) << ',' << fmt(total.standard_error()) << '\n';
        rows.push_back({{"p", p}, {"trials", N}, {"expected", expected}, {"empirical_mean", total.mean},
                        {"empirical_se", total.standard_error()}});
        m.timings["p" + std::to_string(p)] = seconds_since(t0);
    }
    const std::string s = table.str();
    out.write("realzeros.csv", [&](std::ostream& o) { o << s; });
    m.results["rows"] = rows;
}

void run_moments(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    const auto ens = c.make_ensemble();
    json records = json::array();
    std::ostringstream csv;
    csv << "bound_name,k,nu,direction,bound_value,mc_estimate,mc_se,verdict\n";
    std::size_t violations = 0;
    for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        const int k = c.degrees[i];
        const std::size_t N = c.trials_for(i);
        const auto t0 = std::chrono::steady_clock::now();
        for (double nu : c.nu) {
            std::optional<MomentBound> bound;
            try {
                bound = stated_bound(ens, k, nu);
            } catch (const DomainError&) {
            }
            for (std::size_t d = 0; d < c.directions; ++d) {
                const std::uint64_t s = derive_seed(derive_seed(c.seed, static_cast<std::uint64_t>(k)), d);
                Rng dir_rng(s, 0);
                MomentQuery q{ens, k, random_unit_direction(k, dir_rng), nu};
                const auto est = log_moment_mc(q, N, derive_seed(s, 1), c.threads);
                std::string verdict = "no_bound";
                if (bound) verdict = est.mean <= bound->value + 3.0 * est.se ? "holds" : "violated";
                if (verdict == "violated") ++violations;
                json rec = {{"bound_name", bound ? bound->name : to_string(ens.kind())},
                            {"parameters", {{"k", k}, {"nu", nu}, {"direction", d}, {"trials", est.n},
                                            {"discarded", est.discarded}, {"clamped", est.clamped}}},
                            {"bound_value", bound ? json(bound->value) : json(nullptr)},
                            {"mc_estimate", est.mean},
                            {"mc_se", est.se},
                            {"verdict", verdict}};
                if (bound) rec["parameters"]["constituents"] = bound->constituents;
                records.push_back(rec);
                csv << rec["bound_name"].get<std::string>() << ',' << k << ',' << fmt(nu) << ',' << d << ','
                    << (bound ? fmt(bound->value) : std::string()) << ',' << fmt(est.mean) << ',' << fmt(est.se)
                    << ',' << verdict << '\n';
            }
        }
        m.timings["k" + std::to_string(k)] = seconds_since(t0);
    }
    const std::string s = csv.str();
    out.write("moments.csv", [&](std::ostream& o) { o << s; });
    const std::string js = records.dump(2) + "\n";
    out.write("moments.json", [&](std::ostream& o) { o << js; });
    m.results["violations"] = violations;
    m.results["records"] = records.size();
}

void run_clt(const ExperimentConfig& c, OutputDir& out, RunManifest& m) {
    const auto psi = TestFunction::bump({c.bump_center[0], c.bump_center[1]}, c.bump_radius);
    json reports = json::array();
    for (std::size_t i = 0; i < c.degrees.size(); ++i) {
        const int p = c.degrees[i];
        const auto t0 = std::chrono::steady_clock::now();
        CLTConfig cfg;
        cfg.degree = p;
        cfg.trials = c.trials_for(i);
        cfg.seed = derive_seed(c.seed, static_cast<std::uint64_t>(p));
        cfg.threads = c.threads;
        cfg.bulk_radius = c.bulk_radius;
        const auto r = clt_experiment(psi, cfg);
        out.write("clt_sample_p" + std::to_string(p) + ".csv", [&](std::ostream& o) {
            o << "normalized\n";
            for (double x : r.normalized) o << fmt(x) << '\n';
        });
        reports.push_back({{"p", p},
                           {"trials", r.trials},
                           {"ks", r.ks ? json(*r.ks) : json(nullptr)},
                           {"mean", r.raw_mean},
                           {"var", r.raw_variance},
                           {"degenerate", r.degenerate}});
        m.timings["p" + std::to_string(p)] = seconds_since(t0);
    }
    const std::string js = reports.dump(2) + "\n";
    out.write("clt.json", [&](std::ostream& o) { o << js; });
    m.results["reports"] = reports;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Onb: return "onb";
        case ExperimentKind::Zeros: return "zeros";
        case ExperimentKind::Equilibrium: return "equilibrium";
        case ExperimentKind::RealZeros: return "realzeros";
        case ExperimentKind::Moments: return "moments";
        case ExperimentKind::Clt: return "clt";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto k : kAllKinds)
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::size_t ExperimentConfig::trials_for(std::size_t i) const {
    if (np_constant) return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(*np_constant / degrees.at(i))));
    return trials.size() == 1 ? trials[0] : trials.at(i);
}

CoefficientEnsemble ExperimentConfig::make_ensemble() const {
    EnsembleKind kind;
    try {
        kind = ensemble_kind_from_string(ensemble);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    try {
        switch (kind) {
            case EnsembleKind::ComplexGaussian: return CoefficientEnsemble::complex_gaussian();
            case EnsembleKind::RealGaussian: return CoefficientEnsemble::real_gaussian();
            case EnsembleKind::RadialDensity: return CoefficientEnsemble::radial(alpha);
            case EnsembleKind::SphereUniform: return CoefficientEnsemble::sphere_uniform();
            case EnsembleKind::UniformUnitCube: return CoefficientEnsemble::uniform_unit_cube();
            case EnsembleKind::IIDDensity:
                if (density == "tent") return CoefficientEnsemble::iid(TabulatedDensity::tent());
                if (density == "uniform") return CoefficientEnsemble::iid(TabulatedDensity::centered_uniform());
                if (density == "table")
                    return CoefficientEnsemble::iid(TabulatedDensity(density_table, density_bound, tail_c, tail_rho));
                throw ConfigError("unknown density '" + density + "' (tent, uniform, table)");
        }
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("ensemble: ") + e.what());
    }
    throw ConfigError("unhandled ensemble");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (degrees.empty()) fail("degrees must be nonempty");
    for (int p : degrees)
        if (p < 1) fail("every degree must be >= 1");
    if (!np_constant) {
        if (trials.empty()) fail("trials must be nonempty");
        if (trials.size() != 1 && trials.size() != degrees.size())
            fail("trials must have one entry or one per degree");
        for (auto t : trials)
            if (t < 1) fail("trials must be >= 1");
    } else if (!(*np_constant > 0.0)) {
        fail("np_constant must be positive");
    }
    if (grid.rows < 2 || grid.cols < 2) fail("grid dimensions must be >= 2");
    if (!(box.xmin < box.xmax && box.ymin < box.ymax)) fail("box must satisfy xmin < xmax and ymin < ymax");
    if (threads < 1) fail("threads must be >= 1");
    if (out.empty()) fail("out must be a directory path");
    if (!is_monomial(space)) {
        try {
            const auto d = space_domain_from_string(space);
            if (d == SpaceDomain::UnitSquareQ)
                for (int p : degrees)
                    if (p > kMaxSquareDegree) fail("square degrees are capped at " + std::to_string(kMaxSquareDegree));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what());
        }
    } else if (kind == ExperimentKind::Onb) {
        fail("onb needs a weighted space, not the monomial basis");
    }
    (void)make_ensemble();
    if (reference) (void)make_reference(*reference, reference_degree);
    if (reference_degree < 1 || reference_degree > kMaxSquareDegree) fail("reference_degree must lie in 1..60");
    if (model != "kac" && model != "weyl") fail("model must be kac or weyl");
    if (nu.empty()) fail("nu must be nonempty");
    for (double v : nu)
        if (!(v >= 1.0)) fail("every nu must be >= 1");
    if (directions < 1) fail("directions must be >= 1");
    if (!(bump_radius > 0.0)) fail("bump_radius must be positive");
    if (!(bulk_radius > 0.0)) fail("bulk_radius must be positive");
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "kind") c.kind = experiment_kind_from_string(get_as<std::string>(v, key));
        else if (key == "space") c.space = get_as<std::string>(v, key);
        else if (key == "ensemble") c.ensemble = get_as<std::string>(v, key);
        else if (key == "alpha") c.alpha = get_as<double>(v, key);
        else if (key == "density") c.density = get_as<std::string>(v, key);
        else if (key == "density_table") c.density_table = get_as<std::vector<std::pair<double, double>>>(v, key);
        else if (key == "density_bound") c.density_bound = get_as<double>(v, key);
        else if (key == "tail_c") c.tail_c = get_as<double>(v, key);
        else if (key == "tail_rho") c.tail_rho = get_as<double>(v, key);
        else if (key == "degrees") c.degrees = v.is_array() ? get_as<std::vector<int>>(v, key) : std::vector<int>{get_as<int>(v, key)};
        else if (key == "trials") {
            if (v.is_array()) {
                for (const auto& t : v)
                    if (get_as<long long>(t, key) < 1) throw ConfigError("trials must be >= 1");
                c.trials = get_as<std::vector<std::size_t>>(v, key);
            } else {
                if (get_as<long long>(v, key) < 1) throw ConfigError("trials must be >= 1");
                c.trials = {get_as<std::size_t>(v, key)};
            }
        } else if (key == "np_constant") c.np_constant = get_as<double>(v, key);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
        else if (key == "threads") c.threads = get_as<unsigned>(v, key);
        else if (key == "box") {
            const auto b = get_as<std::vector<double>>(v, key);
            if (b.size() != 4) throw ConfigError("box needs [xmin, xmax, ymin, ymax]");
            c.box = {b[0], b[1], b[2], b[3]};
        } else if (key == "grid") {
            const auto g = v.is_array() ? get_as<std::vector<int>>(v, key) : std::vector<int>{get_as<int>(v, key), get_as<int>(v, key)};
            if (g.size() != 2) throw ConfigError("grid needs [rows, cols]");
            c.grid = {g[0], g[1]};
        } else if (key == "out") c.out = get_as<std::string>(v, key);
        else if (key == "reference") {
            if (v.is_null()) c.reference.reset();
            else c.reference = get_as<std::string>(v, key);
        } else if (key == "reference_degree") c.reference_degree = get_as<int>(v, key);
        else if (key == "write_zeros") c.write_zeros = get_as<bool>(v, key);
        else if (key == "model") c.model = get_as<std::string>(v, key);
        else if (key == "nu") c.nu = v.is_array() ? get_as<std::vector<double>>(v, key) : std::vector<double>{get_as<double>(v, key)};
        else if (key == "directions") c.directions = get_as<std::size_t>(v, key);
        else if (key == "samples") c.samples = get_as<std::size_t>(v, key);
        else if (key == "bump_radius") c.bump_radius = get_as<double>(v, key);
        else if (key == "bump_center") c.bump_center = get_as<std::array<double, 2>>(v, key);
        else if (key == "bulk_radius") c.bulk_radius = get_as<double>(v, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j = {{"kind", to_string(c.kind)},
              {"space", c.space},
              {"ensemble", c.ensemble},
              {"alpha", c.alpha},
              {"density", c.density},
              {"degrees", c.degrees},
              {"trials", c.trials},
              {"seed", c.seed},
              {"threads", c.threads},
              {"box", {c.box.xmin, c.box.xmax, c.box.ymin, c.box.ymax}},
              {"grid", {c.grid.rows, c.grid.cols}},
              {"out", c.out},
              {"reference", c.reference ? json(*c.reference) : json(nullptr)},
              {"reference_degree", c.reference_degree},
              {"write_zeros", c.write_zeros},
              {"model", c.model},
              {"nu", c.nu},
              {"directions", c.directions},
              {"samples", c.samples},
              {"bump_radius", c.bump_radius},
              {"bump_center", c.bump_center},
              {"bulk_radius", c.bulk_radius}};
    if (c.np_constant) j["np_constant"] = *c.np_constant;
    if (c.density == "table") {
        j["density_table"] = c.density_table;
        j["density_bound"] = c.density_bound;
        j["tail_c"] = c.tail_c;
        j["tail_rho"] = c.tail_rho;
    }
    return j;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::vector<std::string> preset_names() { return {"figure-1", "figure-2", "figure-3"}; }

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    if (name == "figure-1") {
        // square model, N p = 20000
        c.kind = ExperimentKind::Zeros;
        c.space = "square";
        c.ensemble = "complex_gaussian";
        c.degrees = {4, 12, 24, 40};
        c.trials = {5000, 1667, 833, 500};
        c.reference = "square_boundary";
    } else if (name == "figure-2") {
        c.kind = ExperimentKind::Equilibrium;
        c.reference = "fubini_study";
        c.samples = 10240;
        c.degrees = {1};
    } else if (name == "figure-3") {
        // SU2 model with uniform [0,1] coefficients, p = 2^{j-1}, N = 5 * 2^{13-j}
        c.kind = ExperimentKind::Zeros;
        c.space = "fubini_study";
        c.ensemble = "uniform_unit_cube";
        c.degrees.clear();
        c.trials.clear();
        for (int j = 1; j <= 12; ++j) {
            c.degrees.push_back(1 << (j - 1));
            c.trials.push_back(std::size_t{5} << (13 - j));
        }
        c.reference = "fubini_study";
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    c.out = name;
    return c;
}

json RunManifest::to_json() const {
    json files_json = json::array();
    for (const auto& f : files) files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {{"version", version}, {"config", config},           {"files", files_json},
            {"timings", timings}, {"diagnostics", diagnostics}, {"results", results}};
}

std::string sha256_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof buf);
        if (f.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(f.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::string hex;
    char h[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(h, sizeof h, "%02x", md[i]);
        hex += h;
    }
    return hex;
}

RunManifest run(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path root(config.out);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root))
        throw std::runtime_error("cannot create output directory " + root.string() + ": " + ec.message());

    RunManifest m;
    m.config = config_to_json(config);
    OutputDir out(root, m);
    switch (config.kind) {
        case ExperimentKind::Onb: run_onb(config, out, m); break;
        case ExperimentKind::Zeros: run_zeros(config, out, m); break;
        case ExperimentKind::Equilibrium: run_equilibrium(config, out, m); break;
        case ExperimentKind::RealZeros: run_realzeros(config, out, m); break;
        case ExperimentKind::Moments: run_moments(config, out, m); break;
        case ExperimentKind::Clt: run_clt(config, out, m); break;
    }
    m.timings["total"] = seconds_since(t0);
    std::ofstream f(root / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write manifest in " + root.string());
    f << m.to_json().dump(2) << '\n';
    return m;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
        dynamic_cast<const DomainError*>(&e) || dynamic_cast<const ContractError*>(&e))
        return 2;
    if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const InsufficientSampleError*>(&e)) return 3;
    return 1;
}

}  // namespace rzero
