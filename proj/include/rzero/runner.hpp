#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rzero/ensembles.hpp"
#include "rzero/zero_engine.hpp"

namespace rzero {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { Onb, Zeros, Equilibrium, RealZeros, Moments, Clt };
std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Flat experiment description. Every key of the JSON form maps to one field;
/// unknown keys are rejected.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Zeros;
    std::string space = "plane_gaussian";
    std::string ensemble = "complex_gaussian";
    double alpha = 1.0;                                   // radial ensemble
    std::string density = "tent";                         // iid: named table, or "table"
    std::vector<std::pair<double, double>> density_table; // iid: (x, phi(x)) pairs
    double density_bound = 0.0, tail_c = 0.0, tail_rho = 0.0;
    std::vector<int> degrees{10};
    std::vector<std::size_t> trials{100};  // one entry, or one per degree
    std::optional<double> np_constant;     // N = round(np_constant / p) overrides trials
    std::uint64_t seed = 1;
    unsigned threads = 1;
    Box box;
    Grid grid;
    std::string out = "out";
    std::optional<std::string> reference;  // unit_disk | fubini_study | square_boundary
    int reference_degree = 40;
    bool write_zeros = true;
    std::string model = "kac";             // realzeros: kac | weyl
    std::vector<double> nu{1.0};           // moments
    std::size_t directions = 20;           // moments
    std::size_t samples = 0;               // equilibrium: i.i.d. Fubini-Study points
    double bump_radius = 0.5;              // clt
    std::array<double, 2> bump_center{0.0, 0.0};
    double bulk_radius = 1.0;

    /// Validates invariants; ConfigError on failure.
    void validate() const;
    std::size_t trials_for(std::size_t degree_index) const;
    CoefficientEnsemble make_ensemble() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
/// Reads a JSON file; ConfigError on I/O or parse failure.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Named presets: figure-1, figure-2, figure-3.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

struct ManifestFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    nlohmann::json config;
    std::string version = kVersion;
    std::vector<ManifestFile> files;
    std::map<std::string, double> timings;  // seconds
    nlohmann::json diagnostics = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Runs the experiment, writes its outputs and manifest.json into config.out.
RunManifest run(const ExperimentConfig& config);

/// Exit code for an exception escaping run(): 2 configuration, 3 numeric, 1 other.
int exit_code_for(const std::exception& e);

}  // namespace rzero
