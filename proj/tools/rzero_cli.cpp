#include <CLI11.hpp>

#include <fstream>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "rzero/error.hpp"
#include "rzero/runner.hpp"

namespace {

struct Overrides {
    std::string config, preset, out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON experiment config");
    sub->add_option("--preset", o.preset, "named preset (figure-1, figure-2, figure-3)");
    sub->add_option("--seed", o.seed, "root seed");
    sub->add_option("--threads", o.threads, "worker threads (RZ_THREADS overrides)");
    sub->add_option("--out", o.out, "output directory");
}

rzero::ExperimentConfig resolve(const Overrides& o, std::optional<rzero::ExperimentKind> kind) {
    if (!o.config.empty() && !o.preset.empty()) throw rzero::ConfigError("--config and --preset are exclusive");
    rzero::ExperimentConfig c;
    if (!o.preset.empty()) c = rzero::preset(o.preset);
    else if (!o.config.empty()) {
        const auto j = [&] {
            std::ifstream f(o.config);
            if (!f) throw rzero::ConfigError("cannot read config " + o.config);
            try {
                return nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw rzero::ConfigError(o.config + ": " + e.what());
            }
        }();
        c = rzero::config_from_json(j);
        if (kind && j.contains("kind") && c.kind != *kind)
            throw rzero::ConfigError("config kind '" + rzero::to_string(c.kind) + "' does not match the subcommand");
    }
    if (kind) {
        if (!o.preset.empty() && c.kind != *kind)
            throw rzero::ConfigError("preset " + o.preset + " is a " + rzero::to_string(c.kind) + " experiment");
        c.kind = *kind;
    }
    if (o.seed) c.seed = *o.seed;
    if (o.threads) c.threads = *o.threads;
    if (const char* env = std::getenv("RZ_THREADS"); env && *env) {
        try {
            const long v = std::stol(env);
            if (v < 1) throw std::out_of_range("RZ_THREADS");
            c.threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw rzero::ConfigError(std::string("RZ_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    if (!o.out.empty()) c.out = o.out;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeros of random polynomials in weighted spaces"};
    app.require_subcommand(1);
    Overrides o;
    std::optional<rzero::ExperimentKind> kind;

    auto* run = app.add_subcommand("run", "run a config or preset of any kind");
    add_common(run, o);
    for (auto k : {rzero::ExperimentKind::Onb, rzero::ExperimentKind::Zeros, rzero::ExperimentKind::Equilibrium,
                   rzero::ExperimentKind::RealZeros, rzero::ExperimentKind::Moments, rzero::ExperimentKind::Clt}) {
        auto* sub = app.add_subcommand(rzero::to_string(k), rzero::to_string(k) + " experiment");
        add_common(sub, o);
        sub->callback([&kind, k] { kind = k; });
    }
    app.add_subcommand("presets", "list preset names")->callback([] {
        for (const auto& n : rzero::preset_names()) std::cout << n << '\n';
        std::exit(0);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const auto config = resolve(o, kind);
        const auto manifest = rzero::run(config);
        std::cout << "wrote " << manifest.files.size() << " files to " << config.out << " in "
                  << manifest.timings.at("total") << " s\n";
        if (!manifest.results.empty()) std::cout << manifest.results.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rzero::exit_code_for(e);
    }
}
