// chaoswpt: run chaotic-waveform power-transfer experiments from a config file.
//
//   chaoswpt run <config.json> [--seed N] [--out DIR] [--realizations N]
//   chaoswpt validate <config.json>
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or numeric error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chaoswpt/config.hpp"
#include "chaoswpt/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw chaoswpt::ConfigError({"config: cannot read '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chaotic-waveform wireless power transfer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    chaoswpt::ConfigOverrides overrides;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::size_t realizations = 0;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "Path to the JSON config")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Override ensemble.seed");
    auto* out_opt = run->add_option("--out", out_dir, "Override output_dir");
    auto* real_opt = run->add_option("--realizations", realizations, "Override ensemble.n_realizations");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Print the fully resolved config and exit");
    validate->add_option("config", validate_path, "Path to the JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    std::string context = "config";
    try {
        if (*validate) {
            const auto cfg = chaoswpt::validate_config(read_text(validate_path));
            std::cout << chaoswpt::config_to_text(cfg);
            return 0;
        }

        if (*seed_opt) overrides.seed = seed;
        if (*out_opt) overrides.output_dir = out_dir;
        if (*real_opt) overrides.realizations = realizations;
        const auto cfg = chaoswpt::validate_config(read_text(config_path), overrides);

        context = "experiment " + std::string(chaoswpt::to_string(cfg.experiment));
        const auto out = chaoswpt::run_experiment(cfg);
        for (const auto& f : out.files) std::cout << f.string() << '\n';
        return 0;
    } catch (const chaoswpt::ConfigError& e) {
        std::cerr << "chaoswpt: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "chaoswpt: " << context << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}
