#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlcirc/errors.hpp"
#include "nlcirc/experiments.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch runner for nonlinear circuit experiments"};
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::string sweep_spec;
    bool quiet = false;
    app.add_option("--config", config_path, "experiment config file (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--set", overrides, "override a config value: dotted.key=value (repeatable)");
    app.add_option("--sweep", sweep_spec, "run once per value: dotted.key=v1,v2,...");
    app.add_flag("--quiet", quiet, "suppress headline output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto t_start = std::chrono::steady_clock::now();
    try {
        auto config = nlcirc::experiments::load_config(config_path);
        for (const auto& s : overrides) {
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            nlcirc::experiments::apply_override(config, s.substr(0, eq), s.substr(eq + 1));
        }

        nlcirc::experiments::RunResult result;
        if (!sweep_spec.empty()) {
            const std::size_t eq = sweep_spec.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--sweep expects key=v1,v2,...");
            result = nlcirc::experiments::run_sweep(config, out_dir, sweep_spec.substr(0, eq),
                                                    split_commas(sweep_spec.substr(eq + 1)));
        } else {
            result = nlcirc::experiments::run_experiment(config, out_dir);
        }

        if (!quiet) {
            for (const auto& line : result.headline) std::cout << line << "\n";
            const auto elapsed = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - t_start);
            std::cout << "wall_time_s = " << elapsed.count() << "\n";
        }
        return result.exit_code;
    } catch (const nlcirc::SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
