#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "spinrad/scenario.hpp"

// exit codes: 0 success, 1 config/validation error, 2 numerical failure
// (every sweep point failed), 3 verification below threshold

int main(int argc, char** argv) {
    CLI::App app{"spinrad: thermal radiation and rotational friction of a small "
                 "sphere near a planar surface"};
    app.require_subcommand(1);

    std::string run_config, verify_config;
    auto* run = app.add_subcommand("run", "execute the sweep in a config file and write a CSV");
    run->add_option("config", run_config, "JSON scenario file")->required();
    auto* verify = app.add_subcommand(
        "verify", "cross-check the body response against a discrete-mode bath");
    verify->add_option("config", verify_config, "JSON scenario file")->required();
    app.add_subcommand("print-defaults", "print the default configuration as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = spinrad::load_config_file(run_config);
            const auto res = spinrad::run_scenario(cfg);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << res.summary << "\n";
            return (res.points > 0 && res.failed == res.points) ? 2 : 0;
        }
        if (verify->parsed()) {
            const auto cfg = spinrad::load_config_file(verify_config);
            const auto res = spinrad::verify_scenario(cfg);
            std::cout << res.report;
            return res.pass ? 0 : 3;
        }
        std::cout << spinrad::serialize_config(spinrad::default_config(), 2) << "\n";
        return 0;
    } catch (const spinrad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
