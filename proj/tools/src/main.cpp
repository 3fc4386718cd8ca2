// takiff: simulate, solve and verify Takiff Toda systems from a JSON config.
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "app.hpp"

namespace
{

// Logs go to stderr so that CSV written to stdout stays clean.
void configure_logging()
{
    auto logger = spdlog::stderr_color_mt("takiff");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char *env = std::getenv("TAKIFF_LOG_LEVEL")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only honor it when asked for.
        if (level != spdlog::level::off || std::string(env) == "off") {
            spdlog::set_level(level);
        } else {
            spdlog::warn("ignoring unknown TAKIFF_LOG_LEVEL '{}'", env);
        }
    }
}

} // namespace

int main(int argc, char **argv)
{
    using namespace takiff::app;
    configure_logging();

    CLI::App cli{"Toda systems on Takiff algebras: simulate, solve and verify"};
    cli.require_subcommand(1);
    std::string config_path;
    const auto add = [&](const char *name, const char *help) {
        CLI::App *sub = cli.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        return sub;
    };
    CLI::App *simulate = add("simulate", "integrate the equations of motion and write a trajectory CSV");
    CLI::App *solve = add("solve", "sample a closed-form solution on a time grid");
    CLI::App *verify = add("verify", "run the invariant checks and write a JSON report");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : config_error;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError &e) {
        spdlog::error("configuration error: {}", e.what());
        return config_error;
    }

    if (simulate->parsed()) {
        return cmd_simulate(cfg, std::cout);
    }
    if (solve->parsed()) {
        return cmd_solve(cfg, std::cout);
    }
    if (verify->parsed()) {
        return cmd_verify(cfg, std::cout);
    }
    return internal_error;
}
