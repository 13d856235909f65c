#pragma once

#include <CLI11.hpp>

namespace softtouch::cli {

// Each register_* adds one subcommand to the app and binds its handler.
void register_simulate(CLI::App& app);
void register_validate(CLI::App& app);
void register_train(CLI::App& app);
void register_grid(CLI::App& app);
void register_ablate(CLI::App& app);
void register_eval(CLI::App& app);
void register_detect(CLI::App& app);
void register_replay(CLI::App& app);
void register_report(CLI::App& app);

}  // namespace softtouch::cli
