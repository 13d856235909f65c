#include <cstring>
#include <iostream>
#include <stdexcept>

#include <yaml-cpp/exceptions.h>

#include "commands.hpp"
#include "softtouch/logging.hpp"
#include "softtouch/types.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

void print_all_help(CLI::App& app) {
  std::cout << app.help();
  for (const CLI::App* sub : app.get_subcommands({})) {
    std::cout << "\n" << sub->help();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-finger force estimation toolkit: simulate grasps, train force regressors, classify contact."};
  app.name("softtouch");
  app.require_subcommand(1);
  std::string log_level;
  app.add_option("--log-level", log_level, "trace, debug, info, warn, err, critical or off (default: $SOFTTOUCH_LOG or warn)");
  app.add_flag("--help-all", "Print help for every subcommand and exit");

  softtouch::cli::register_simulate(app);
  softtouch::cli::register_validate(app);
  softtouch::cli::register_train(app);
  softtouch::cli::register_grid(app);
  softtouch::cli::register_ablate(app);
  softtouch::cli::register_eval(app);
  softtouch::cli::register_detect(app);
  softtouch::cli::register_replay(app);
  softtouch::cli::register_report(app);

  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--help-all") == 0) {
      print_all_help(app);
      return kOk;
    }
  }

  softtouch::log::init_from_env();
  app.parse_complete_callback([&] {
    if (!log_level.empty()) softtouch::log::set_level(log_level);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const softtouch::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const YAML::Exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
