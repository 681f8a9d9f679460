#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diraclab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for Dirac-type Lax operators and the matrix NLS flow"};
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list", list, "List the available experiments");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Path to the config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return diraclab::kExitValidation;
  }

  if (list) {
    if (run->parsed()) {
      std::cerr << "--list takes no further arguments\n";
      return diraclab::kExitValidation;
    }
    diraclab::print_experiment_list(std::cout);
    return diraclab::kExitSuccess;
  }
  if (run->parsed()) return diraclab::run_config_file(config_path, std::cerr);

  std::cerr << app.help();
  return diraclab::kExitValidation;
}
