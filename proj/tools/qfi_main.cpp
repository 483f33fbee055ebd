#include "qfichain/protocol.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {
std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  return values;
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information of kicked and quenched spin chains"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "evaluate one protocol configuration");
  run_cmd->add_option("config", run_config, "JSON configuration file")->required();

  std::string sweep_config, sweep_axis, sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "expand one configuration axis");
  sweep_cmd->add_option("config", sweep_config, "JSON configuration file")->required();
  sweep_cmd->add_option("--axis", sweep_axis, "dotted parameter path, e.g. model.h")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated value list")->required();

  bool quick = false;
  auto* validate_cmd = app.add_subcommand("validate", "run the oracle-equivalence suite");
  validate_cmd->add_flag("--quick", quick, "smaller parameter set");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto config = qfi::protocol::ProtocolConfig::from_json_file(run_config);
      for (const auto& path : qfi::protocol::run(config, std::cerr))
        std::cout << path << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const auto config = qfi::protocol::ProtocolConfig::from_json_file(sweep_config);
      const auto values = parse_value_list(sweep_values);
      for (const auto& path : qfi::protocol::sweep(config, sweep_axis, values, std::cerr))
        std::cout << path << "\n";
      return 0;
    }
    if (validate_cmd->parsed())
      return qfi::protocol::validate(quick, std::cout) ? 0 : 3;
  } catch (const qfi::protocol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
