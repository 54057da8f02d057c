#include <entrolen/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  using entrolen::cli::RunConfig;

  CLI::App app{"Algebraic entropy of modules over crossed products K*G"};
  app.set_help_all_flag("--help-all");

  std::string command;
  app.add_option("command", command, "entropy | quotient-entropy | addition-check | zerodiv | tile | folner-ratios | "
                                     "validate-cocycle");
  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file (flags override it)");

  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& key : RunConfig::keys()) {
    if (key == "command") continue;
    options.emplace_back(key, app.add_option("--" + key, values[key]));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : entrolen::cli::kExitInvalid;
  }

  std::vector<std::pair<std::string, std::string>> flags;
  if (!command.empty()) flags.emplace_back("command", command);
  for (const auto& [key, opt] : options) {
    if (opt->count() > 0) flags.emplace_back(key, values[key]);
  }

  RunConfig cfg;
  try {
    cfg = entrolen::cli::build_config(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path),
                                      flags);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return entrolen::cli::kExitInvalid;
  }
  return entrolen::cli::run(cfg, std::cout, std::cerr);
}
