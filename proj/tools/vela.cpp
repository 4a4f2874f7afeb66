// Command-line entry point: vela run | mms | check | info.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vela/errors.hpp"
#include "vela/run.hpp"

namespace {

// Config file text followed by any `key=value` overrides, one per line, so
// overrides replace file entries of the same key.
vela::RunConfig build_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw vela::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  if (overrides.empty()) return vela::parse_config(text);

  std::vector<std::string> keys;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw vela::ConfigError("override '" + o + "' is not key=value");
    std::string k = o.substr(0, eq);
    k.erase(k.find_last_not_of(" \t") + 1);
    keys.push_back(k);
  }
  std::istringstream in(text);
  std::string merged, line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    const auto eq = body.find('=');
    bool dropped = false;
    if (eq != std::string::npos) {
      std::string k = body.substr(0, eq);
      k.erase(0, k.find_first_not_of(" \t"));
      k.erase(k.find_last_not_of(" \t") + 1);
      for (const auto& o : keys) dropped = dropped || o == k;
    }
    merged += (dropped ? "# overridden: " + line : line) + "\n";
  }
  for (const auto& o : overrides) merged += o + "\n";
  return vela::parse_config(merged);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vela: periodic pseudo-spectral solver for viscoelastic fluids"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config_options = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Config file (key = value lines)");
    sub->add_option("-s,--set", overrides, "Override a config entry, key=value (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "Run a simulation and write the CSV time series");
  add_config_options(run);
  CLI::App* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  add_config_options(mms);
  CLI::App* check = app.add_subcommand("check", "Evaluate the structural identities of the initial state");
  add_config_options(check);
  std::string checkpoint_path;
  CLI::App* info = app.add_subcommand("info", "Print a checkpoint header");
  info->add_option("checkpoint", checkpoint_path, "Checkpoint file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) return vela::inspect_checkpoint(checkpoint_path, std::cout);
    const vela::RunConfig cfg = build_config(config_path, overrides);
    if (run->parsed()) return vela::run_simulation(cfg, std::cout, std::cerr);
    if (mms->parsed()) return vela::run_mms(cfg, std::cout, std::cerr);
    if (check->parsed()) return vela::check_identities(cfg, std::cout);
  } catch (const vela::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return vela::kExitConfig;
  } catch (const vela::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return vela::kExitConfig;
  } catch (const vela::NumericalAbort& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vela::kExitAbort;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return vela::kExitConfig;
  }
  return vela::kExitOk;
}
