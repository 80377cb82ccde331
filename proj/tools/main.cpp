// z2lgt: Ising lattice gauge theory experiments writing CSV reports.
//
// Usage: z2lgt <command> [flags]      (see --help for the command list)
// Configuration comes from an optional key=value file (--config) overridden
// by flags; each command echoes the fully resolved configuration into the
// CSV comment header. Exit codes: 0 success, 2 invalid configuration,
// 3 verification failure, 4 capacity exceeded.
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "options.hpp"

namespace {

void load_config_file(const std::string& path, z2lgt::cli::Options& opts) {
  std::ifstream in(path);
  if (!in) throw z2lgt::DomainError("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw z2lgt::DomainError("config line is not key=value: " + line);
    opts.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising (Z2) lattice gauge theory: Ursell functions, cluster expansion, searches"};
  app.require_subcommand(1);

  std::string config_path;
  // Only flags actually given override the config file.
  std::map<std::string, std::string> flags;
  auto add_opt = [&flags](CLI::App* cmd, const std::string& name, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
  };

  for (const std::string& name : z2lgt::cli::command_names()) {
    CLI::App* cmd = app.add_subcommand(name);
    cmd->add_option("--config", config_path, "key=value configuration file");
    add_opt(cmd, "out", "output CSV path (default <command>.csv)");
    add_opt(cmd, "beta", "comma-separated inverse temperatures");
    add_opt(cmd, "box", "vertex counts per axis, e.g. 4,4,4");
    add_opt(cmd, "dim", "lattice dimension (must match --box)");
    add_opt(cmd, "method", "exact or mcmc");
    add_opt(cmd, "sweeps", "mcmc measurement sweeps");
    add_opt(cmd, "seed", "mcmc seed (required for method=mcmc)");
    add_opt(cmd, "cutoff", "support cap / search length cap");
    add_opt(cmd, "workers", "worker threads for exact enumeration");
    add_opt(cmd, "tol", "verification tolerance override");
    add_opt(cmd, "utol", "ursell vanishing tolerance");
    add_opt(cmd, "loop", "loop spec: fig3_10edge|fig4_12edge|fig5_16edge_2d|rect:L1xL2");
    add_opt(cmd, "edges", "explicit edge list x,y[,z],+a;...");
    add_opt(cmd, "anchor", "anchor vertex, e.g. 1,1,1");
    add_opt(cmd, "n", "number of loops / variables");
    add_opt(cmd, "L1", "rectangle side 1");
    add_opt(cmd, "L2", "rectangle side 2");
    add_opt(cmd, "family", "ursell-wilson family: stacked|identical");
    add_opt(cmd, "interaction", "1-based surface indices, e.g. 1,2");
    add_opt(cmd, "mode", "factorize mode: synthetic|exact");
    add_opt(cmd, "shortcut", "ursell-edges loop shortcut (0|1)");
    add_opt(cmd, "mult", "cluster multiplicity cap");
    add_opt(cmd, "pad", "slab padding around the surfaces");
    add_opt(cmd, "budget", "log2 enumeration budget");
    add_opt(cmd, "nodes", "vortex enumeration node budget");
    add_opt(cmd, "box3", "3d companion box for verify-elitzur");
    add_opt(cmd, "tuples", "number of random tuples");
    add_opt(cmd, "start", "mcmc start: cold|hot");
    add_opt(cmd, "beta2d", "theorem2-suite 2d beta");
    add_opt(cmd, "beta3d", "theorem2-suite 3d beta");
    add_opt(cmd, "beta16", "theorem2-suite 16-edge beta");
    add_opt(cmd, "beta0", "low-temperature regime marker");
    add_opt(cmd, "rtol", "relative tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : z2lgt::cli::kBadConfig;
  }

  z2lgt::cli::Options opts;
  try {
    if (!config_path.empty()) load_config_file(config_path, opts);
  } catch (const z2lgt::DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return z2lgt::cli::kBadConfig;
  }
  for (auto& [k, v] : flags) opts.set(k, v);  // flags win

  return z2lgt::cli::run_command(app.get_subcommands().front()->get_name(), opts);
}
