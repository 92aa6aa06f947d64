#include <Eigen/Core>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fbp/commands.hpp"

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("FBPOPT_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"free-boundary control solver and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  bool verbose = false;
  app.add_option("-c,--config", config_path, "JSON config file (defaults used when omitted)");
  app.add_option("-o,--out-dir", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "sampling seed (overrides the config)");
  app.add_flag("--verbose", verbose, "progress notes on stderr");

  for (const auto& name : fbp::command_names()) app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  try {
    fbp::RunConfig rc =
        config_path.empty() ? fbp::parse_config_json(nlohmann::json::object())
                            : fbp::parse_config(config_path);
    if (!out_dir.empty()) rc.out_dir = out_dir;
    if (seed >= 0) rc.seed = static_cast<std::uint64_t>(seed);
    const std::string cmd = app.get_subcommands().front()->get_name();
    return fbp::run_command(cmd, rc, verbose);
  } catch (const fbp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fbp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  } catch (const fbp::VerificationError& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
