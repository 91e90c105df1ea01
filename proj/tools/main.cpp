#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace softdeco;
using namespace softdeco::app;

namespace {

// Output file or stdout.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw ConfigError("", path, "cannot open output file");
    stream = file.get();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-photon decoherence of a two-path interferometer"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = checks::CheckOptions{}.seed;
  app.add_option("--threads", threads, "worker threads for sweeps and checks")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized invariant draws");

  std::string config_path, out_path;

  auto* gamma = app.add_subcommand("gamma", "decoherence functionals for one configuration (JSON)");
  gamma->add_option("--config", config_path, "run configuration (JSON)")->required();
  gamma->add_option("--out", out_path, "output file, default stdout");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep (CSV)");
  sweep->add_option("--config", config_path, "run configuration with a sweep block")->required();
  sweep->add_option("--out", out_path, "CSV output file")->required();

  auto* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("--config", config_path, "optional configuration; its quadrature block is used");
  std::string fault;
  check->add_option("--inject-fault", fault, "negative control")
      ->check(CLI::IsMember({"metric-sign"}))
      ->group("");

  auto* slit = app.add_subcommand("estimate-slit", "two-slit and mirror estimators (JSON)");
  slit->add_option("--config", config_path, "configuration with a slit block")->required();
  slit->add_option("--out", out_path, "output file, default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const auto env = process_environment();
    if (*check) {
      checks::CheckOptions opt;
      opt.seed = seed;
      if (!config_path.empty()) opt.quadrature = load_config(config_path, env).quadrature;
      if (fault == "metric-sign") opt.fault = checks::Fault::metric_sign;
      return cmd_check(opt, threads, std::cout);
    }

    const RunConfig cfg = load_config(config_path, env);
    Sink sink(out_path);
    if (*gamma) return cmd_gamma(cfg, *sink.stream, std::cerr);
    if (*sweep) return cmd_sweep(cfg, threads, *sink.stream, std::cerr);
    if (*slit) return cmd_estimate_slit(cfg, *sink.stream, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfraredDivergenceError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
