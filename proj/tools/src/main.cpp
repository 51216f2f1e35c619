#include <iostream>

#include <CLI11.hpp>

#include "kksampling/cli/commands.hpp"
#include "kksampling/errors.hpp"
#include "kksampling/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kks: Kantorovich-Kotelnikov sampling experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  app.add_option("--config", config_path, "experiment config file (key = value with [sections])");
  app.add_option("--out", out_dir, "directory for CSV and JSON outputs");
  app.add_option("--threads", threads, "worker threads, 0 selects all cores")->check(CLI::NonNegativeNumber);

  for (const char* name : {"synthesize", "verify", "converge", "reproduce", "compare"}) app.add_subcommand(name);
  app.get_subcommand("synthesize")->description("build a sinc combination of prescribed order for an averager");
  app.get_subcommand("verify")->description("strict compatibility and moment defects of a kernel/averager pair");
  app.get_subcommand("converge")->description("error sweep over levels j with fitted order");
  app.get_subcommand("reproduce")->description("reproduction of a band-limited function");
  app.get_subcommand("compare")->description("Kantorovich vs point sampling, with jitter sensitivity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kks::cli::kExitError;
  }

  try {
    kks::set_thread_count(threads);
    const kks::cli::Config config =
        config_path.empty() ? kks::cli::Config() : kks::cli::Config::from_file(config_path);
    const std::string name = app.get_subcommands().front()->get_name();
    const kks::cli::CommandResult result = kks::cli::run_command(name, config, out_dir);
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
  } catch (const kks::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kks::cli::kExitError;
}
