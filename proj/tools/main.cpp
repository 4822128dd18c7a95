#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "formats.hpp"
#include "runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kAnalysisFailure = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Prints diagnostics; true when the config is usable.
bool report(const std::string& path, const ethlab::cli::ParseResult& parsed) {
  for (const auto& d : parsed.diagnostics) std::cerr << path << ": " << d.to_string() << '\n';
  return parsed.ok();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ethlab::cli;

  CLI::App app{"Exact diagonalization tests of eigenstate thermalization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ETHLAB_VERSION_STRING);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned parallel = 1;

  auto* run_cmd = app.add_subcommand("run", "Run the analyses of a job config");
  run_cmd->add_option("config", config_path, "YAML job config")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config seed");
  auto* par_opt = run_cmd->add_option("--parallel", parallel, "Worker threads")
                      ->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "Check a job config and list problems");
  validate_cmd->add_option("config", config_path, "YAML job config")->required();

  auto* formats_cmd = app.add_subcommand("formats", "Print the output file formats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (formats_cmd->parsed()) {
    std::cout << formats_text();
    return kOk;
  }

  const auto text = read_file(config_path);
  if (!text) {
    std::cerr << config_path << ": cannot read file\n";
    return kConfigError;
  }
  auto parsed = parse_config(*text);
  if (!report(config_path, parsed)) return kConfigError;

  if (validate_cmd->parsed()) {
    std::cout << config_path << ": ok\n";
    return kOk;
  }

  auto& cfg = parsed.config;
  if (*seed_opt) cfg.seed = seed;
  if (*par_opt) cfg.parallel = parallel;
  std::optional<std::filesystem::path> out;
  if (*out_opt) out = out_dir;
  const auto dir = resolve_output_dir(cfg, out, config_path);

  try {
    const auto manifest = run(cfg, dir, *text, &std::cerr);
    std::cerr << "wrote " << manifest.files.size() << " files to " << dir.string() << '\n';
    return manifest.failed() ? kAnalysisFailure : kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAnalysisFailure;
  }
}
