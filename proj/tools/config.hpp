#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ethlab/dynamics.hpp"
#include "ethlab/eth.hpp"
#include "ethlab/hamiltonian.hpp"
#include "ethlab/rmt.hpp"

namespace ethlab::cli {

enum class Analysis { Spectrum, Spacing, EthDiag, EthOffdiag, Quench, Rmt, Entropy };

const char* to_string(Analysis a);
std::optional<Analysis> parse_analysis(const std::string& name);

struct HcbModel {
  HcbParams params;
  std::vector<int> sectors;
};

struct DeutschSpec {
  std::size_t n = 200;
  double epsilon = 0.5;
  double band_beta = 0.5;
  std::size_t realizations = 20;
  std::string h0 = "equal";  ///< equal | poisson
  double h0_spacing = 1.0;
  BandMode band_mode = BandMode::Energy;
};

struct ModelConfig {
  std::string name;
  std::variant<HcbModel, DeutschSpec> model;

  bool is_hcb() const { return std::holds_alternative<HcbModel>(model); }
};

struct SpacingConfig {
  int bins = 40;
  double trim_fraction = 0.2;
  int degree = 7;
};

struct EthConfig {
  DiagonalOptions diagonal;
  double offdiag_window_fraction = 0.2;
  OmegaBins omega;
};

struct QuenchConfig {
  enum class Initial { GroundState, BasisState, Amplitudes };
  Initial initial = Initial::GroundState;
  // GroundState: couplings of the pre-quench Hamiltonian (L, N from the model)
  double t = 1.0;
  double t_prime = 0.0;
  double V = 1.0;
  double V_prime = 0.0;
  std::vector<int> occupied;           ///< BasisState
  std::filesystem::path amplitude_file;  ///< Amplitudes: CSV of re,im per line
  double t_min = 0.1;
  double t_max = 1e4;
  std::size_t points = 400;
};

struct EntropyConfig {
  std::vector<int> cuts;  ///< empty: L / 2
  std::string states = "central";  ///< central | all
  double central_fraction = 0.5;
  std::string thermo_reference = "all_sectors";  ///< all_sectors | sector | none
};

struct RmtConfig {
  std::string observable = "linear";  ///< linear (O0_kk = k/n) | identity
  double central_fraction = 0.8;
};

struct ExportConfig {
  std::string hamiltonian = "none";  ///< none | csv | binary
  std::string observable = "none";
};

struct JobConfig {
  std::vector<ModelConfig> models;
  std::vector<Analysis> analyses;
  ObservableSpec observable = observable::DensityProduct{0, 1};
  SpacingConfig spacing;
  EthConfig eth;
  QuenchConfig quench;
  EntropyConfig entropy;
  RmtConfig rmt;
  ExportConfig exports;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_dir;
  unsigned parallel = 1;

  bool wants(Analysis a) const;
};

struct Diagnostic {
  int line = 0;  ///< 1-based; 0 when unknown
  std::string field;
  std::string message;

  std::string to_string() const;
};

struct ParseResult {
  JobConfig config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses and validates a YAML job description, collecting every problem.
ParseResult parse_config(const std::string& text);

ParseResult load_config(const std::filesystem::path& path);

/// All diagnostics for a config file, not fail-fast. Empty when valid.
std::vector<Diagnostic> validate(const std::string& text);

}  // namespace ethlab::cli
