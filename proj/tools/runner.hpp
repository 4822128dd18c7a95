#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace ethlab::cli {

struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> parallel;
};

struct StageRecord {
  std::string name;
  std::string scope;  ///< "<model>/k<k>", "<model>" or "" for job-level stages
  double seconds = 0.0;
  std::string status;  ///< ok | failed | skipped
  std::string error;
};

struct FileRecord {
  std::string path;  ///< relative to the output directory, '/' separated
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::filesystem::path output_dir;
  std::vector<StageRecord> stages;
  std::vector<FileRecord> files;

  bool failed() const;
};

/// --out, else the config's output_dir (relative paths resolved against
/// $ETHLAB_OUTPUT_ROOT or the working directory), else
/// $ETHLAB_OUTPUT_ROOT/<config stem>, else ./ethlab-out/<config stem>.
std::filesystem::path resolve_output_dir(const JobConfig& config,
                                         const std::optional<std::filesystem::path>& out,
                                         const std::filesystem::path& config_path);

/// Runs every requested analysis and writes manifest.json last. Stage
/// failures are recorded in the manifest, never thrown.
RunManifest run(const JobConfig& config, const std::filesystem::path& output_dir,
                const std::string& config_text, std::ostream* log = nullptr);

}  // namespace ethlab::cli
