#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "owg/envelope.hpp"

namespace owg::cli {

/// Bad flag values or unusable inputs; maps to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string sha256_hex(std::string_view bytes);

/// Output directory from the flag, else $OWG_OUTPUT_DIR, else the working directory.
std::filesystem::path resolve_out_dir(const std::string& flag);

/// Collects inputs, outputs and the resolved configuration of one command and
/// emits them as manifest.json next to the outputs. Every output goes through
/// an atomic temp-file-and-rename write.
class RunContext {
public:
  RunContext(std::string command, std::vector<std::string> arguments, std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const noexcept { return out_dir_; }
  nlohmann::ordered_json& config() noexcept { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  /// Reads a file and records it by content hash. Throws UsageError if unreadable.
  std::string read_input(const std::filesystem::path& path);
  ComplexEnvelope load_envelope(const std::filesystem::path& path);

  void write(const std::string& name, std::string_view text);
  /// Writes stem.csv and its lossless stem.json mirror.
  void write_envelope(const std::string& stem, const ComplexEnvelope& env);

  void finish();

private:
  struct FileEntry {
    std::string path;
    std::string sha256;
  };

  std::string command_;
  std::vector<std::string> arguments_;
  std::filesystem::path out_dir_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<FileEntry> inputs_;
  std::vector<FileEntry> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace owg::cli
