#include "cli/run_context.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "owg/waveform_io.hpp"

namespace owg::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::filesystem::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OWG_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

RunContext::RunContext(std::string command, std::vector<std::string> arguments, std::filesystem::path out_dir)
    : command_(std::move(command)),
      arguments_(std::move(arguments)),
      out_dir_(std::move(out_dir)),
      start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir_, ec);
  if (ec || !std::filesystem::is_directory(out_dir_)) {
    throw UsageError("cannot create output directory " + out_dir_.string());
  }
}

std::string RunContext::read_input(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("input not found: " + path.string());
  std::string text = read_text(path);
  inputs_.push_back({path.string(), sha256_hex(text)});
  return text;
}

ComplexEnvelope RunContext::load_envelope(const std::filesystem::path& path) {
  const auto text = read_input(path);
  try {
    return path.extension() == ".json" ? envelope_from_json(text) : envelope_from_csv(text);
  } catch (const FormatError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void RunContext::write(const std::string& name, std::string_view text) {
  write_text_atomic(out_dir_ / name, text);
  outputs_.push_back({name, sha256_hex(text)});
}

void RunContext::write_envelope(const std::string& stem, const ComplexEnvelope& env) {
  write(stem + ".csv", envelope_to_csv(env));
  write(stem + ".json", envelope_to_json(env));
}

void RunContext::finish() {
  using Json = nlohmann::ordered_json;
  auto files = [](const std::vector<FileEntry>& entries) {
    Json a = Json::array();
    for (const auto& e : entries) a.push_back({{"path", e.path}, {"sha256", e.sha256}});
    return a;
  };
  Json m;
  m["command"] = command_;
  m["arguments"] = arguments_;
  m["configuration"] = config_;
  m["inputs"] = files(inputs_);
  m["outputs"] = files(outputs_);
  m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
  m["tool_version"] = OWG_VERSION;
  m["duration_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  write_text_atomic(out_dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace owg::cli
