#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "owg/envelope.hpp"
#include "owg/heterodyne.hpp"

namespace owg {

/// Thrown on malformed waveform files (missing header, bad numbers, non-uniform time axis).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Envelope CSV: header `t_s,i,q`, one row per sample, %.17g formatting.
std::string envelope_to_csv(const ComplexEnvelope& env);
ComplexEnvelope envelope_from_csv(std::string_view text);

// Envelope JSON: {"t0", "dt", "i": [...], "q": [...]}. Round-trips bit-exactly.
std::string envelope_to_json(const ComplexEnvelope& env);
ComplexEnvelope envelope_from_json(std::string_view text);

// Beat trace CSV: header `t_s,v`.
std::string trace_to_csv(const BeatTrace& trace);
BeatTrace trace_from_csv(std::string_view text);

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file then renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

/// Chooses CSV or JSON by extension (.json means JSON).
ComplexEnvelope load_envelope(const std::filesystem::path& path);
void save_envelope(const std::filesystem::path& path, const ComplexEnvelope& env);

}  // namespace owg
