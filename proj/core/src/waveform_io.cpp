#include "owg/waveform_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <unistd.h>

#include "json.hpp"

namespace owg {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  const std::string s(trim(field));
  if (s.empty()) throw FormatError("line " + std::to_string(line) + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

// Parses a CSV with the given header into columns.
std::vector<std::vector<double>> parse_table(std::string_view text, std::string_view header) {
  const std::size_t ncol = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  std::vector<std::vector<double>> cols(ncol);
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) {
        throw FormatError("expected header '" + std::string(header) + "', got '" + std::string(line) + "'");
      }
      seen_header = true;
      continue;
    }
    std::size_t c = 0;
    while (true) {
      const auto comma = line.find(',');
      if (c >= ncol) throw FormatError("line " + std::to_string(line_no) + ": too many fields");
      cols[c++].push_back(parse_number(line.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (c != ncol) throw FormatError("line " + std::to_string(line_no) + ": too few fields");
  }
  if (!seen_header) throw FormatError("missing header '" + std::string(header) + "'");
  if (cols[0].size() < 2) throw FormatError("need at least two samples");
  return cols;
}

TimeGrid grid_from_times(const std::vector<double>& t) {
  const std::size_t n = t.size();
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw FormatError("time axis must be increasing");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = t.front() + static_cast<double>(k) * dt;
    if (std::abs(t[k] - expected) > 1e-6 * dt) {
      throw FormatError("time axis is not uniform at row " + std::to_string(k + 1));
    }
  }
  return TimeGrid(t.front(), dt, n);
}

}  // namespace

std::string envelope_to_csv(const ComplexEnvelope& env) {
  std::string out = "t_s,i,q\n";
  out.reserve(64 * env.size());
  for (std::size_t k = 0; k < env.size(); ++k) {
    out += fmt(env.grid().time(k)) + ',' + fmt(env[k].real()) + ',' + fmt(env[k].imag()) + '\n';
  }
  return out;
}

ComplexEnvelope envelope_from_csv(std::string_view text) {
  const auto cols = parse_table(text, "t_s,i,q");
  return iq_join(cols[1], cols[2], grid_from_times(cols[0]));
}

std::string envelope_to_json(const ComplexEnvelope& env) {
  const auto [i, q] = iq_split(env);
  nlohmann::json j;
  j["t0"] = env.grid().t0();
  j["dt"] = env.grid().dt();
  j["i"] = i;
  j["q"] = q;
  return j.dump() + "\n";
}

ComplexEnvelope envelope_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto i = j.at("i").get<std::vector<double>>();
    const auto q = j.at("q").get<std::vector<double>>();
    if (i.size() != q.size()) throw FormatError("i and q lengths differ");
    if (i.size() < 2) throw FormatError("need at least two samples");
    const double dt = j.at("dt").get<double>();
    if (!(dt > 0.0)) throw FormatError("dt must be positive");
    return iq_join(i, q, TimeGrid(j.at("t0").get<double>(), dt, i.size()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("envelope JSON: ") + e.what());
  }
}

std::string trace_to_csv(const BeatTrace& trace) {
  std::string out = "t_s,v\n";
  out.reserve(48 * trace.samples.size());
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    out += fmt(trace.grid.time(k)) + ',' + fmt(trace.samples[k]) + '\n';
  }
  return out;
}

BeatTrace trace_from_csv(std::string_view text) {
  auto cols = parse_table(text, "t_s,v");
  return BeatTrace{grid_from_times(cols[0]), std::move(cols[1])};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

ComplexEnvelope load_envelope(const std::filesystem::path& path) {
  const auto text = read_text(path);
  return path.extension() == ".json" ? envelope_from_json(text) : envelope_from_csv(text);
}

void save_envelope(const std::filesystem::path& path, const ComplexEnvelope& env) {
  write_text_atomic(path, path.extension() == ".json" ? envelope_to_json(env) : envelope_to_csv(env));
}

}  // namespace owg
