#include "owg/feedback_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "owg/alignment.hpp"
#include "owg/errors.hpp"
#include "owg/metrics.hpp"
#include "owg/sysid.hpp"
#include "owg/waveform_io.hpp"

namespace owg {

std::string_view to_string(LoopMethod method) {
  return method == LoopMethod::kTransferFunction ? "transfer-function" : "transfer-function-free";
}

LoopMethod parse_loop_method(std::string_view name) {
  if (name == "transfer-function" || name == "tf") return LoopMethod::kTransferFunction;
  if (name == "transfer-function-free" || name == "tf-free") return LoopMethod::kTransferFunctionFree;
  throw std::invalid_argument("unknown loop method '" + std::string(name) + "'");
}

void LoopConfig::validate() const {
  if (max_loop_iters < 1) throw std::invalid_argument("LoopConfig: max_loop_iters must be at least 1");
  if (!(convergence_mase >= 0.0)) throw std::invalid_argument("LoopConfig: convergence_mase must be nonnegative");
  if (memory < 1) throw std::invalid_argument("LoopConfig: memory must be at least 1");
  if (!(ridge_lambda >= 0.0)) throw std::invalid_argument("LoopConfig: ridge_lambda must be nonnegative");
  if (guard_samples < 0) throw std::invalid_argument("LoopConfig: guard_samples must be nonnegative");
  offline.validate();
}

std::optional<int> LoopReport::first_below(double threshold) const {
  for (const auto& r : records) {
    if (r.mase <= threshold) return r.index;
  }
  return std::nullopt;
}

LoopReport closed_loop(const Measure& measure, const ComplexEnvelope& s_target, const LoopConfig& config) {
  config.validate();
  const auto& grid = s_target.grid();
  const auto target_guarded = shift_samples(s_target, config.guard_samples);

  LoopReport report;
  report.method = config.method;
  ComplexEnvelope s_in = s_target;
  std::optional<VolterraModel> model;

  for (int it = 1; it <= config.max_loop_iters; ++it) {
    ComplexEnvelope raw = s_in;
    try {
      raw = measure(s_in);
    } catch (const std::exception& e) {
      throw std::runtime_error("loop iteration " + std::to_string(it) + ": measurement failed: " + e.what());
    }
    const auto aligned = align_delay(raw, s_target);
    IterationRecord rec{.index = it,
                        .s_pred = s_in,
                        .s_out = aligned.envelope,
                        .mase = mase(aligned.envelope, s_target),
                        .mse = mse_cost(aligned.envelope, s_target),
                        .model_error = std::nullopt,
                        .delay = aligned.delay,
                        .offline_iterations = 0};

    const bool done = rec.mase <= config.convergence_mase;
    if (done || it == config.max_loop_iters) {
      report.records.push_back(std::move(rec));
      report.converged = done;
      break;
    }

    if (config.method == LoopMethod::kTransferFunction) {
      const auto response = window_at_lag(raw, grid, aligned.lag - config.guard_samples);
      if (config.reestimate_model_each_iter || !model) {
        model = estimate_kernel(s_in, response, config.memory, config.ridge_lambda);
      }
      const auto fit = model_error(*model, s_in, response);
      rec.model_error = fit.mase;
      // Fitting the target more tightly than the model reproduces the measurement
      // only inverts noise; stop the inner iterations at the model's residual.
      LMConfig offline = config.offline;
      if (config.discrepancy_stop) offline.cost_tol = std::max(offline.cost_tol, fit.mse);
      const auto off = offline_iterate(*model, target_guarded, offline, s_in);
      rec.offline_iterations = off.iterations;
      s_in = off.s_pred;
    } else {
      s_in = tf_free_step(s_in, s_target, aligned.envelope, config.printed_sign);
    }
    report.records.push_back(std::move(rec));
  }
  report.final_model = model;
  return report;
}

SimulatedBench::SimulatedBench(ChannelConfig channel, std::optional<HeterodyneConfig> heterodyne)
    : channel_(std::move(channel)), heterodyne_(std::move(heterodyne)) {
  channel_.validate();
}

ComplexEnvelope SimulatedBench::operator()(const ComplexEnvelope& input) {
  const auto& g = input.grid();
  const long d = delay_samples(channel_.delay, g.dt());
  const auto padded = embed(input, g.resized(g.size() + static_cast<std::size_t>(d)));
  ChannelConfig c = channel_;
  c.seed = channel_.seed + calls_;
  auto out = apply_channel(padded, c);
  if (heterodyne_) {
    HeterodyneConfig h = *heterodyne_;
    h.seed = heterodyne_->seed + calls_;
    out = heterodyne_roundtrip(out, h);
  }
  ++calls_;
  return out;
}

ReplayBench::ReplayBench(std::filesystem::path directory) {
  if (!std::filesystem::is_directory(directory)) {
    throw std::invalid_argument("replay directory not found: " + directory.string());
  }
  for (int i = 1;; ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "output_%03d", i);
    const auto csv = directory / (std::string(stem) + ".csv");
    const auto json = directory / (std::string(stem) + ".json");
    if (std::filesystem::exists(csv)) {
      outputs_.push_back(csv);
    } else if (std::filesystem::exists(json)) {
      outputs_.push_back(json);
    } else {
      break;
    }
  }
  if (outputs_.empty()) throw std::invalid_argument("replay directory has no output_001 recording");
}

ComplexEnvelope ReplayBench::operator()(const ComplexEnvelope& input) {
  if (next_ >= outputs_.size()) throw std::runtime_error("replay recordings exhausted");
  auto out = load_envelope(outputs_[next_++]);
  if (std::abs(out.grid().dt() - input.grid().dt()) > 1e-9 * input.grid().dt()) {
    throw GridMismatch("recorded output has a different sample period");
  }
  return out;
}

std::string loop_report_to_json(const LoopReport& report, const LoopConfig& config) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["method"] = std::string(to_string(report.method));
  j["converged"] = report.converged;
  j["iterations"] = report.records.size();
  j["final_mase"] = report.final_mase();
  Json cfg;
  cfg["max_loop_iters"] = config.max_loop_iters;
  cfg["convergence_mase"] = config.convergence_mase;
  cfg["reestimate_model_each_iter"] = config.reestimate_model_each_iter;
  cfg["memory"] = config.memory;
  cfg["ridge_lambda"] = config.ridge_lambda;
  cfg["guard_samples"] = config.guard_samples;
  cfg["printed_sign"] = config.printed_sign;
  cfg["discrepancy_stop"] = config.discrepancy_stop;
  cfg["offline"] = {{"lambda0", config.offline.lambda0},
                    {"lambda_up", config.offline.lambda_up},
                    {"lambda_down", config.offline.lambda_down},
                    {"max_iters", config.offline.max_iters},
                    {"cost_tol", config.offline.cost_tol}};
  j["config"] = cfg;
  Json recs = Json::array();
  for (const auto& r : report.records) {
    Json x;
    x["index"] = r.index;
    x["mase"] = r.mase;
    x["mse"] = r.mse;
    x["model_error"] = r.model_error ? Json(*r.model_error) : Json(nullptr);
    x["delay_s"] = r.delay;
    x["offline_iterations"] = r.offline_iterations;
    recs.push_back(x);
  }
  j["records"] = recs;
  if (report.final_model) {
    std::vector<double> re;
    std::vector<double> im;
    for (const auto& c : report.final_model->h1) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    j["final_model"] = {{"h0_re", report.final_model->h0.real()},
                        {"h0_im", report.final_model->h0.imag()},
                        {"h1_re", re},
                        {"h1_im", im}};
  } else {
    j["final_model"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string convergence_csv(const LoopReport& report) {
  std::string out = "iteration,mase,mse\n";
  char buf[96];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.index, r.mase, r.mse);
    out += buf;
  }
  return out;
}

}  // namespace owg
