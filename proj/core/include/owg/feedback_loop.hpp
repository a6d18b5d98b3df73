#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "owg/channel.hpp"
#include "owg/envelope.hpp"
#include "owg/heterodyne.hpp"
#include "owg/predistortion.hpp"
#include "owg/volterra.hpp"

namespace owg {

enum class LoopMethod { kTransferFunction, kTransferFunctionFree };

std::string_view to_string(LoopMethod method);
/// Accepts "transfer-function" / "tf" and "transfer-function-free" / "tf-free".
LoopMethod parse_loop_method(std::string_view name);

struct LoopConfig {
  LoopMethod method = LoopMethod::kTransferFunctionFree;
  int max_loop_iters = 10;
  LMConfig offline;
  bool reestimate_model_each_iter = true;
  double convergence_mase = 1e-3;
  std::size_t memory = 64;     // taps of the estimated kernel
  double ridge_lambda = 1e-6;  // estimation regularization
  long guard_samples = 8;      // causal headroom left in front of the aligned response
  bool printed_sign = false;   // tf-free update with the sign as printed
  bool discrepancy_stop = true;  // stop offline iterations at the model's own fit residual

  void validate() const;
};

struct IterationRecord {
  int index = 0;  // 1-based
  ComplexEnvelope s_pred;  // input sent this iteration
  ComplexEnvelope s_out;   // measured output aligned to the target
  double mase = 0.0;
  double mse = 0.0;
  std::optional<double> model_error;  // MASE of the fitted model, transfer-function method only
  double delay = 0.0;                 // s, from alignment
  int offline_iterations = 0;
};

struct LoopReport {
  LoopMethod method = LoopMethod::kTransferFunctionFree;
  std::vector<IterationRecord> records;
  bool converged = false;
  std::optional<VolterraModel> final_model;

  double final_mase() const { return records.back().mase; }
  /// First 1-based iteration with MASE <= threshold, if any.
  std::optional<int> first_below(double threshold) const;
};

/// Measurement callback: input on the target grid, output on any grid of the same period.
using Measure = std::function<ComplexEnvelope(const ComplexEnvelope&)>;

/// Closed feedback loop. Exceptions from the callback are rethrown as
/// std::runtime_error naming the iteration.
LoopReport closed_loop(const Measure& measure, const ComplexEnvelope& s_target, const LoopConfig& config);

/// Simulated backend: zero-pads the input to cover the channel delay, applies
/// the channel and optionally a beat-trace round trip. Call i uses seed + i.
class SimulatedBench {
public:
  explicit SimulatedBench(ChannelConfig channel, std::optional<HeterodyneConfig> heterodyne = std::nullopt);
  ComplexEnvelope operator()(const ComplexEnvelope& input);
  std::size_t calls() const noexcept { return calls_; }

private:
  ChannelConfig channel_;
  std::optional<HeterodyneConfig> heterodyne_;
  std::size_t calls_ = 0;
};

/// Recorded backend: call i returns output_NNN (1-based, three digits) from a directory,
/// as CSV or JSON. Throws std::runtime_error when the recordings run out.
class ReplayBench {
public:
  explicit ReplayBench(std::filesystem::path directory);
  ComplexEnvelope operator()(const ComplexEnvelope& input);
  std::size_t available() const noexcept { return outputs_.size(); }
  std::vector<std::filesystem::path> files() const { return outputs_; }

private:
  std::vector<std::filesystem::path> outputs_;
  std::size_t next_ = 0;
};

std::string loop_report_to_json(const LoopReport& report, const LoopConfig& config);
/// iteration,mase,mse
std::string convergence_csv(const LoopReport& report);

}  // namespace owg
