#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "owg/alignment.hpp"
#include "owg/config_io.hpp"
#include "owg/feedback_loop.hpp"
#include "owg/heterodyne.hpp"
#include "owg/pulse.hpp"
#include "owg/sysid.hpp"
#include "owg/waveform_io.hpp"

namespace owg::cli {
namespace {

using Json = nlohmann::ordered_json;

// Channel from --channel FILE, else the named preset.
ChannelConfig load_channel(RunContext& ctx, const std::string& file, const std::string& preset) {
  if (!file.empty()) return channel_from_json(ctx.read_input(file));
  if (preset == "identity") return ChannelConfig::identity();
  if (preset == "distorting") return ChannelConfig::distorting();
  throw UsageError("unknown channel preset '" + preset + "'");
}

}  // namespace

void add_pulse_command(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string kind = "gate-standin";
    double duration = 0.0;
    double fwhm = 0.0;
    double peak = 1.0;
    double margin = 150e-9;
    double dt = 1e-9;
    double edge_fraction = 0.15;
    double phase_jump = GatePhaseProfile{}.jump;
    double phase_width = GatePhaseProfile{}.width_fraction;
    std::string name = "pulse";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("pulse", "Generate a library pulse on a uniform grid (CSV + JSON)");
  sub->add_option("--kind", o->kind, "truncated-gaussian | gaussian | gate-standin | constant")->capture_default_str();
  sub->add_option("--duration", o->duration, "Pulse support, s")->required();
  sub->add_option("--fwhm", o->fwhm, "Gaussian FWHM, s (Gaussian kinds)");
  sub->add_option("--peak", o->peak, "Peak amplitude in (0, 1]")->capture_default_str();
  sub->add_option("--margin", o->margin, "Zero padding on each side, s")->capture_default_str();
  sub->add_option("--dt", o->dt, "Sample period, s")->capture_default_str();
  sub->add_option("--edge-fraction", o->edge_fraction, "Gate stand-in edge length / duration")->capture_default_str();
  sub->add_option("--phase-jump", o->phase_jump, "Gate stand-in phase step, rad")->capture_default_str();
  sub->add_option("--phase-width", o->phase_width, "Gate stand-in phase step width / duration")->capture_default_str();
  sub->add_option("--name", o->name, "Output file stem")->capture_default_str();

  out.push_back({"pulse", sub, [o](RunContext& ctx) {
                   PulseSpec spec;
                   spec.kind = parse_pulse_kind(o->kind);
                   spec.duration = o->duration;
                   spec.fwhm = o->fwhm;
                   spec.peak = o->peak;
                   spec.edge_fraction = o->edge_fraction;
                   spec.phase_profile = {o->phase_jump, o->phase_width};
                   if (!(o->dt > 0.0) || !(o->margin >= 0.0)) throw UsageError("pulse: dt must be positive, margin nonnegative");
                   const auto env = make_pulse(spec, working_grid(o->duration, o->margin, o->dt));
                   ctx.config() = Json{{"kind", o->kind},       {"duration", o->duration},
                                       {"fwhm", o->fwhm},       {"peak", o->peak},
                                       {"margin", o->margin},   {"dt", o->dt},
                                       {"edge_fraction", o->edge_fraction},
                                       {"phase_jump", o->phase_jump},
                                       {"phase_width", o->phase_width}};
                   ctx.write_envelope(o->name, env);
                   return 0;
                 }});
}

void add_simulate_command(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string input;
    std::string channel;
    std::string preset = "distorting";
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    bool beat = false;
    HeterodyneConfig het;
    std::string name = "output";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("simulate", "Send an envelope through the simulated channel");
  sub->add_option("--input", o->input, "Input envelope (.csv or .json)")->required();
  auto* ch = sub->add_option("--channel", o->channel, "ChannelConfig JSON");
  sub->add_option("--preset", o->preset, "identity | distorting, used without --channel")
      ->capture_default_str()
      ->excludes(ch);
  sub->add_option("--seed", o->seed, "Override the channel noise seed");
  sub->add_option("--noise", o->noise, "Override the channel noise rms");
  sub->add_flag("--beat", o->beat, "Also write the detector beat trace beat.csv");
  sub->add_option("--beat-hz", o->het.beat_frequency, "Beat frequency, Hz")->capture_default_str();
  sub->add_option("--sample-rate", o->het.sample_rate, "Trace sample rate, Hz")->capture_default_str();
  sub->add_option("--detector-noise", o->het.noise_sigma, "Trace noise rms")->capture_default_str();
  sub->add_option("--name", o->name, "Output file stem")->capture_default_str();

  out.push_back({"simulate", sub, [o](RunContext& ctx) {
                   const auto input = ctx.load_envelope(o->input);
                   auto channel = load_channel(ctx, o->channel, o->preset);
                   if (o->seed) channel.seed = *o->seed;
                   if (o->noise) channel.noise_sigma = *o->noise;
                   channel.validate();
                   ctx.set_seed(channel.seed);
                   ctx.config()["channel"] = Json::parse(channel_to_json(channel));

                   SimulatedBench bench(channel);
                   const auto output = bench(input);
                   ctx.write_envelope(o->name, output);
                   if (o->beat) {
                     o->het.seed = channel.seed;
                     ctx.config()["beat"] = {{"beat_hz", o->het.beat_frequency},
                                             {"sample_rate", o->het.sample_rate},
                                             {"detector_noise", o->het.noise_sigma}};
                     ctx.write("beat.csv", trace_to_csv(synthesize_beat(output, o->het.beat_frequency,
                                                                        o->het.sample_rate, o->het.noise_sigma,
                                                                        o->het.seed)));
                   }
                   return 0;
                 }});
}

void add_demod_command(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string trace;
    HeterodyneConfig het;
    double dt = 1e-9;
    std::string name = "envelope";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("demod", "IQ-demodulate a detector beat trace to a complex envelope");
  sub->add_option("--trace", o->trace, "Beat trace CSV (t_s,v)")->required();
  sub->add_option("--beat-hz", o->het.beat_frequency, "Beat frequency, Hz")->capture_default_str();
  sub->add_option("--cutoff-hz", o->het.cutoff, "Low-pass -3 dB frequency, Hz")->capture_default_str();
  sub->add_option("--order", o->het.filter_order, "Butterworth order")->capture_default_str();
  sub->add_option("--dt", o->dt, "Output envelope sample period, s")->capture_default_str();
  sub->add_option("--name", o->name, "Output file stem")->capture_default_str();

  out.push_back({"demod", sub, [o](RunContext& ctx) {
                   const auto trace = [&] {
                     try {
                       return trace_from_csv(ctx.read_input(o->trace));
                     } catch (const FormatError& e) {
                       throw UsageError(o->trace + ": " + e.what());
                     }
                   }();
                   if (!(o->dt > 0.0)) throw UsageError("demod: dt must be positive");
                   const auto n = static_cast<std::size_t>(std::floor(trace.grid.span() / o->dt + 1e-9)) + 1;
                   const TimeGrid grid(trace.grid.t0(), o->dt, n);
                   const auto filter = design_lowpass(o->het.filter_order, o->het.cutoff, trace.grid.sample_rate());
                   ctx.config() = Json{{"beat_hz", o->het.beat_frequency},
                                       {"cutoff_hz", o->het.cutoff},
                                       {"order", o->het.filter_order},
                                       {"dt", o->dt}};
                   ctx.write_envelope(o->name, demodulate(trace, o->het.beat_frequency, filter, grid));
                   return 0;
                 }});
}

void add_estimate_command(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string input;
    std::string output;
    std::size_t memory = 64;
    std::optional<double> lambda;
    std::size_t folds = CVConfig{}.folds;
    std::vector<double> grid = CVConfig{}.lambda_grid;
    long guard = LoopConfig{}.guard_samples;
    bool no_align = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("estimate", "Fit a first-order Volterra kernel to an input/output pair");
  sub->add_option("--input", o->input, "Input envelope sent to the device")->required();
  sub->add_option("--output", o->output, "Measured output envelope")->required();
  sub->add_option("--memory", o->memory, "Kernel taps")->capture_default_str();
  auto* lam = sub->add_option("--lambda", o->lambda, "Fixed ridge parameter (skips cross-validation)");
  sub->add_option("--cv-folds", o->folds, "Contiguous cross-validation folds")->capture_default_str()->excludes(lam);
  sub->add_option("--lambda-grid", o->grid, "Comma-separated ridge grid")
      ->delimiter(',')
      ->capture_default_str()
      ->excludes(lam);
  sub->add_option("--guard", o->guard, "Causal headroom kept before the aligned response, samples")
      ->capture_default_str();
  sub->add_flag("--no-align", o->no_align, "Use the output as recorded (same grid as the input)");

  out.push_back({"estimate", sub, [o](RunContext& ctx) {
                   const auto input = ctx.load_envelope(o->input);
                   const auto raw = ctx.load_envelope(o->output);
                   if (o->guard < 0) throw UsageError("estimate: guard must be nonnegative");
                   ComplexEnvelope response = raw;
                   if (!o->no_align) {
                     const auto a = align_delay(raw, input);
                     response = window_at_lag(raw, input.grid(), a.lag - o->guard);
                   } else {
                     require_same_grid(input.grid(), raw.grid(), "estimate");
                   }

                   std::ostringstream scores;
                   double lambda = 0.0;
                   if (o->lambda) {
                     lambda = *o->lambda;
                   } else {
                     const auto cv = cross_validate(input, response, o->memory, CVConfig{o->folds, o->grid});
                     lambda = cv.lambda_star;
                     scores << "lambda,mean_mse";
                     for (std::size_t f = 1; f <= o->folds; ++f) scores << ",fold_" << f;
                     scores << ",selected\n";
                     for (const auto& s : cv.scores) {
                       scores << num(s.lambda) << ',' << num(s.mean_mse);
                       for (const double v : s.fold_mse) scores << ',' << num(v);
                       scores << ',' << (s.lambda == cv.lambda_star ? 1 : 0) << '\n';
                     }
                   }
                   const auto model = estimate_kernel(input, response, o->memory, lambda);
                   const auto fit = model_error(model, input, response);
                   if (o->lambda) {
                     scores << "lambda,fit_mse,fit_mase\n"
                            << num(lambda) << ',' << num(fit.mse) << ',' << num(fit.mase) << '\n';
                   }
                   ctx.config() = Json{{"memory", o->memory},
                                       {"lambda", lambda},
                                       {"cross_validated", !o->lambda.has_value()},
                                       {"folds", o->lambda ? 0 : o->folds},
                                       {"aligned", !o->no_align},
                                       {"guard", o->guard}};
                   ctx.write("model.json", model_to_json(model));
                   ctx.write("scores.csv", scores.str());
                   std::cout << "lambda " << num(lambda) << "  fit MASE " << num(fit.mase) << "\n";
                   return 0;
                 }});
}

}  // namespace owg::cli
