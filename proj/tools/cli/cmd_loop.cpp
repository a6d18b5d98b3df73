#include <cstdio>
#include <iostream>
#include <memory>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "owg/config_io.hpp"
#include "owg/feedback_loop.hpp"
#include "owg/waveform_io.hpp"

namespace owg::cli {

void add_loop_command(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string target;
    std::string channel;
    std::string preset;
    std::string replay;
    std::string method = "tf-free";
    LoopConfig loop;
    std::optional<std::uint64_t> seed;
    bool no_heterodyne = false;
    bool no_reestimate = false;
    bool no_discrepancy_stop = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("loop", "Closed-loop pulse correction against a simulated or recorded bench");
  sub->add_option("--target", o->target, "Target envelope (.csv or .json)")->required();
  auto* ch = sub->add_option("--channel", o->channel, "ChannelConfig JSON for the simulated bench");
  auto* pr = sub->add_option("--preset", o->preset, "identity | distorting simulated bench");
  auto* rp = sub->add_option("--replay", o->replay, "Directory of recorded output_NNN.csv responses");
  ch->excludes(pr)->excludes(rp);
  pr->excludes(rp);
  sub->add_option("--method", o->method, "tf | tf-free (or transfer-function | transfer-function-free)")
      ->capture_default_str();
  sub->add_option("--max-iters", o->loop.max_loop_iters, "Loop iteration budget")->capture_default_str();
  sub->add_option("--converge-mase", o->loop.convergence_mase, "Stop once MASE falls to this level")
      ->capture_default_str();
  sub->add_option("--memory", o->loop.memory, "Estimated kernel taps")->capture_default_str();
  sub->add_option("--ridge", o->loop.ridge_lambda, "Estimation ridge parameter")->capture_default_str();
  sub->add_option("--guard", o->loop.guard_samples, "Causal headroom before the aligned response, samples")
      ->capture_default_str();
  sub->add_option("--offline-iters", o->loop.offline.max_iters, "Offline LM iteration cap")->capture_default_str();
  sub->add_option("--offline-tol", o->loop.offline.cost_tol, "Offline LM cost tolerance")->capture_default_str();
  sub->add_option("--seed", o->seed, "Override the simulated channel seed");
  sub->add_flag("--no-heterodyne", o->no_heterodyne, "Skip the beat-note round trip in the simulated bench");
  sub->add_flag("--no-reestimate", o->no_reestimate, "Estimate the kernel on the first iteration only");
  sub->add_flag("--no-discrepancy-stop", o->no_discrepancy_stop,
                "Run offline iterations to the cost tolerance even below the model's fit residual");
  sub->add_flag("--printed-sign", o->loop.printed_sign, "Transfer-function-free update with the opposite sign");

  out.push_back({"loop", sub, [o](RunContext& ctx) {
                   using Json = nlohmann::ordered_json;
                   const auto target = ctx.load_envelope(o->target);
                   LoopConfig config = o->loop;
                   config.method = parse_loop_method(o->method);
                   config.reestimate_model_each_iter = !o->no_reestimate;
                   config.discrepancy_stop = !o->no_discrepancy_stop;
                   config.validate();

                   Measure measure;
                   Json backend;
                   if (!o->replay.empty()) {
                     auto bench = std::make_shared<ReplayBench>(o->replay);
                     for (const auto& p : bench->files()) ctx.read_input(p);
                     backend = {{"kind", "replay"}, {"directory", o->replay}};
                     measure = [bench](const ComplexEnvelope& in) { return (*bench)(in); };
                   } else {
                     ChannelConfig channel;
                     if (!o->channel.empty()) {
                       channel = channel_from_json(ctx.read_input(o->channel));
                     } else if (o->preset.empty() || o->preset == "distorting") {
                       channel = ChannelConfig::distorting();
                     } else if (o->preset == "identity") {
                       channel = ChannelConfig::identity();
                     } else {
                       throw UsageError("unknown channel preset '" + o->preset + "'");
                     }
                     if (o->seed) channel.seed = *o->seed;
                     ctx.set_seed(channel.seed);
                     std::optional<HeterodyneConfig> het;
                     if (!o->no_heterodyne) het = HeterodyneConfig{};
                     auto bench = std::make_shared<SimulatedBench>(channel, het);
                     backend = {{"kind", "simulated"},
                                {"heterodyne", het.has_value()},
                                {"channel", Json::parse(channel_to_json(channel))}};
                     measure = [bench](const ComplexEnvelope& in) { return (*bench)(in); };
                   }

                   const auto report = closed_loop(measure, target, config);
                   ctx.config() = Json{{"backend", backend}};
                   ctx.write("report.json", loop_report_to_json(report, config));
                   ctx.write("convergence.csv", convergence_csv(report));
                   for (const auto& r : report.records) {
                     char stem[32];
                     std::snprintf(stem, sizeof stem, "iter_%03d", r.index);
                     ctx.write(std::string(stem) + "_input.csv", envelope_to_csv(r.s_pred));
                     ctx.write(std::string(stem) + "_output.csv", envelope_to_csv(r.s_out));
                   }
                   if (report.final_model) ctx.write("final_model.json", model_to_json(*report.final_model));

                   std::cout << to_string(report.method) << ": " << report.records.size() << " iterations, final MASE "
                             << num(report.final_mase()) << (report.converged ? " (converged)\n" : " (not converged)\n");
                   return report.converged ? kExitOk : kExitNonConvergence;
                 }});
}

}  // namespace owg::cli
