#include "cli/app.hpp"

#include <iostream>

#include "cli/commands.hpp"
#include "owg/errors.hpp"
#include "owg/waveform_io.hpp"

namespace owg::cli {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Optical waveform generation toolkit: pulse synthesis, channel simulation, heterodyne\n"
               "demodulation, kernel estimation, closed-loop predistortion and beam-train optics.\n"
               "All numeric flags are plain SI base units (s, Hz, m, rad, K)."};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  std::string out_dir;
  app.add_option("--out-dir", out_dir, "Output directory (default: $OWG_OUTPUT_DIR, else .)");

  std::vector<Command> commands;
  add_pulse_command(app, commands);
  add_simulate_command(app, commands);
  add_demod_command(app, commands);
  add_estimate_command(app, commands);
  add_loop_command(app, commands);
  add_optics_command(app, commands);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidArgs;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (chosen == nullptr) {
    std::cerr << app.help();
    return kExitInvalidArgs;
  }

  try {
    RunContext ctx(chosen->name, std::vector<std::string>(argv + 1, argv + argc), resolve_out_dir(out_dir));
    const int code = chosen->action(ctx);
    ctx.finish();
    return code;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace owg::cli
