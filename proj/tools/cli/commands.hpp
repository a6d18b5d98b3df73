#pragma once

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/run_context.hpp"

namespace owg::cli {

/// A leaf subcommand and the action run once its flags are parsed.
struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::function<int(RunContext&)> action;
};

void add_pulse_command(CLI::App& root, std::vector<Command>& out);
void add_simulate_command(CLI::App& root, std::vector<Command>& out);
void add_demod_command(CLI::App& root, std::vector<Command>& out);
void add_estimate_command(CLI::App& root, std::vector<Command>& out);
void add_loop_command(CLI::App& root, std::vector<Command>& out);
void add_optics_command(CLI::App& root, std::vector<Command>& out);

/// Shortest round-trip decimal form used by every CSV table.
std::string num(double v);

}  // namespace owg::cli
