#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscicell/params.hpp"

namespace oscicell::cli {

enum class Command {
  LinstabSweep,
  PdeRun,
  ModesRun,
  LgcaRun,
  ReproFig7,
  ReproFig11,
};

Command parse_command(const std::string& name);  // throws ValidationError
const char* to_string(Command c);

struct PdeRunSection {
  double T_final = 100.0;
  double cadence = 0.5;
  double ic_epsilon = 0.01;
  double cfl_safety = 0.4;
  double snapshot_cadence = 0.0;
};

struct ModesSection {
  int M = 32;
  double dt = 5e-4;
  double T_final = 5.0;
  double cadence = 0.1;
  double D_rho = 2.0;
  double K = -1.0;
  double Dtheta = 0.05;
  double saturation_ratio = 0.1;
  std::vector<std::complex<double>> A_init;  // A_0.. ; zero-padded to M
  bool emit_state = false;
};

struct LgcaSection {
  int width = 50;
  int height = 50;
  double confluency = 0.4;
  int steps = 2000;
  int n_substeps = 10;
  double J0 = 0.0;
  double J = 0.0;
  double K = 0.0;
  double omega = 0.0;
  int metrics_cadence = 10;
  int ppm_cadence = 0;
  bool ppm_final = true;
  int tile_px = 8;
  bool clock_before_propagation = false;
  bool emit_lattice = false;
};

struct LinstabSection {
  int dim = 1;
  double J0_star = 0.0;
  double Dtheta_star = 0.0;
  double K_min = -3.0, K_max = 3.0;
  int nK = 61;
  double J_min = -2.0, J_max = 2.0;
  int nJ = 41;
  double L_over_rho = 0.0;  // <= 0: continuum
  double kstar_max = 12.566370614359172;
  int boundary_points = 121;
};

struct ExperimentConfig {
  Command command = Command::PdeRun;
  ModelParams params;
  int Nx = 200;
  int Ntheta = 128;
  PdeRunSection run;
  ModesSection modes;
  LgcaSection lgca;
  LinstabSection linstab;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 0;  // 0: OSCICELL_THREADS or hardware
};

// Strict parse: unknown keys anywhere are an error. The optional "command"
// key, when present, must agree with the subcommand.
ExperimentConfig config_from_json(Command cmd, const nlohmann::json& j);

// Fully resolved configuration (defaults filled in), echoed into the manifest.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Apply one "dotted.path=value" override; value parsed as JSON when possible,
// else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& keyval);

// Run the selected pipeline. Returns 0 on success, 2 on runtime fault
// (positivity/blow-up; the fault description goes to stderr). Validation
// problems throw ValidationError before any output is written.
int dispatch(const ExperimentConfig& cfg);

}  // namespace oscicell::cli
