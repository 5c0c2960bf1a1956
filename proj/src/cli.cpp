#include "oscicell/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <set>

#include "oscicell/errors.hpp"
#include "oscicell/io.hpp"
#include "oscicell/kernels.hpp"
#include "oscicell/lgca.hpp"
#include "oscicell/linstab.hpp"
#include "oscicell/modes.hpp"
#include "oscicell/parallel.hpp"
#include "oscicell/pde1d.hpp"

namespace oscicell::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Command parse_command(const std::string& name) {
  if (name == "linstab-sweep") return Command::LinstabSweep;
  if (name == "pde-run") return Command::PdeRun;
  if (name == "modes-run") return Command::ModesRun;
  if (name == "lgca-run") return Command::LgcaRun;
  if (name == "repro-fig7") return Command::ReproFig7;
  if (name == "repro-fig11") return Command::ReproFig11;
  throw ValidationError("unknown command: " + name);
}

const char* to_string(Command c) {
  switch (c) {
    case Command::LinstabSweep: return "linstab-sweep";
    case Command::PdeRun: return "pde-run";
    case Command::ModesRun: return "modes-run";
    case Command::LgcaRun: return "lgca-run";
    case Command::ReproFig7: return "repro-fig7";
    case Command::ReproFig11: return "repro-fig11";
  }
  return "?";
}

namespace {

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ValidationError(section + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key))
      throw ValidationError(section + ": unknown key \"" + key + "\"");
}

double jnum(const json& j, const char* key, double dflt, const std::string& sec) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number())
    throw ValidationError(sec + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

int jint(const json& j, const char* key, int dflt, const std::string& sec) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number_integer())
    throw ValidationError(sec + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

bool jbool(const json& j, const char* key, bool dflt, const std::string& sec) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean())
    throw ValidationError(sec + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ExperimentConfig config_from_json(Command cmd, const json& j) {
  check_keys(j, "config",
             {"command", "params", "grid", "run", "modes", "lgca", "linstab",
              "seed", "output_dir", "threads"});
  ExperimentConfig cfg;
  cfg.command = cmd;
  if (j.contains("command")) {
    const Command stated = parse_command(j.at("command").get<std::string>());
    if (stated != cmd)
      throw ValidationError(std::string("config.command (") +
                            to_string(stated) + ") disagrees with subcommand " +
                            to_string(cmd));
  }
  if (j.contains("params")) cfg.params = params_from_json(j.at("params"));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"Nx", "Ntheta"});
    cfg.Nx = jint(g, "Nx", cfg.Nx, "grid");
    cfg.Ntheta = jint(g, "Ntheta", cfg.Ntheta, "grid");
    if (cfg.Nx < 4 || cfg.Ntheta < 4)
      throw ValidationError("grid: Nx and Ntheta must be >= 4");
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    check_keys(r, "run",
               {"T_final", "cadence", "ic_epsilon", "cfl_safety",
                "snapshot_cadence"});
    cfg.run.T_final = jnum(r, "T_final", cfg.run.T_final, "run");
    cfg.run.cadence = jnum(r, "cadence", cfg.run.cadence, "run");
    cfg.run.ic_epsilon = jnum(r, "ic_epsilon", cfg.run.ic_epsilon, "run");
    cfg.run.cfl_safety = jnum(r, "cfl_safety", cfg.run.cfl_safety, "run");
    cfg.run.snapshot_cadence =
        jnum(r, "snapshot_cadence", cfg.run.snapshot_cadence, "run");
    if (!(cfg.run.T_final >= 0.0) || !(cfg.run.cadence > 0.0) ||
        !(cfg.run.cfl_safety > 0.0 && cfg.run.cfl_safety < 1.0))
      throw ValidationError("run: need T_final >= 0, cadence > 0, 0 < cfl_safety < 1");
  }
  if (j.contains("modes")) {
    const json& m = j.at("modes");
    check_keys(m, "modes",
               {"M", "dt", "T_final", "cadence", "D_rho", "K", "Dtheta",
                "saturation_ratio", "A", "emit_state"});
    cfg.modes.M = jint(m, "M", cfg.modes.M, "modes");
    cfg.modes.dt = jnum(m, "dt", cfg.modes.dt, "modes");
    cfg.modes.T_final = jnum(m, "T_final", cfg.modes.T_final, "modes");
    cfg.modes.cadence = jnum(m, "cadence", cfg.modes.cadence, "modes");
    cfg.modes.D_rho = jnum(m, "D_rho", cfg.modes.D_rho, "modes");
    cfg.modes.K = jnum(m, "K", cfg.modes.K, "modes");
    cfg.modes.Dtheta = jnum(m, "Dtheta", cfg.modes.Dtheta, "modes");
    cfg.modes.saturation_ratio =
        jnum(m, "saturation_ratio", cfg.modes.saturation_ratio, "modes");
    cfg.modes.emit_state = jbool(m, "emit_state", cfg.modes.emit_state, "modes");
    if (m.contains("A")) {
      if (!m.at("A").is_array())
        throw ValidationError("modes.A: expected an array of [re, im] pairs");
      for (const auto& pair : m.at("A")) {
        if (!pair.is_array() || pair.size() != 2)
          throw ValidationError("modes.A: entries must be [re, im] pairs");
        cfg.modes.A_init.emplace_back(pair.at(0).get<double>(),
                                      pair.at(1).get<double>());
      }
    }
    if (cfg.modes.M < 2 || !(cfg.modes.dt > 0.0))
      throw ValidationError("modes: need M >= 2 and dt > 0");
  }
  if (j.contains("lgca")) {
    const json& l = j.at("lgca");
    check_keys(l, "lgca",
               {"width", "height", "confluency", "steps", "n_substeps", "J0",
                "J", "K", "omega", "metrics_cadence", "ppm_cadence",
                "ppm_final", "tile_px", "clock_before_propagation",
                "emit_lattice"});
    cfg.lgca.width = jint(l, "width", cfg.lgca.width, "lgca");
    cfg.lgca.height = jint(l, "height", cfg.lgca.height, "lgca");
    cfg.lgca.confluency = jnum(l, "confluency", cfg.lgca.confluency, "lgca");
    cfg.lgca.steps = jint(l, "steps", cfg.lgca.steps, "lgca");
    cfg.lgca.n_substeps = jint(l, "n_substeps", cfg.lgca.n_substeps, "lgca");
    cfg.lgca.J0 = jnum(l, "J0", cfg.lgca.J0, "lgca");
    cfg.lgca.J = jnum(l, "J", cfg.lgca.J, "lgca");
    cfg.lgca.K = jnum(l, "K", cfg.lgca.K, "lgca");
    cfg.lgca.omega = jnum(l, "omega", cfg.lgca.omega, "lgca");
    cfg.lgca.metrics_cadence =
        jint(l, "metrics_cadence", cfg.lgca.metrics_cadence, "lgca");
    cfg.lgca.ppm_cadence = jint(l, "ppm_cadence", cfg.lgca.ppm_cadence, "lgca");
    cfg.lgca.ppm_final = jbool(l, "ppm_final", cfg.lgca.ppm_final, "lgca");
    cfg.lgca.tile_px = jint(l, "tile_px", cfg.lgca.tile_px, "lgca");
    cfg.lgca.clock_before_propagation =
        jbool(l, "clock_before_propagation", cfg.lgca.clock_before_propagation,
              "lgca");
    cfg.lgca.emit_lattice = jbool(l, "emit_lattice", cfg.lgca.emit_lattice, "lgca");
    if (cfg.lgca.steps < 0 || cfg.lgca.n_substeps < 1)
      throw ValidationError("lgca: need steps >= 0 and n_substeps >= 1");
  }
  if (j.contains("linstab")) {
    const json& l = j.at("linstab");
    check_keys(l, "linstab",
               {"dim", "J0_star", "Dtheta_star", "K_min", "K_max", "nK",
                "J_min", "J_max", "nJ", "L_over_rho", "kstar_max",
                "boundary_points"});
    cfg.linstab.dim = jint(l, "dim", cfg.linstab.dim, "linstab");
    cfg.linstab.J0_star = jnum(l, "J0_star", cfg.linstab.J0_star, "linstab");
    cfg.linstab.Dtheta_star =
        jnum(l, "Dtheta_star", cfg.linstab.Dtheta_star, "linstab");
    cfg.linstab.K_min = jnum(l, "K_min", cfg.linstab.K_min, "linstab");
    cfg.linstab.K_max = jnum(l, "K_max", cfg.linstab.K_max, "linstab");
    cfg.linstab.nK = jint(l, "nK", cfg.linstab.nK, "linstab");
    cfg.linstab.J_min = jnum(l, "J_min", cfg.linstab.J_min, "linstab");
    cfg.linstab.J_max = jnum(l, "J_max", cfg.linstab.J_max, "linstab");
    cfg.linstab.nJ = jint(l, "nJ", cfg.linstab.nJ, "linstab");
    cfg.linstab.L_over_rho = jnum(l, "L_over_rho", cfg.linstab.L_over_rho, "linstab");
    cfg.linstab.kstar_max = jnum(l, "kstar_max", cfg.linstab.kstar_max, "linstab");
    cfg.linstab.boundary_points =
        jint(l, "boundary_points", cfg.linstab.boundary_points, "linstab");
    if (cfg.linstab.dim != 1 && cfg.linstab.dim != 2)
      throw ValidationError("linstab.dim must be 1 or 2");
    if (cfg.linstab.nK < 0 || cfg.linstab.nJ < 0)
      throw ValidationError("linstab: grid sizes must be >= 0");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ValidationError("seed: expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir"))
    cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("threads")) cfg.threads = jint(j, "threads", 0, "config");
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json a_init = json::array();
  for (const auto& a : cfg.modes.A_init)
    a_init.push_back({a.real(), a.imag()});
  return json{
      {"command", to_string(cfg.command)},
      {"params", params_to_json(cfg.params)},
      {"grid", {{"Nx", cfg.Nx}, {"Ntheta", cfg.Ntheta}}},
      {"run",
       {{"T_final", cfg.run.T_final},
        {"cadence", cfg.run.cadence},
        {"ic_epsilon", cfg.run.ic_epsilon},
        {"cfl_safety", cfg.run.cfl_safety},
        {"snapshot_cadence", cfg.run.snapshot_cadence}}},
      {"modes",
       {{"M", cfg.modes.M},
        {"dt", cfg.modes.dt},
        {"T_final", cfg.modes.T_final},
        {"cadence", cfg.modes.cadence},
        {"D_rho", cfg.modes.D_rho},
        {"K", cfg.modes.K},
        {"Dtheta", cfg.modes.Dtheta},
        {"saturation_ratio", cfg.modes.saturation_ratio},
        {"A", a_init},
        {"emit_state", cfg.modes.emit_state}}},
      {"lgca",
       {{"width", cfg.lgca.width},
        {"height", cfg.lgca.height},
        {"confluency", cfg.lgca.confluency},
        {"steps", cfg.lgca.steps},
        {"n_substeps", cfg.lgca.n_substeps},
        {"J0", cfg.lgca.J0},
        {"J", cfg.lgca.J},
        {"K", cfg.lgca.K},
        {"omega", cfg.lgca.omega},
        {"metrics_cadence", cfg.lgca.metrics_cadence},
        {"ppm_cadence", cfg.lgca.ppm_cadence},
        {"ppm_final", cfg.lgca.ppm_final},
        {"tile_px", cfg.lgca.tile_px},
        {"clock_before_propagation", cfg.lgca.clock_before_propagation},
        {"emit_lattice", cfg.lgca.emit_lattice}}},
      {"linstab",
       {{"dim", cfg.linstab.dim},
        {"J0_star", cfg.linstab.J0_star},
        {"Dtheta_star", cfg.linstab.Dtheta_star},
        {"K_min", cfg.linstab.K_min},
        {"K_max", cfg.linstab.K_max},
        {"nK", cfg.linstab.nK},
        {"J_min", cfg.linstab.J_min},
        {"J_max", cfg.linstab.J_max},
        {"nJ", cfg.linstab.nJ},
        {"L_over_rho", cfg.linstab.L_over_rho},
        {"kstar_max", cfg.linstab.kstar_max},
        {"boundary_points", cfg.linstab.boundary_points}}},
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"threads", cfg.threads}};
}

void apply_override(json& doc, const std::string& keyval) {
  const auto eq = keyval.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("--set expects key.path=value, got: " + keyval);
  const std::string path = keyval.substr(0, eq);
  const std::string raw = keyval.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // plain string
  }
  json* cur = &doc;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty()) throw ValidationError("--set: empty key segment in " + keyval);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

// ---------------------------------------------------------------------------
// pipelines

namespace {

using io::Csv;
using io::format_double;

json field_record(const pde::Field& f) {
  return json{{"t", f.time},
              {"Nx", f.Nx},
              {"Ntheta", f.Ntheta},
              {"L", f.L},
              {"values", f.values}};
}

Csv diagnostics_csv(const std::vector<pde::Diagnostics>& traj) {
  Csv csv;
  csv.header = {"t", "r", "mass", "aggregation_index"};
  for (const auto& d : traj)
    csv.add_row({format_double(d.time), format_double(d.r),
                 format_double(d.mass), format_double(d.aggregation_index)});
  return csv;
}

int run_pde(const ExperimentConfig& cfg, const fs::path& out) {
  pde::RunConfig rc;
  rc.Nx = cfg.Nx;
  rc.Ntheta = cfg.Ntheta;
  rc.T_final = cfg.run.T_final;
  rc.cadence = cfg.run.cadence;
  rc.ic_epsilon = cfg.run.ic_epsilon;
  rc.cfl_safety = cfg.run.cfl_safety;
  rc.seed = cfg.seed;
  rc.snapshot_cadence = cfg.run.snapshot_cadence;
  const pde::RunResult res = pde::run(cfg.params, rc);
  io::write_csv(out / "diagnostics.csv", diagnostics_csv(res.trajectory));
  io::write_ndjson(out / "final_field.ndjson", {field_record(res.field)});
  if (!res.snapshots.empty()) {
    std::vector<json> recs;
    recs.reserve(res.snapshots.size());
    for (const auto& s : res.snapshots) recs.push_back(field_record(s));
    io::write_ndjson(out / "snapshots.ndjson", recs);
  }
  if (res.aborted) {
    std::cerr << "pde-run aborted: " << res.fault
              << " (last good state saved, t = " << res.field.time << ")\n";
    return 2;
  }
  return 0;
}

int run_modes(const ExperimentConfig& cfg, const fs::path& out) {
  modes::ModeVector m0(cfg.modes.M, cfg.modes.D_rho, cfg.modes.K,
                       cfg.modes.Dtheta);
  if (cfg.modes.A_init.empty()) {
    m0.A[0] = 1.0;
    m0.A[1] = {0.02, 0.01};
    if (m0.M >= 2) m0.A[2] = {0.005, 0.0};
  } else {
    for (std::size_t k = 0; k < cfg.modes.A_init.size() &&
                            k < m0.A.size();
         ++k)
      m0.A[k] = cfg.modes.A_init[k];
    m0.A[0] = {m0.A[0].real(), 0.0};  // A_0 is real
  }
  modes::IntegrateOptions opt;
  opt.dt = cfg.modes.dt;
  opt.cadence = cfg.modes.cadence;
  opt.saturation_ratio = cfg.modes.saturation_ratio;

  auto emit = [&](const modes::ModeTrajectory& traj) {
    Csv csv;
    csv.header = {"t", "u"};
    const int nabs = std::min(8, cfg.modes.M);
    for (int k = 0; k <= nabs; ++k)
      csv.header.push_back("abs_A" + std::to_string(k));
    for (std::size_t s = 0; s < traj.t.size(); ++s) {
      std::vector<std::string> row = {format_double(traj.t[s]),
                                      format_double(traj.u[s])};
      for (int k = 0; k <= nabs; ++k)
        row.push_back(format_double(std::abs(traj.A[s][k])));
      csv.add_row(std::move(row));
    }
    io::write_csv(out / "modes.csv", csv);
    if (cfg.modes.emit_state) {
      std::vector<json> recs;
      for (std::size_t s = 0; s < traj.t.size(); ++s) {
        std::vector<double> re, im;
        for (const auto& a : traj.A[s]) {
          re.push_back(a.real());
          im.push_back(a.imag());
        }
        recs.push_back(json{{"t", traj.t[s]}, {"re", re}, {"im", im}});
      }
      io::write_ndjson(out / "state.ndjson", recs);
    }
  };

  try {
    const modes::ModeTrajectory traj =
        modes::integrate_modes(m0, cfg.modes.T_final, opt);
    emit(traj);
    if (traj.saturated)
      std::cerr << "modes-run: spectral saturation at t = " << traj.t_end
                << "; truncation no longer resolves the density\n";
    return 0;
  } catch (const modes::ModeBlowup& e) {
    emit(e.partial);
    std::cerr << "modes-run blew up: " << e.what() << "\n";
    return 2;
  }
}

int run_lgca(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  lgca::HexLattice lat = lgca::init_random(cfg.lgca.width, cfg.lgca.height,
                                           cfg.lgca.confluency, cfg.seed);
  lgca::LgcaParams lp;
  lp.J0 = cfg.lgca.J0;
  lp.J = cfg.lgca.J;
  lp.K = cfg.lgca.K;
  lp.omega = cfg.lgca.omega;
  lp.n_substeps = cfg.lgca.n_substeps;
  lp.clock_before_propagation = cfg.lgca.clock_before_propagation;

  Csv csv;
  csv.header = {"step", "r", "r_local", "N"};
  auto emit_metrics = [&]() {
    const lgca::Metrics m = lgca::metrics(lat);
    csv.add_row({std::to_string(lat.step_count), format_double(m.r),
                 format_double(m.r_local), std::to_string(m.N)});
  };
  auto frame_name = [](std::int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06lld.ppm",
                  static_cast<long long>(step));
    return std::string(buf);
  };

  emit_metrics();
  if (cfg.lgca.ppm_cadence > 0)
    io::write_bytes(out / frame_name(0), lgca::render_ppm(lat, cfg.lgca.tile_px));
  for (int s = 1; s <= cfg.lgca.steps; ++s) {
    lgca::lgca_step(lat, lp, threads);
    if (cfg.lgca.metrics_cadence > 0 && s % cfg.lgca.metrics_cadence == 0)
      emit_metrics();
    if (cfg.lgca.ppm_cadence > 0 && s % cfg.lgca.ppm_cadence == 0)
      io::write_bytes(out / frame_name(s),
                      lgca::render_ppm(lat, cfg.lgca.tile_px));
  }
  if (cfg.lgca.metrics_cadence <= 0 ||
      cfg.lgca.steps % cfg.lgca.metrics_cadence != 0)
    emit_metrics();
  io::write_csv(out / "metrics.csv", csv);
  if (cfg.lgca.ppm_final)
    io::write_bytes(out / "final.ppm", lgca::render_ppm(lat, cfg.lgca.tile_px));
  if (cfg.lgca.emit_lattice) {
    json particles = json::array();
    for (int r = 0; r < lat.height; ++r)
      for (int q = 0; q < lat.width; ++q)
        for (int c = 0; c < lgca::kChannels; ++c) {
          const auto& ch = lat.nodes[lat.node_index(q, r)][c];
          if (ch.occupied())
            particles.push_back(
                {{"q", q}, {"r", r}, {"channel", c}, {"theta", ch.theta}});
        }
    io::write_ndjson(out / "lattice.ndjson",
                     {json{{"step", lat.step_count},
                           {"width", lat.width},
                           {"height", lat.height},
                           {"particles", particles}}});
  }
  return 0;
}

int run_sweep(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  linstab::SweepSpec spec;
  spec.dim = cfg.linstab.dim;
  spec.J0_star = cfg.linstab.J0_star;
  spec.Dtheta_star = cfg.linstab.Dtheta_star;
  spec.K_min = cfg.linstab.K_min;
  spec.K_max = cfg.linstab.K_max;
  spec.nK = cfg.linstab.nK;
  spec.J_min = cfg.linstab.J_min;
  spec.J_max = cfg.linstab.J_max;
  spec.nJ = cfg.linstab.nJ;
  spec.L_over_rho = cfg.linstab.L_over_rho;
  spec.opt.kstar_max = cfg.linstab.kstar_max;
  const auto rows = linstab::sweep_phase_diagram(spec, threads);

  Csv csv;
  csv.header = {"K_star", "J_star", "lambda1", "lambda2", "k2", "class"};
  for (const auto& r : rows)
    csv.add_row({format_double(r.K_star), format_double(r.J_star),
                 format_double(r.lambda1), format_double(r.lambda2),
                 format_double(r.k2), r.cls});
  io::write_csv(out / "sweep.csv", csv);

  Csv boundary;
  boundary.header = {"K_star", "f_boundary"};
  const int nb = std::max(2, cfg.linstab.boundary_points);
  for (int i = 0; i < nb; ++i) {
    const double K =
        cfg.linstab.K_min + (cfg.linstab.K_max - cfg.linstab.K_min) * i / (nb - 1);
    try {
      boundary.add_row({format_double(K),
                        format_double(linstab::f_boundary(spec.dim, K))});
    } catch (const BoundaryRangeError&) {
      // outside the parametrized branch; skip the sample
    }
  }
  io::write_csv(out / "boundary.csv", boundary);

  Csv thresholds;
  thresholds.header = {"dim", "j_crit"};
  thresholds.add_row({std::to_string(spec.dim),
                      format_double(linstab::j_crit(spec.dim))});
  io::write_csv(out / "thresholds.csv", thresholds);
  return 0;
}

struct Fig7Point {
  const char* label;
  double J_star;
  double K_star;
};

constexpr Fig7Point kFig7Points[7] = {
    {"I", -1.0, -1.0}, {"II", 0.4, -1.0}, {"III", 1.0, -1.0},
    {"IV", -1.0, 1.0}, {"V", 0.05, 1.0},  {"VI", 0.4, 1.0},
    {"VII", 1.0, 1.0}};

int run_fig7(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  std::vector<pde::RunResult> results(7);
  std::vector<std::string> classes(7);
  parallel_for(7, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ModelParams p = cfg.params;  // J0=0, Dx=1, Dtheta=0.05, rho=1, L=10
      p.J = kFig7Points[i].J_star;  // Rbar = rho = Dx = 1 makes J = J*, K = K*
      p.K = kFig7Points[i].K_star;
      pde::RunConfig rc;
      rc.Nx = cfg.Nx;
      rc.Ntheta = cfg.Ntheta;
      rc.T_final = cfg.run.T_final;
      rc.cadence = cfg.run.cadence;
      rc.ic_epsilon = cfg.run.ic_epsilon;
      rc.cfl_safety = cfg.run.cfl_safety;
      rc.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
      results[i] = pde::run(p, rc);

      DimensionlessParams q;
      q.dim = 1;
      q.J0_star = 0.0;
      q.J_star = kFig7Points[i].J_star;
      q.K_star = kFig7Points[i].K_star;
      q.Dtheta_star = 0.0;  // onset diagram is the zero-clock-diffusion theory
      try {
        const auto rep = linstab::classify_onset(q, linstab::kContinuum);
        classes[i] = linstab::to_string(*rep.onset_class);
      } catch (const MarginalCase&) {
        classes[i] = "BOUNDARY";
      }
    }
  });

  Csv summary;
  summary.header = {"point",   "J_star", "K_star",
                    "onset_class", "r_final", "aggregation_index",
                    "winding_net", "winding_tv"};
  bool aborted = false;
  for (int i = 0; i < 7; ++i) {
    const auto& res = results[i];
    io::write_csv(out / ("point_" + std::string(kFig7Points[i].label) + ".csv"),
                  diagnostics_csv(res.trajectory));
    const auto& last = res.trajectory.back();
    const pde::Winding w = pde::phase_winding(last.mean_phase);
    summary.add_row({kFig7Points[i].label, format_double(kFig7Points[i].J_star),
                     format_double(kFig7Points[i].K_star), classes[i],
                     format_double(last.r), format_double(last.aggregation_index),
                     format_double(w.net), format_double(w.total_variation)});
    if (res.aborted) {
      std::cerr << "repro-fig7 point " << kFig7Points[i].label
                << " aborted: " << res.fault << "\n";
      aborted = true;
    }
  }
  io::write_csv(out / "summary.csv", summary);
  return aborted ? 2 : 0;
}

struct Fig11Run {
  const char* label;
  double J;
  double K;
};

// J0 = 0 throughout; labels follow the observed phases.
constexpr Fig11Run kFig11Runs[5] = {{"incoherent", -1.0, -1.0},
                                    {"global_sync", -1.0, 1.0},
                                    {"clusters", 1.0, 1.0},
                                    {"phase_sorted", 1.0, -0.1},
                                    {"diffuse_global", 0.1, 10.0}};

int run_fig11(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  std::vector<lgca::HexLattice> finals(5);
  std::vector<Csv> metric_tables(5);
  parallel_for(5, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      lgca::HexLattice lat =
          lgca::init_random(cfg.lgca.width, cfg.lgca.height, cfg.lgca.confluency,
                            cfg.seed ^ static_cast<std::uint64_t>(i));
      lgca::LgcaParams lp;
      lp.J = kFig11Runs[i].J;
      lp.K = kFig11Runs[i].K;
      lp.n_substeps = cfg.lgca.n_substeps;
      Csv& csv = metric_tables[i];
      csv.header = {"step", "r", "r_local", "N"};
      const int cad = cfg.lgca.metrics_cadence > 0 ? cfg.lgca.metrics_cadence : 50;
      for (int s = 0; s <= cfg.lgca.steps; ++s) {
        if (s % cad == 0 || s == cfg.lgca.steps) {
          const auto m = lgca::metrics(lat);
          csv.add_row({std::to_string(s), format_double(m.r),
                       format_double(m.r_local), std::to_string(m.N)});
        }
        if (s < cfg.lgca.steps) lgca::lgca_step(lat, lp, 1);
      }
      finals[i] = std::move(lat);
    }
  });

  Csv summary;
  summary.header = {"label", "J", "K", "r", "r_local", "N"};
  for (int i = 0; i < 5; ++i) {
    const std::string label = kFig11Runs[i].label;
    io::write_csv(out / ("metrics_" + label + ".csv"), metric_tables[i]);
    io::write_bytes(out / ("fig11_" + label + ".ppm"),
                    lgca::render_ppm(finals[i], cfg.lgca.tile_px));
    const auto m = lgca::metrics(finals[i]);
    summary.add_row({label, format_double(kFig11Runs[i].J),
                     format_double(kFig11Runs[i].K), format_double(m.r),
                     format_double(m.r_local), std::to_string(m.N)});
  }
  io::write_csv(out / "summary.csv", summary);
  return 0;
}

}  // namespace

int dispatch(const ExperimentConfig& cfg) {
  cfg.params.validate();
  const int threads = resolve_threads(cfg.threads);
  const fs::path out = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec && !fs::exists(out))
    throw IoError("cannot create output directory " + out.string());

  // admissibility is a warning gate, not a hard error
  const auto adm = check_admissible(nondimensionalize(cfg.params));
  for (const auto& v : adm.violations)
    std::cerr << "warning: parameters outside the admissible range: " << v.bound
              << "\n";

  json manifest = {{"command", to_string(cfg.command)},
                   {"config", config_to_json(cfg)},
                   {"threads_resolved", threads},
                   {"simd_backend", kern::backend_name()},
                   {"generated_at", now_iso8601()}};
  io::atomic_write(out / "manifest.json", manifest.dump(2) + "\n");

  switch (cfg.command) {
    case Command::PdeRun: return run_pde(cfg, out);
    case Command::ModesRun: return run_modes(cfg, out);
    case Command::LgcaRun: return run_lgca(cfg, out, threads);
    case Command::LinstabSweep: return run_sweep(cfg, out, threads);
    case Command::ReproFig7: return run_fig7(cfg, out, threads);
    case Command::ReproFig11: return run_fig11(cfg, out, threads);
  }
  return 1;
}

}  // namespace oscicell::cli
