#include "disg/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "disg/config.hpp"
#include "disg/equilibrium.hpp"
#include "disg/io.hpp"
#include "disg/sim.hpp"
#include "json.hpp"

namespace disg {

namespace {

void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
  nlohmann::json j;
  j["error"] = code;
  j["message"] = message;
  err << j.dump() << "\n";
}

MarkovModel with_bsc(const MarkovModel& base, double p1, double p2) {
  return MarkovModel::binary_symmetric(base.transition, p1, p2);
}

double bsc_accuracy(const Matrix& channel) { return channel(0, 0); }

std::string sweep_label(const ExperimentConfig::SweepEntry& entry, const MarkovModel& model) {
  if (!entry.label.empty()) return entry.label;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "c=%g p1=%g p2=%g", entry.cost,
                entry.p1.value_or(bsc_accuracy(model.channels[0])),
                entry.p2.value_or(bsc_accuracy(model.channels[1])));
  return buf;
}

struct CommandContext {
  ExperimentConfig config;
  std::filesystem::path out_dir;
};

int cmd_validate(const CommandContext& ctx, std::ostream& out, std::ostream& err) {
  const ValidationReport report = validate_model(ctx.config.model);
  if (report.ok()) {
    out << "validate: ok\n";
    return 0;
  }
  for (const ValidationIssue& issue : report.issues) {
    out << "validate: " << to_string(issue.code) << " at " << issue.where << ": " << issue.message
        << "\n";
  }
  emit_error(err, to_string(report.issues.front().code),
             report.issues.front().where + ": " + report.issues.front().message);
  return 1;
}

int cmd_solve(const CommandContext& ctx, std::ostream& out, std::ostream& err) {
  require_valid(ctx.config.model);
  GridPtr grid = build_grid(ctx.config.model.num_states, ctx.config.grid_resolution);
  const ItraReport report = itra(ctx.config.model, ctx.config.params, grid, ctx.config.itra.k);
  write_region_csv(ctx.out_dir / "region.csv", report.region);
  std::ofstream(ctx.out_dir / "itra_report.json") << itra_report_to_json(report);
  out << "solve: region size " << report.region.count() << " of " << grid->size()
      << (report.halted_fixed_point ? " (fixed point)" : "") << "\n";
  if (report.tainted) {
    emit_error(err, "NotConverged", "ItRA iterate tainted by a non-converged solve");
    return 2;
  }
  return 0;
}

int cmd_bound(const CommandContext& ctx, std::ostream& out, std::ostream&) {
  require_valid(ctx.config.model);
  GridPtr grid = build_grid(ctx.config.model.num_states, ctx.config.grid_resolution);
  const double epsilon_tilde =
      ctx.config.bound ? ctx.config.bound->epsilon_tilde : ctx.config.params.delta;
  const AbsorbingReport report =
      absorbing_box(ctx.config.model, ctx.config.params, grid, epsilon_tilde);
  std::ofstream(ctx.out_dir / "absorbing_report.json") << absorbing_report_to_json(report);
  out << "bound: r_inf " << report.r_inf << (report.is_positive ? " (positive)" : "") << "\n";
  return 0;
}

int cmd_simulate(const CommandContext& ctx, std::ostream& out, std::ostream& err) {
  require_valid(ctx.config.model);
  if (!ctx.config.simulate) {
    throw DisgError(ErrorCode::ConfigError, "simulate command needs a 'simulate' config block");
  }
  GridPtr grid = build_grid(ctx.config.model.num_states, ctx.config.grid_resolution);
  const ItraReport solved = itra(ctx.config.model, ctx.config.params, grid, ctx.config.itra.k);
  const auto& sim = *ctx.config.simulate;
  const TrajectoryRecord record =
      simulate(ctx.config.model, solved.region, solved.region, ctx.config.params,
               Belief(sim.prior), sim.horizon, sim.seed);
  write_trajectory_csv(ctx.out_dir / "trajectory.csv", record);
  out << "simulate: " << record.steps.size() << " steps under profile " << record.profile << "\n";
  if (solved.tainted) {
    emit_error(err, "NotConverged", "ItRA iterate tainted by a non-converged solve");
    return 2;
  }
  return 0;
}

int cmd_finite_check(const CommandContext& ctx, std::ostream& out, std::ostream&) {
  require_valid(ctx.config.model);
  if (!ctx.config.finite_check) {
    throw DisgError(ErrorCode::ConfigError, "finite-check command needs a 'finite_check' block");
  }
  const auto& fc = *ctx.config.finite_check;
  const BruteforceVerdict verdict =
      finite_horizon_bruteforce(ctx.config.model, ctx.config.params, Belief(fc.prior), fc.horizon);
  std::ofstream(ctx.out_dir / "finite_check_verdict.json") << bruteforce_verdict_to_json(verdict);
  out << "finite-check: all-defect nash=" << (verdict.all_defect_is_nash ? "yes" : "no")
      << ", sharing profiles rejected=" << (verdict.no_sharing_profile_is_nash ? "yes" : "no")
      << "\n";
  return 0;
}

int cmd_sweep(const CommandContext& ctx, std::ostream& out, std::ostream& err) {
  require_valid(ctx.config.model);
  if (ctx.config.sweep.empty()) {
    throw DisgError(ErrorCode::ConfigError, "sweep command needs sweep entries");
  }
  GridPtr grid = build_grid(ctx.config.model.num_states, ctx.config.grid_resolution);
  std::vector<std::pair<std::string, Region>> regions;
  nlohmann::json entries = nlohmann::json::array();
  bool tainted = false;
  for (const auto& entry : ctx.config.sweep) {
    MarkovModel model = ctx.config.model;
    if (entry.p1 || entry.p2) {
      model = with_bsc(model, entry.p1.value_or(bsc_accuracy(model.channels[0])),
                       entry.p2.value_or(bsc_accuracy(model.channels[1])));
    }
    GameParams params = ctx.config.params;
    params.cost = {entry.cost, entry.cost};
    const ItraReport report = itra(model, params, grid, ctx.config.itra.k);
    const std::string label = sweep_label(entry, ctx.config.model);
    regions.emplace_back(label, report.region);
    tainted = tainted || report.tainted;
    nlohmann::json e;
    e["label"] = label;
    e["cost"] = entry.cost;
    e["region_size"] = report.region.count();
    e["halted_fixed_point"] = report.halted_fixed_point;
    e["tainted"] = report.tainted;
    entries.push_back(e);
  }
  std::ofstream(ctx.out_dir / "sweep_regions.csv") << regions_to_stacked_csv(regions);
  nlohmann::json j;
  j["entries"] = entries;
  std::ofstream(ctx.out_dir / "sweep_report.json") << j.dump(2) << "\n";
  out << "sweep: " << regions.size() << " regions written\n";
  if (tainted) {
    emit_error(err, "NotConverged", "a sweep entry was tainted by a non-converged solve");
    return 2;
  }
  return 0;
}

int cmd_plot(const CommandContext& ctx, std::ostream& out, std::ostream&) {
  GridPtr grid = build_grid(ctx.config.model.num_states, ctx.config.grid_resolution);
  std::vector<std::pair<std::string, Region>> regions;
  const auto stacked = ctx.out_dir / "sweep_regions.csv";
  const auto single = ctx.out_dir / "region.csv";
  if (std::filesystem::exists(stacked)) {
    std::ifstream in(stacked, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    regions = parse_stacked_region_csv(buffer.str(), grid);
  } else if (std::filesystem::exists(single)) {
    regions.emplace_back("region", read_region_csv(single, grid));
  } else {
    throw DisgError(ErrorCode::ConfigError,
                    "plot needs region.csv or sweep_regions.csv in the output directory");
  }
  std::ofstream(ctx.out_dir / "regions.svg") << emit_region_plot(regions);
  out << "plot: regions.svg with " << regions.size() << " bands\n";
  return 0;
}

}  // namespace

int run_command(const std::string& command, const RunOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    CommandContext ctx;
    ctx.config = load_config(options.config_path);
    if (options.grid_override) ctx.config.grid_resolution = *options.grid_override;
    if (options.seed_override && ctx.config.simulate) {
      ctx.config.simulate->seed = *options.seed_override;
    }
    ctx.out_dir = options.out_dir;
    std::filesystem::create_directories(ctx.out_dir);

    if (command == "validate") return cmd_validate(ctx, out, err);
    if (command == "solve") return cmd_solve(ctx, out, err);
    if (command == "bound") return cmd_bound(ctx, out, err);
    if (command == "simulate") return cmd_simulate(ctx, out, err);
    if (command == "finite-check") return cmd_finite_check(ctx, out, err);
    if (command == "sweep") return cmd_sweep(ctx, out, err);
    if (command == "plot") return cmd_plot(ctx, out, err);
    throw DisgError(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  } catch (const DisgError& e) {
    emit_error(err, to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace disg
