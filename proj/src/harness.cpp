#include <cmath>
#include <limits>

#include "savkin/harness.hpp"

namespace savkin {

std::shared_ptr<const CollisionOperator> make_operator(const RunConfig& cfg) {
  const VelocityGrid grid = cfg.grid();
  if (cfg.equation == Equation::boltzmann) {
    const BoltzmannKernel kernel = cfg.boltzmann_kernel();
    QuadratureOrders orders = cfg.quadrature;
    const auto defaults = default_quadrature(grid, kernel);
    if (orders.radial == 0) orders.radial = defaults.radial;
    if (orders.angular == 0) orders.angular = defaults.angular;
    std::shared_ptr<const BoltzmannModes> modes;
    if (cfg.modes_cache && std::filesystem::exists(*cfg.modes_cache)) {
      modes = std::make_shared<const BoltzmannModes>(
          load_boltzmann_modes(*cfg.modes_cache, grid, boltzmann_metadata(grid, kernel, orders)));
    } else {
      modes = std::make_shared<const BoltzmannModes>(precompute_boltzmann_modes(grid, kernel, orders));
      if (cfg.modes_cache) save_modes(*modes, *cfg.modes_cache);
    }
    return std::make_shared<const BoltzmannOperator>(std::move(modes));
  }
  std::shared_ptr<const LandauModes> modes;
  if (cfg.modes_cache && std::filesystem::exists(*cfg.modes_cache)) {
    modes = std::make_shared<const LandauModes>(
        load_landau_modes(*cfg.modes_cache, grid, landau_metadata(grid, cfg.landau)));
  } else {
    modes = std::make_shared<const LandauModes>(precompute_landau_modes(grid, cfg.landau));
    if (cfg.modes_cache) save_modes(*modes, *cfg.modes_cache);
  }
  return std::make_shared<const LandauOperator>(std::move(modes));
}

Density initial_density(const RunConfig& cfg) {
  const VelocityGrid grid = cfg.grid();
  return cfg.initial == InitialCondition::bkw ? bkw(grid, cfg.t0) : bi_maxwellian(grid, cfg.bimax);
}

EvolveResult run_evolve(const RunConfig& cfg, const CollisionOperator& op, const Density& f0,
                        const StepObserver& observer) {
  cfg.validate();
  const SchemeConfig scfg = cfg.scheme_config();
  const long steps = cfg.step_count();
  EvolveResult result;

  SavState state{f0, 0.0, std::nullopt, std::nullopt, 0, cfg.t0};
  try {
    state = init_state(f0, scfg, cfg.t0);
  } catch (const Error& e) {
    result.failure = Failure{0, cfg.t0, e.kind(), e.what()};
    return result;
  }
  result.reports.push_back(describe_state(state, scfg));

  for (long k = 1; k <= steps; ++k) {
    std::optional<StepOutcome> next;
    try {
      next = advance(state, op, scfg);
    } catch (const Error& e) {
      result.failure = Failure{k, state.t, e.kind(), e.what()};
      break;
    }
    StepOutcome& out = *next;
    // Times are recomputed from the step index so that they do not drift.
    out.state.t = cfg.t0 + static_cast<double>(k) * cfg.dt;
    out.report.t = out.state.t;
    if (observer) observer(out.report, out.state);
    if (k % cfg.cadence == 0 || k == steps) result.reports.push_back(out.report);
    state = std::move(out.state);
  }
  result.final_state = std::move(state.f);
  return result;
}

EvolveResult run_evolve(const RunConfig& cfg) {
  cfg.validate();
  const auto op = make_operator(cfg);
  return run_evolve(cfg, *op, initial_density(cfg));
}

std::optional<double> fit_slope(const std::vector<ConvergenceRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.failure || !(row.error > 0.0) || !std::isfinite(row.error)) continue;
    const double x = std::log(row.dt), y = std::log(row.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) return std::nullopt;
  const double denom = count * sxx - sx * sx;
  if (!(denom > 0.0)) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

ConvergenceTable run_converge(const RunConfig& cfg, const CollisionOperator& op, const Density& f0,
                              const std::vector<double>& dts, const ExactSolution& exact,
                              const StepObserver& observer) {
  if (dts.size() < 3) throw Error(ErrorKind::invalid_argument, "a convergence study needs three dt values");
  ConvergenceTable table;
  const Density reference = exact(cfg.t_end);
  for (double dt : dts) {
    RunConfig c = cfg;
    c.dt = dt;
    ConvergenceRow row;
    row.dt = dt;
    row.run = run_evolve(c, op, f0, observer);
    if (row.run.failure) {
      row.failure = row.run.failure;
      row.error = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.error = max_norm_error(*row.run.final_state, reference);
    }
    table.rows.push_back(std::move(row));
  }
  table.slope = fit_slope(table.rows);
  return table;
}

namespace {

void require_bkw(const RunConfig& cfg) {
  if (cfg.initial != InitialCondition::bkw) {
    throw Error(ErrorKind::invalid_argument, "error studies need BKW data with its exact solution");
  }
}

}  // namespace

ConvergenceTable run_converge(const RunConfig& cfg, const std::vector<double>& dts) {
  require_bkw(cfg);
  cfg.validate();
  const auto op = make_operator(cfg);
  const VelocityGrid grid = op->grid();
  return run_converge(cfg, *op, initial_density(cfg), dts, [&](double t) { return bkw(grid, t); });
}

BetaStudy run_beta_study(const RunConfig& cfg, const CollisionOperator& op,
                         const std::vector<double>& betas, const std::vector<double>& dts,
                         double fixed_dt) {
  if (cfg.equation != Equation::boltzmann || !op.has_split()) {
    throw Error(ErrorKind::invalid_argument, "the beta study runs the Boltzmann gain/loss scheme");
  }
  require_bkw(cfg);
  const Density f0 = initial_density(cfg);
  const VelocityGrid grid = f0.grid;
  const ExactSolution exact = [&](double t) { return bkw(grid, t); };

  BetaStudy study;
  study.bound = pb_beta_lower_bound(f0, op, cfg.entropy_offset);
  study.fixed_dt = fixed_dt;
  for (double beta : betas) {
    RunConfig c = cfg;
    c.scheme = SchemeTag::sav1_pb;
    c.beta = beta;
    BetaRow row;
    row.beta = beta;
    const StepObserver watch = [&row](const StepReport& rep, const SavState&) {
      row.beta_ok = row.beta_ok && rep.beta_ok;
    };
    row.convergence = run_converge(c, op, f0, dts, exact, watch);
    c.dt = fixed_dt;
    row.fixed_run = run_evolve(c, op, f0, watch);
    row.fixed_error = row.fixed_run.failure
                          ? std::numeric_limits<double>::quiet_NaN()
                          : max_norm_error(*row.fixed_run.final_state, exact(c.t_end));
    study.rows.push_back(std::move(row));
  }
  return study;
}

}  // namespace savkin
