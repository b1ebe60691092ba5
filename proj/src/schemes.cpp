#include "savkin/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "savkin/reference.hpp"

namespace savkin {

std::string_view to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::sav1: return "sav1";
    case SchemeTag::sav2_bdf: return "sav2-bdf";
    case SchemeTag::sav2_cn: return "sav2-cn";
    case SchemeTag::sav1_pb: return "sav1-pb";
    case SchemeTag::sav1_l: return "sav1-l";
    case SchemeTag::sav2_l: return "sav2-l";
    case SchemeTag::sav1_lm: return "sav1-lm";
    case SchemeTag::sav2_lm: return "sav2-lm";
  }
  return "unknown";
}

SchemeTag parse_scheme(std::string_view name) {
  for (auto tag : {SchemeTag::sav1, SchemeTag::sav2_bdf, SchemeTag::sav2_cn, SchemeTag::sav1_pb,
                   SchemeTag::sav1_l, SchemeTag::sav2_l, SchemeTag::sav1_lm, SchemeTag::sav2_lm}) {
    if (name == to_string(tag)) return tag;
  }
  if (name == "sav2") return SchemeTag::sav2_bdf;
  throw Error(ErrorKind::invalid_argument, "unknown scheme '" + std::string(name) + "'");
}

bool is_second_order(SchemeTag tag) {
  return tag == SchemeTag::sav2_bdf || tag == SchemeTag::sav2_cn || tag == SchemeTag::sav2_l ||
         tag == SchemeTag::sav2_lm;
}

SchemeTag startup_scheme(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::sav2_bdf:
    case SchemeTag::sav2_cn: return SchemeTag::sav1;
    case SchemeTag::sav2_l: return SchemeTag::sav1_l;
    case SchemeTag::sav2_lm: return SchemeTag::sav1_lm;
    default: return tag;
  }
}

bool uses_two_level_entropy(SchemeTag tag) {
  return tag == SchemeTag::sav2_bdf || tag == SchemeTag::sav2_l || tag == SchemeTag::sav2_lm;
}

bool projects_onto_cone(SchemeTag tag) {
  return tag == SchemeTag::sav1_l || tag == SchemeTag::sav2_l || restores_mass(tag);
}

bool restores_mass(SchemeTag tag) { return tag == SchemeTag::sav1_lm || tag == SchemeTag::sav2_lm; }

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "eps must be positive");
  if (!(negativity_tolerance >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "negativity tolerance must be nonnegative");
  }
  if (beta && !(*beta >= 0.0)) throw Error(ErrorKind::invalid_argument, "beta must be nonnegative");
  if (scheme == SchemeTag::sav1_pb && !beta) {
    throw Error(ErrorKind::invalid_argument, "sav1-pb needs a stabilization constant beta");
  }
  if (!(multiplier.tolerance > 0.0) || multiplier.max_iterations < 1) {
    throw Error(ErrorKind::invalid_argument, "invalid secant options");
  }
}

double scheme_entropy(const Density& f, double offset, double eps) {
  double sum = 0.0;
  for (double x : f.values) sum += x * std::log(std::max(x, eps));
  return f.grid.cell_area() * sum + offset;
}

namespace {

double min_value(const Density& f) { return *std::min_element(f.values.begin(), f.values.end()); }

std::string format_min(double m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", m);
  return buf;
}

void require_positive(const Density& f, const SchemeConfig& cfg, const char* what) {
  const double m = min_value(f);
  const double top = *std::max_element(f.values.begin(), f.values.end());
  const bool bad = cfg.negativity_tolerance > 0.0 ? !(m >= -cfg.negativity_tolerance * top) : !(m > 0.0);
  if (bad) {
    throw Error(ErrorKind::non_positive_density,
                std::string(what) + " has minimum " + format_min(m));
  }
}

double positive_entropy(const Density& f, const SchemeConfig& cfg) {
  const double h = scheme_entropy(f, cfg.entropy_offset, cfg.eps);
  if (!(h > 0.0)) {
    throw Error(ErrorKind::non_positive_modified_entropy,
                "entropy plus offset is " + std::to_string(h));
  }
  return h;
}

double production(const Density& q, const Density& f, double eps) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += q.values[i] * std::log(std::max(f.values[i], eps));
  return f.grid.cell_area() * sum;
}

void require_history(const SavState& s) {
  if (!s.f_prev || !s.r_prev) {
    throw Error(ErrorKind::missing_history, "two-level step needs the previous level");
  }
}

void fill_diagnostics(StepReport& rep, const SavState& s, const SchemeConfig& cfg) {
  rep.step = s.step;
  rep.t = s.t;
  rep.mass = integrate(s.f);
  rep.momentum = momentum(s.f);
  rep.energy = kinetic_energy(s.f);
  rep.entropy = scheme_entropy(s.f, cfg.entropy_offset, cfg.eps);
  rep.r = s.r;
  rep.min_f = min_value(s.f);
  rep.modified_entropy =
      uses_two_level_entropy(cfg.scheme) && s.r_prev ? modified_entropy(s, cfg.scheme) : s.r * s.r;
}

// Prediction of one step before any correction.
struct Prediction {
  Density f;
  double r = 0.0;
  double dt_eff = 0.0;
  StepReport rep;
};

Prediction predict_first_order(const SavState& s, const CollisionOperator& op,
                               const SchemeConfig& cfg, bool check_sign) {
  require_same_grid(s.f.grid, op.grid());
  if (check_sign) require_positive(s.f, cfg, "f^n");
  const double h = positive_entropy(s.f, cfg);
  const Density q = op.apply(s.f);
  const double d = production(q, s.f, cfg.eps);
  const double denom = 1.0 - cfg.dt * d / (2.0 * h);
  if (!(denom > 0.0)) throw Error(ErrorKind::degenerate, "r-update denominator is not positive");
  Prediction p{Density(s.f.grid), s.r / denom, cfg.dt, {}};
  const double c = cfg.dt * p.r / std::sqrt(h);
  for (std::size_t i = 0; i < q.size(); ++i) p.f.values[i] = s.f.values[i] + c * q.values[i];
  p.rep.production = d;
  p.rep.reference_entropy = h;
  return p;
}

Prediction predict_bdf(const SavState& s, const CollisionOperator& op, const SchemeConfig& cfg,
                       bool positive_extrapolation) {
  require_history(s);
  require_same_grid(s.f.grid, op.grid());
  const Density& prev = *s.f_prev;
  Density star = positive_extrapolation ? extrapolate_positive(s.f, prev) : extrapolate_ab(s.f, prev);
  if (!positive_extrapolation) require_positive(star, cfg, "extrapolated f");
  const double h = positive_entropy(star, cfg);
  const Density q = op.apply(star);
  const double d = production(q, star, cfg.eps);
  const double denom = 3.0 - cfg.dt * d / h;
  if (!(denom > 0.0)) throw Error(ErrorKind::degenerate, "r-update denominator is not positive");
  Prediction p{Density(s.f.grid), (4.0 * s.r - *s.r_prev) / denom, 2.0 * cfg.dt / 3.0, {}};
  const double c = 2.0 * cfg.dt * p.r / std::sqrt(h);
  for (std::size_t i = 0; i < q.size(); ++i) {
    p.f.values[i] = (4.0 * s.f.values[i] - prev.values[i] + c * q.values[i]) / 3.0;
  }
  p.rep.production = d;
  p.rep.reference_entropy = h;
  p.rep.r_older = *s.r_prev;
  return p;
}

StepOutcome finish(const SavState& s, Prediction p, SchemeTag taken, const SchemeConfig& cfg) {
  StepReport rep = p.rep;
  rep.taken = taken;
  rep.dt = cfg.dt;
  rep.r_old = s.r;

  Density next = p.f;
  if (projects_onto_cone(taken)) {
    const double target = integrate(s.f);
    if (restores_mass(taken)) {
      const auto m = solve_mass_multiplier(next, target, p.dt_eff, cfg.eps, cfg.multiplier);
      rep.xi = m.xi;
      for (double& x : next.values) x += p.dt_eff * m.xi;
    }
    auto proj = kkt_project(next, p.dt_eff, cfg.eps);
    for (std::size_t i = 0; i < proj.f.size(); ++i) {
      rep.correction_size = std::max(rep.correction_size, std::abs(proj.f[i] - p.f.values[i]));
    }
    rep.clipped = proj.clipped;
    rep.corrected = proj.clipped > 0;
    for (double l : proj.lambda) rep.lambda_sum += l;
    next.values = std::move(proj.f);
  }

  SavState out{std::move(next), p.r, std::nullopt, std::nullopt, s.step + 1, s.t + cfg.dt};
  if (is_second_order(cfg.scheme)) {
    out.f_prev = s.f;
    out.r_prev = s.r;
  }
  fill_diagnostics(rep, out, cfg);
  return {std::move(out), rep};
}

}  // namespace

SavState init_state(const Density& f0, const SchemeConfig& cfg, double t0) {
  const double h = entropy(f0, cfg.entropy_offset);
  if (!(h > 0.0)) {
    throw Error(ErrorKind::non_positive_modified_entropy,
                "initial entropy plus offset is " + std::to_string(h));
  }
  return SavState{f0, std::sqrt(h), std::nullopt, std::nullopt, 0, t0};
}

StepReport describe_state(const SavState& state, const SchemeConfig& cfg) {
  StepReport rep;
  rep.taken = cfg.scheme;
  rep.dt = cfg.dt;
  rep.r_old = state.r;
  fill_diagnostics(rep, state, cfg);
  return rep;
}

double modified_entropy(const SavState& state, SchemeTag tag) {
  if (!uses_two_level_entropy(tag)) return state.r * state.r;
  if (!state.r_prev) throw Error(ErrorKind::missing_history, "two-level modified entropy needs r^{n-1}");
  const double lead = 2.0 * state.r - *state.r_prev;
  return 0.5 * state.r * state.r + 0.5 * lead * lead;
}

StepOutcome sav1_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg) {
  return finish(state, predict_first_order(state, op, cfg, true), SchemeTag::sav1, cfg);
}

StepOutcome sav1_l_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg) {
  return finish(state, predict_first_order(state, op, cfg, false), SchemeTag::sav1_l, cfg);
}

StepOutcome sav1_lm_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg) {
  return finish(state, predict_first_order(state, op, cfg, false), SchemeTag::sav1_lm, cfg);
}

StepOutcome sav2_bdf_step(const SavState& state, const CollisionOperator& op,
                          const SchemeConfig& cfg) {
  require_positive(state.f, cfg, "f^n");
  return finish(state, predict_bdf(state, op, cfg, false), SchemeTag::sav2_bdf, cfg);
}

StepOutcome sav2_l_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg) {
  return finish(state, predict_bdf(state, op, cfg, true), SchemeTag::sav2_l, cfg);
}

StepOutcome sav2_lm_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg) {
  return finish(state, predict_bdf(state, op, cfg, true), SchemeTag::sav2_lm, cfg);
}

StepOutcome sav2_cn_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg) {
  require_history(state);
  require_same_grid(state.f.grid, op.grid());
  require_positive(state.f, cfg, "f^n");
  const Density& prev = *state.f_prev;
  Density mid(state.f.grid);
  for (std::size_t i = 0; i < mid.size(); ++i) {
    mid.values[i] = 1.5 * state.f.values[i] - 0.5 * prev.values[i];
  }
  require_positive(mid, cfg, "midpoint f");
  const double h = positive_entropy(mid, cfg);
  const Density q = op.apply(mid);
  const double d = production(q, mid, cfg.eps);
  const double c = cfg.dt * d / (4.0 * h);
  if (!(1.0 - c > 0.0)) throw Error(ErrorKind::degenerate, "r-update denominator is not positive");
  Prediction p{Density(state.f.grid), state.r * (1.0 + c) / (1.0 - c), cfg.dt, {}};
  const double w = cfg.dt * (p.r + state.r) / (2.0 * std::sqrt(h));
  for (std::size_t i = 0; i < q.size(); ++i) p.f.values[i] = state.f.values[i] + w * q.values[i];
  p.rep.production = d;
  p.rep.reference_entropy = h;
  p.rep.r_older = *state.r_prev;
  return finish(state, std::move(p), SchemeTag::sav2_cn, cfg);
}

StepOutcome sav1_pb_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg) {
  if (!op.has_split()) {
    throw Error(ErrorKind::operator_without_split, "sav1-pb needs a gain/loss split");
  }
  if (!cfg.beta) throw Error(ErrorKind::invalid_argument, "sav1-pb needs beta");
  require_same_grid(state.f.grid, op.grid());
  if (min_value(state.f) < 0.0) {
    throw Error(ErrorKind::non_positive_density, "f^n has negative entries");
  }
  const double beta = *cfg.beta;
  const double dt = cfg.dt;
  const double h = positive_entropy(state.f, cfg);
  const Density gain = op.gain(state.f);
  const Density loss = op.loss_factor(state.f);
  Density q(state.f.grid);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q.values[i] = gain.values[i] - loss.values[i] * state.f.values[i];
  }
  const double d = production(q, state.f, cfg.eps);
  const double denom = 1.0 - dt * d / (2.0 * h * (1.0 + dt * beta));
  if (!(denom > 0.0)) throw Error(ErrorKind::degenerate, "r-update denominator is not positive");

  Prediction p{Density(state.f.grid), state.r / denom, dt, {}};
  const double c = p.r / std::sqrt(h);
  double max_loss = -std::numeric_limits<double>::infinity();
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double g = gain.values[i];
    if (g < 0.0) {
      g = 0.0;
      ++clamped;
    }
    const double keep = 1.0 + dt * (beta - c * loss.values[i]);
    p.f.values[i] = (dt * c * g + keep * state.f.values[i]) / (1.0 + dt * beta);
    max_loss = std::max(max_loss, loss.values[i]);
  }
  p.rep.production = d;
  p.rep.reference_entropy = h;
  p.rep.beta = beta;
  p.rep.beta_ok = beta >= c * max_loss;
  p.rep.gain_clamped = clamped;
  return finish(state, std::move(p), SchemeTag::sav1_pb, cfg);
}

StepOutcome advance(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg) {
  SchemeTag tag = cfg.scheme;
  if (is_second_order(tag) && !(state.f_prev && state.r_prev)) {
    // Keep cfg.scheme so the new state retains its history.
    switch (startup_scheme(tag)) {
      case SchemeTag::sav1_l: return sav1_l_step(state, op, cfg);
      case SchemeTag::sav1_lm: return sav1_lm_step(state, op, cfg);
      default: return sav1_step(state, op, cfg);
    }
  }
  switch (tag) {
    case SchemeTag::sav1: return sav1_step(state, op, cfg);
    case SchemeTag::sav2_bdf: return sav2_bdf_step(state, op, cfg);
    case SchemeTag::sav2_cn: return sav2_cn_step(state, op, cfg);
    case SchemeTag::sav1_pb: return sav1_pb_step(state, op, cfg);
    case SchemeTag::sav1_l: return sav1_l_step(state, op, cfg);
    case SchemeTag::sav2_l: return sav2_l_step(state, op, cfg);
    case SchemeTag::sav1_lm: return sav1_lm_step(state, op, cfg);
    case SchemeTag::sav2_lm: return sav2_lm_step(state, op, cfg);
  }
  throw Error(ErrorKind::invalid_argument, "unknown scheme");
}

BetaBound pb_beta_lower_bound(const Density& f0, const CollisionOperator& op, double entropy_offset) {
  const MomentSet m = moments(f0);
  BetaBound b;
  b.r0 = std::sqrt(entropy(f0, entropy_offset));
  const double h_min = maxwellian_entropy(m.rho, m.temperature) + entropy_offset;
  if (!(h_min > 0.0)) {
    throw Error(ErrorKind::non_positive_modified_entropy, "equilibrium entropy plus offset is not positive");
  }
  b.sqrt_h_min = std::sqrt(h_min);
  const Density loss = op.loss_factor(f0);
  b.max_loss = *std::max_element(loss.values.begin(), loss.values.end());
  b.beta = b.r0 / b.sqrt_h_min * b.max_loss;
  return b;
}

}  // namespace savkin
