#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "savkin/collision.hpp"
#include "savkin/projection.hpp"

namespace savkin {

enum class SchemeTag { sav1, sav2_bdf, sav2_cn, sav1_pb, sav1_l, sav2_l, sav1_lm, sav2_lm };

std::string_view to_string(SchemeTag tag);
// Accepts the names printed by to_string; "sav2" is an alias of "sav2-bdf".
SchemeTag parse_scheme(std::string_view name);

bool is_second_order(SchemeTag tag);
// Scheme used for the startup step of a two-level scheme.
SchemeTag startup_scheme(SchemeTag tag);
// True for the BDF2 family, whose modified entropy spans two levels.
bool uses_two_level_entropy(SchemeTag tag);
bool projects_onto_cone(SchemeTag tag);
bool restores_mass(SchemeTag tag);

struct SchemeConfig {
  SchemeTag scheme = SchemeTag::sav1;
  double dt = 0.0;
  double entropy_offset = 10.0;
  double eps = 1e-16;
  std::optional<double> beta;
  MultiplierOptions multiplier;
  // Schemes without positivity control reject a density whose minimum lies
  // below -negativity_tolerance * max f, so that roundoff in far tails
  // passes. Zero rejects any nonpositive entry.
  double negativity_tolerance = 1e-12;

  void validate() const;
};

struct SavState {
  Density f;
  double r = 0.0;
  std::optional<Density> f_prev;
  std::optional<double> r_prev;
  long step = 0;
  double t = 0.0;
};

struct StepReport {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  std::array<double, 2> momentum{0.0, 0.0};
  double energy = 0.0;
  double entropy = 0.0;
  double modified_entropy = 0.0;
  double r = 0.0;
  double min_f = 0.0;
  double production = 0.0;  // integral of Q log f at the level that drove the step
  double xi = 0.0;
  double lambda_sum = 0.0;
  std::size_t clipped = 0;
  bool corrected = false;
  double correction_size = 0.0;  // max |f^{n+1} - prediction| over nodes

  // Inputs of the step, kept so that the dissipation law can be audited.
  SchemeTag taken = SchemeTag::sav1;
  double dt = 0.0;
  double r_old = 0.0;
  std::optional<double> r_older;
  double reference_entropy = 0.0;  // H^n, or H at the extrapolated level
  double beta = 0.0;
  bool beta_ok = true;
  std::size_t gain_clamped = 0;
};

struct StepOutcome {
  SavState state;
  StepReport report;
};

// integral of f log(max(f, eps)) plus the offset. Used wherever a scheme
// needs the entropy of an iterate.
double scheme_entropy(const Density& f, double offset, double eps);

SavState init_state(const Density& f0, const SchemeConfig& cfg, double t0 = 0.0);

// Diagnostics of a state without stepping (the row for step 0).
StepReport describe_state(const SavState& state, const SchemeConfig& cfg);

double modified_entropy(const SavState& state, SchemeTag tag);

StepOutcome sav1_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg);
StepOutcome sav2_bdf_step(const SavState& state, const CollisionOperator& op,
                          const SchemeConfig& cfg);
StepOutcome sav2_cn_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg);
StepOutcome sav1_pb_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg);
StepOutcome sav1_l_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg);
StepOutcome sav2_l_step(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg);
StepOutcome sav1_lm_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg);
StepOutcome sav2_lm_step(const SavState& state, const CollisionOperator& op,
                         const SchemeConfig& cfg);

// Dispatches on cfg.scheme. Two-level schemes without history take one step
// of their startup scheme and keep the previous level.
StepOutcome advance(const SavState& state, const CollisionOperator& op, const SchemeConfig& cfg);

// Sufficient stabilization for the gain/loss scheme:
// (r0 / sqrt(H_min)) * max loss_factor(f0), with H_min the entropy of the
// Maxwellian sharing f0's moments.
struct BetaBound {
  double r0 = 0.0;
  double sqrt_h_min = 0.0;
  double max_loss = 0.0;
  double beta = 0.0;
};
BetaBound pb_beta_lower_bound(const Density& f0, const CollisionOperator& op, double entropy_offset);

}  // namespace savkin
