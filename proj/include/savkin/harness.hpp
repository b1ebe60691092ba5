#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "savkin/collision.hpp"
#include "savkin/reference.hpp"
#include "savkin/schemes.hpp"

namespace savkin {

enum class Equation { boltzmann, landau };
enum class InitialCondition { bkw, bimax };

std::string_view to_string(Equation e);
std::string_view to_string(InitialCondition ic);

// Seventeen significant digits ("%.17g"), enough to round-trip a double.
std::string format_number(double x);

struct RunConfig {
  Equation equation = Equation::boltzmann;
  SchemeTag scheme = SchemeTag::sav1;
  int n = 32;
  double s = 3.3;  // domain scale; the half-width follows from the equation
  double dt = 0.01;
  double t0 = 0.5;
  double t_end = 0.6;
  double entropy_offset = 10.0;
  double eps = 1e-16;
  std::optional<double> beta;
  double negativity_tolerance = 1e-12;
  MultiplierOptions multiplier;

  BoltzmannKernel boltzmann;  // radius 0 means 2S
  QuadratureOrders quadrature;  // zeros select the grid-dependent defaults
  LandauKernel landau;

  InitialCondition initial = InitialCondition::bkw;
  BiMaxwellianParams bimax;

  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> modes_cache;
  int cadence = 1;

  // (3 sqrt 2 + 1) S / 2 for Boltzmann and 2S for Landau.
  double half_width() const;
  double radius() const;
  VelocityGrid grid() const;
  BoltzmannKernel boltzmann_kernel() const;
  SchemeConfig scheme_config() const;
  long step_count() const;
  void validate() const;

  // Resolved key=value pairs, including derived quantities.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Applies one "key=value" assignment. Unknown keys are rejected.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Flat key=value text; '#' starts a comment and "[section]" lines are ignored.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path);

std::shared_ptr<const CollisionOperator> make_operator(const RunConfig& cfg);
Density initial_density(const RunConfig& cfg);

struct Failure {
  long step = 0;
  double t = 0.0;
  ErrorKind kind = ErrorKind::invalid_argument;
  std::string message;
};

struct EvolveResult {
  std::vector<StepReport> reports;
  std::optional<Density> final_state;
  std::optional<Failure> failure;
};

// Called after every step with the step's report, whatever the cadence.
using StepObserver = std::function<void(const StepReport&, const SavState&)>;

EvolveResult run_evolve(const RunConfig& cfg, const CollisionOperator& op, const Density& f0,
                        const StepObserver& observer = {});
EvolveResult run_evolve(const RunConfig& cfg);

struct ConvergenceRow {
  double dt = 0.0;
  double error = 0.0;
  std::optional<Failure> failure;
  EvolveResult run;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::optional<double> slope;  // least squares over successful rows, needs three
};

// Least-squares slope of log(error) against log(dt).
std::optional<double> fit_slope(const std::vector<ConvergenceRow>& rows);

using ExactSolution = std::function<Density(double t)>;

ConvergenceTable run_converge(const RunConfig& cfg, const CollisionOperator& op, const Density& f0,
                              const std::vector<double>& dts, const ExactSolution& exact,
                              const StepObserver& observer = {});
// BKW data with the BKW solution at t_end as the reference.
ConvergenceTable run_converge(const RunConfig& cfg, const std::vector<double>& dts);

struct BetaRow {
  double beta = 0.0;
  ConvergenceTable convergence;
  EvolveResult fixed_run;
  double fixed_error = 0.0;
  bool beta_ok = true;  // advisory check held on every step of every run
};

struct BetaStudy {
  BetaBound bound;
  double fixed_dt = 0.0;
  std::vector<BetaRow> rows;
};

BetaStudy run_beta_study(const RunConfig& cfg, const CollisionOperator& op,
                         const std::vector<double>& betas, const std::vector<double>& dts,
                         double fixed_dt);

// CSV writers. Numbers use 17 significant digits; comment lines start with '#'.
inline constexpr const char* kEvolveHeader =
    "step,t,mass,mom_x,mom_y,energy,entropy,modified_entropy,r,min_f,D,xi,lambda_sum,clipped,"
    "corrected";
inline constexpr const char* kConvergeHeader = "dt,error,slope";

void write_evolve_csv(std::ostream& out, const RunConfig& cfg, const EvolveResult& result);
void write_converge_csv(std::ostream& out, const RunConfig& cfg, const ConvergenceTable& table);
void write_beta_summary_csv(std::ostream& out, const RunConfig& cfg, const BetaStudy& study);

struct OutputFiles {
  std::vector<std::filesystem::path> evolve;
  std::vector<std::filesystem::path> converge;
};

OutputFiles write_outputs(const RunConfig& cfg, const EvolveResult& result);
OutputFiles write_outputs(const RunConfig& cfg, const ConvergenceTable& table);
OutputFiles write_outputs(const RunConfig& cfg, const BetaStudy& study);

// Generic matplotlib script: log-log for convergence tables, linear time
// axes for evolution series.
void write_plot_script(const std::filesystem::path& path, const OutputFiles& files);

}  // namespace savkin
