#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>

#include "savkin/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRecordedFailure = 2;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || p != item.data() + item.size()) {
      throw savkin::Error(savkin::ErrorKind::invalid_argument, "bad list entry '" + item + "'");
    }
    out.push_back(x);
  }
  return out;
}

savkin::RunConfig resolve(const std::string& path, const std::vector<std::string>& overrides,
                          const std::string& out_dir) {
  auto cfg = savkin::load_config(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw savkin::Error(savkin::ErrorKind::invalid_argument, "override '" + kv + "' is not key=value");
    }
    savkin::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return cfg;
}

void print_failure(const savkin::Failure& f) {
  std::cerr << "run aborted at step " << f.step << " (t=" << f.t << "): " << f.message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-dissipative SAV integrators for homogeneous kinetic equations"};
  app.require_subcommand(1);

  std::string config, out_dir, dts_text, betas_text, cache_out;
  std::vector<std::string> overrides;
  double fixed_dt = 0.025;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key=value run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override a configuration key (key=value)");
    sub->add_option("--out-dir", out_dir, "directory for CSV files and plot script");
  };

  auto* evolve = app.add_subcommand("evolve", "integrate from t0 to t_end and write the diagnostics series");
  add_common(evolve);
  auto* converge = app.add_subcommand("converge", "error against the BKW solution for a list of time steps");
  add_common(converge);
  converge->add_option("--dts", dts_text, "comma-separated time steps")->required();
  auto* beta = app.add_subcommand("beta-study", "stabilization sweep for the gain/loss scheme");
  add_common(beta);
  beta->add_option("--betas", betas_text, "comma-separated stabilization constants")->required();
  beta->add_option("--dts", dts_text, "comma-separated time steps")->required();
  beta->add_option("--fixed-dt", fixed_dt, "time step of the entropy series");
  auto* cache = app.add_subcommand("modes-cache", "precompute kernel modes and write them to a file");
  add_common(cache);
  cache->add_option("--out", cache_out, "cache file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto cfg = resolve(config, overrides, out_dir);
    if (*evolve) {
      const auto result = savkin::run_evolve(cfg);
      const auto files = savkin::write_outputs(cfg, result);
      std::cout << files.evolve.front().string() << '\n';
      if (result.failure) {
        print_failure(*result.failure);
        return kExitRecordedFailure;
      }
      return kExitOk;
    }
    if (*converge) {
      const auto table = savkin::run_converge(cfg, parse_list(dts_text));
      const auto files = savkin::write_outputs(cfg, table);
      std::cout << files.converge.front().string() << '\n';
      bool failed = false;
      for (const auto& row : table.rows) {
        if (row.failure) {
          print_failure(*row.failure);
          failed = true;
        }
      }
      if (table.slope) std::cout << "slope " << *table.slope << '\n';
      return failed ? kExitRecordedFailure : kExitOk;
    }
    if (*beta) {
      cfg.scheme = savkin::SchemeTag::sav1_pb;
      const auto betas = parse_list(betas_text);
      if (!cfg.beta && !betas.empty()) cfg.beta = betas.front();
      cfg.validate();
      const auto op = savkin::make_operator(cfg);
      const auto study = savkin::run_beta_study(cfg, *op, betas, parse_list(dts_text), fixed_dt);
      savkin::write_outputs(cfg, study);
      bool failed = false;
      for (const auto& row : study.rows) {
        std::cout << "beta " << row.beta << " slope "
                  << (row.convergence.slope ? *row.convergence.slope : std::nan("")) << " error@"
                  << fixed_dt << " " << row.fixed_error << (row.beta_ok ? "" : " (below check)") << '\n';
        for (const auto& r : row.convergence.rows) {
          if (r.failure) {
            print_failure(*r.failure);
            failed = true;
          }
        }
        if (row.fixed_run.failure) {
          print_failure(*row.fixed_run.failure);
          failed = true;
        }
      }
      return failed ? kExitRecordedFailure : kExitOk;
    }
    if (*cache) {
      cfg.modes_cache.reset();
      cfg.validate();
      const auto op = savkin::make_operator(cfg);
      if (const auto* b = dynamic_cast<const savkin::BoltzmannOperator*>(op.get())) {
        savkin::save_modes(b->modes(), cache_out);
      } else if (const auto* l = dynamic_cast<const savkin::LandauOperator*>(op.get())) {
        savkin::save_modes(l->modes(), cache_out);
      }
      std::cout << cache_out << '\n';
      return kExitOk;
    }
  } catch (const savkin::Error& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
