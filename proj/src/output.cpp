#include <fstream>
#include <ostream>

#include "savkin/harness.hpp"

namespace savkin {

namespace {

void write_echo(std::ostream& out, const RunConfig& cfg) {
  for (const auto& [k, v] : cfg.echo()) out << "# " << k << '=' << v << '\n';
}

void write_failure(std::ostream& out, const Failure& f) {
  std::string message = f.message;
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  out << "# failure step=" << f.step << " t=" << format_number(f.t) << " kind=" << to_string(f.kind)
      << " message=" << message << '\n';
}

std::string slope_text(const std::optional<double>& slope) {
  return slope ? format_number(*slope) : "nan";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write to " + path.string() + " failed");
}

std::filesystem::path prepare_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
  return cfg.output_dir;
}

std::string stem(const RunConfig& cfg) {
  return std::string(to_string(cfg.equation)) + "_" + std::string(to_string(cfg.scheme));
}

}  // namespace

void write_evolve_csv(std::ostream& out, const RunConfig& cfg, const EvolveResult& result) {
  write_echo(out, cfg);
  out << kEvolveHeader << '\n';
  for (const auto& r : result.reports) {
    out << r.step << ',' << format_number(r.t) << ',' << format_number(r.mass) << ','
        << format_number(r.momentum[0]) << ',' << format_number(r.momentum[1]) << ','
        << format_number(r.energy) << ',' << format_number(r.entropy) << ','
        << format_number(r.modified_entropy) << ',' << format_number(r.r) << ','
        << format_number(r.min_f) << ',' << format_number(r.production) << ','
        << format_number(r.xi) << ',' << format_number(r.lambda_sum) << ',' << r.clipped << ','
        << (r.corrected ? 1 : 0) << '\n';
  }
  if (result.failure) {
    write_failure(out, *result.failure);
  } else {
    const long last = result.reports.empty() ? 0 : result.reports.back().step;
    out << "# completed steps=" << last << '\n';
  }
}

void write_converge_csv(std::ostream& out, const RunConfig& cfg, const ConvergenceTable& table) {
  write_echo(out, cfg);
  out << kConvergeHeader << '\n';
  const auto slope = slope_text(table.slope);
  for (const auto& row : table.rows) {
    if (row.failure) continue;
    out << format_number(row.dt) << ',' << format_number(row.error) << ',' << slope << '\n';
  }
  for (const auto& row : table.rows) {
    if (!row.failure) continue;
    out << "# dt=" << format_number(row.dt) << '\n';
    write_failure(out, *row.failure);
  }
  if (!table.slope) out << "# slope unavailable: fewer than three successful rows\n";
}

void write_beta_summary_csv(std::ostream& out, const RunConfig& cfg, const BetaStudy& study) {
  write_echo(out, cfg);
  out << "# beta_bound=" << format_number(study.bound.beta) << " r0=" << format_number(study.bound.r0)
      << " sqrt_h_min=" << format_number(study.bound.sqrt_h_min)
      << " max_loss=" << format_number(study.bound.max_loss) << '\n';
  out << "beta,slope,fixed_dt,fixed_error,beta_ok\n";
  for (const auto& row : study.rows) {
    out << format_number(row.beta) << ',' << slope_text(row.convergence.slope) << ','
        << format_number(study.fixed_dt) << ',' << format_number(row.fixed_error) << ','
        << (row.beta_ok ? 1 : 0) << '\n';
    if (!row.beta_ok) {
      out << "# warning beta=" << format_number(row.beta)
          << " fell below the per-step stabilization check\n";
    }
  }
}

OutputFiles write_outputs(const RunConfig& cfg, const EvolveResult& result) {
  const auto dir = prepare_dir(cfg);
  OutputFiles files;
  const auto path = dir / ("evolve_" + stem(cfg) + ".csv");
  auto out = open_output(path);
  write_evolve_csv(out, cfg, result);
  close_output(out, path);
  files.evolve.push_back(path);
  write_plot_script(dir / "plot.py", files);
  return files;
}

OutputFiles write_outputs(const RunConfig& cfg, const ConvergenceTable& table) {
  const auto dir = prepare_dir(cfg);
  OutputFiles files;
  const auto path = dir / ("converge_" + stem(cfg) + ".csv");
  auto out = open_output(path);
  write_converge_csv(out, cfg, table);
  close_output(out, path);
  files.converge.push_back(path);
  write_plot_script(dir / "plot.py", files);
  return files;
}

OutputFiles write_outputs(const RunConfig& cfg, const BetaStudy& study) {
  const auto dir = prepare_dir(cfg);
  OutputFiles files;
  for (const auto& row : study.rows) {
    RunConfig c = cfg;
    c.scheme = SchemeTag::sav1_pb;
    c.beta = row.beta;
    const std::string tag = "beta_" + format_number(row.beta);
    const auto conv = dir / (tag + "_converge.csv");
    auto out = open_output(conv);
    write_converge_csv(out, c, row.convergence);
    close_output(out, conv);
    files.converge.push_back(conv);

    c.dt = study.fixed_dt;
    const auto evo = dir / (tag + "_evolve.csv");
    auto out2 = open_output(evo);
    write_evolve_csv(out2, c, row.fixed_run);
    close_output(out2, evo);
    files.evolve.push_back(evo);
  }
  const auto summary = dir / "beta_study.csv";
  auto out = open_output(summary);
  write_beta_summary_csv(out, cfg, study);
  close_output(out, summary);
  write_plot_script(dir / "plot.py", files);
  return files;
}

void write_plot_script(const std::filesystem::path& path, const OutputFiles& files) {
  auto out = open_output(path);
  auto list = [&](const std::vector<std::filesystem::path>& paths) {
    out << '[';
    for (std::size_t i = 0; i < paths.size(); ++i) {
      out << (i ? ", " : "") << '"' << paths[i].filename().string() << '"';
    }
    out << ']';
  };
  out << "#!/usr/bin/env python3\n"
         "import os\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "import pandas as pd\n\n"
         "HERE = os.path.dirname(os.path.abspath(__file__))\n"
         "CONVERGE = ";
  list(files.converge);
  out << "\nEVOLVE = ";
  list(files.evolve);
  out << "\n\n"
         "def load(name):\n"
         "    return pd.read_csv(os.path.join(HERE, name), comment=\"#\")\n\n"
         "if CONVERGE:\n"
         "    fig, ax = plt.subplots()\n"
         "    for name in CONVERGE:\n"
         "        d = load(name)\n"
         "        if len(d):\n"
         "            ax.loglog(d[\"dt\"], d[\"error\"], \"o-\", label=f\"{name} (slope {d['slope'].iloc[0]:.2f})\")\n"
         "    ax.set_xlabel(\"dt\")\n"
         "    ax.set_ylabel(\"max-norm error\")\n"
         "    ax.legend()\n"
         "    fig.savefig(os.path.join(HERE, \"convergence.png\"), dpi=150)\n\n"
         "if EVOLVE:\n"
         "    fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))\n"
         "    for name in EVOLVE:\n"
         "        d = load(name)\n"
         "        a1.plot(d[\"t\"], d[\"entropy\"], label=name)\n"
         "        a2.plot(d[\"t\"], d[\"modified_entropy\"], label=name)\n"
         "    a1.set_xlabel(\"t\")\n"
         "    a1.set_ylabel(\"entropy\")\n"
         "    a2.set_xlabel(\"t\")\n"
         "    a2.set_ylabel(\"modified entropy\")\n"
         "    a1.legend()\n"
         "    fig.savefig(os.path.join(HERE, \"entropy.png\"), dpi=150)\n";
  close_output(out, path);
}

}  // namespace savkin
