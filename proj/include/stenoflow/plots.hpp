#pragma once
// gnuplot-ready data and scripts, one per figure panel, from a run or sweep
// output directory.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"

namespace stenoflow {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PanelSource { Profile, TimeSeries, Axial, Resistance };

struct PanelSpec {
  const char* id;
  PanelSource source;
  const char* column;  // y column (x is implied by the source)
  const char* family;  // parameter distinguishing the overlaid curves
  const char* xlabel;
  const char* ylabel;
};

inline const std::vector<PanelSpec>& panel_specs() {
  using S = PanelSource;
  static const std::vector<PanelSpec> specs = {
      {"fig2a", S::Profile, "u", "H", "ξ", "u"},
      {"fig2b", S::Profile, "u", "K", "ξ", "u"},
      {"fig2c", S::Profile, "u", "a0", "ξ", "u"},
      {"fig3a", S::Profile, "w", "K", "ξ", "w"},
      {"fig3b", S::Profile, "w", "m", "ξ", "w"},
      {"fig3c", S::Profile, "w", "delta", "ξ", "w"},
      {"fig4a", S::Profile, "theta", "Pr", "ξ", "θ"},
      {"fig4b", S::Axial, "Nu", "Pr", "z", "Nu"},
      {"fig5a", S::Axial, "tau_w", "delta", "z", "τ_w"},
      {"fig5b", S::TimeSeries, "tau_w", "H", "T", "τ_w"},
      {"fig5c", S::TimeSeries, "tau_w", "a0", "T", "τ_w"},
      {"fig5d", S::TimeSeries, "tau_w", "K", "T", "τ_w"},
      {"fig6a", S::TimeSeries, "Q", "H", "T", "Q"},
      {"fig6b", S::TimeSeries, "Q", "K", "T", "Q"},
      {"fig6c", S::TimeSeries, "Q", "a0", "T", "Q"},
      {"fig7a", S::Profile, "F", "a0", "ξ", "F"},
      {"fig7b", S::Profile, "F", "H", "ξ", "F"},
      {"fig8a", S::Resistance, "lambda_cycle", "a0", "δ", "λ"},
      {"fig8b", S::Resistance, "lambda_cycle", "H", "δ", "λ"},
      {"fig8c", S::Resistance, "lambda_cycle", "K", "δ", "λ"},
  };
  return specs;
}

namespace detail {

struct RunDir {
  std::filesystem::path path;
  RunConfig config;
  std::string label;  // swept values, empty for a single run
};

inline RunConfig read_resolved(const std::filesystem::path& dir) {
  std::ifstream in(dir / "config.resolved", std::ios::binary);
  if (!in) throw PlotError((dir / "config.resolved").string() + ": not found");
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  c.sweep.clear();
  return c;
}

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Series {
  std::string title;
  std::vector<std::pair<double, double>> points;
};

inline std::vector<Series> panel_series(const PanelSpec& spec, const std::vector<RunDir>& runs) {
  std::vector<Series> out;
  if (spec.source == PanelSource::Resistance) {
    // lambda against delta, grouped by the family parameter.
    std::map<double, Series> groups;
    for (const auto& r : runs) {
      const auto t = csv::read((r.path / "summary.csv").string());
      if (t.rows.empty()) throw PlotError(t.path + ": no rows");
      const double lam = t.number(t.rows.size() - 1, spec.column);
      const double fam = get_key(r.config, spec.family);
      auto& g = groups[fam];
      g.title = std::string(spec.family) + "=" + short_num(fam);
      g.points.emplace_back(r.config.params.shape.delta, lam);
    }
    for (auto& [k, g] : groups) {
      std::sort(g.points.begin(), g.points.end());
      out.push_back(std::move(g));
    }
    return out;
  }

  for (const auto& r : runs) {
    Series s;
    s.title = r.label.empty()
                  ? std::string(spec.family) + "=" + short_num(get_key(r.config, spec.family))
                  : r.label;
    if (spec.source == PanelSource::Profile) {
      const auto t = csv::read((r.path / "profiles.csv").string());
      const auto cy = t.column("cycle"), ph = t.column("phase"), xi = t.column("xi"),
                 y = t.column(spec.column);
      for (const auto& row : t.rows)
        if (row[cy] == "1" && std::stod(row[ph]) == 0.0)
          s.points.emplace_back(std::stod(row[xi]), std::stod(row[y]));
    } else {
      const char* file = spec.source == PanelSource::Axial ? "axial.csv" : "timeseries.csv";
      const char* xcol = spec.source == PanelSource::Axial ? "z" : "T";
      const auto t = csv::read((r.path / file).string());
      const auto x = t.column(xcol), y = t.column(spec.column);
      for (const auto& row : t.rows) s.points.emplace_back(std::stod(row[x]), std::stod(row[y]));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<RunDir> discover_runs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<RunDir> runs;
  const fs::path summary = dir / "sweep_summary.csv";
  if (fs::exists(summary) && !fs::exists(dir / "profiles.csv")) {
    const auto t = csv::read(summary.string());
    const auto status = t.column("status"), sub = t.column("dir");
    // Swept keys sit between "status" and "Q_mean".
    const auto first = status + 1, last = t.column("Q_mean");
    for (const auto& row : t.rows) {
      if (row[status] != "ok") continue;
      RunDir r{dir / row[sub], read_resolved(dir / row[sub]), {}};
      for (auto k = first; k < last; ++k) {
        if (!r.label.empty()) r.label += " ";
        r.label += t.header[k] + "=" + short_num(std::stod(row[k]));
      }
      runs.push_back(std::move(r));
    }
  } else {
    runs.push_back({dir, read_resolved(dir), {}});
  }
  if (runs.empty()) throw PlotError(dir.string() + ": no successful runs to plot");
  return runs;
}

}  // namespace detail

/// Writes <panel>.dat and <panel>.gp for every panel into `<dir>/plots`.
/// Returns the script paths. Output is a pure function of the CSV inputs.
inline std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto runs = detail::discover_runs(dir);
  const fs::path out = dir / "plots";
  fs::create_directories(out);
  std::vector<fs::path> scripts;
  for (const auto& spec : panel_specs()) {
    const auto series = detail::panel_series(spec, runs);
    const std::string dat_name = std::string(spec.id) + ".dat";
    {
      std::ofstream dat(out / dat_name, std::ios::binary);
      for (std::size_t s = 0; s < series.size(); ++s) {
        if (s) dat << "\n\n";
        dat << "# " << series[s].title << "\n";
        for (const auto& [x, y] : series[s].points) dat << csv::format(x) << ' ' << csv::format(y) << '\n';
      }
    }
    const fs::path gp = out / (std::string(spec.id) + ".gp");
    std::ofstream g(gp, std::ios::binary);
    g << "set terminal pngcairo enhanced size 800,600\n"
      << "set output '" << spec.id << ".png'\n"
      << "set xlabel '" << spec.xlabel << "'\n"
      << "set ylabel '" << spec.ylabel << "'\n"
      << "set key best\n"
      << "plot ";
    const char* style = spec.source == PanelSource::Resistance ? "linespoints" : "lines";
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (s) g << ", \\\n     ";
      g << "'" << dat_name << "' index " << s << " with " << style << " title '"
        << series[s].title << "'";
    }
    g << "\n";
    scripts.push_back(gp);
  }
  return scripts;
}

}  // namespace stenoflow
