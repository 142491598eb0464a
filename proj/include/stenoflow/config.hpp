#pragma once
// Flat `key = value` run configuration with `#` comments and `sweep.<key>`
// value lists.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "params.hpp"

namespace stenoflow {

struct OutputOptions {
  int cadence = 10;  // time-series sample stride in steps
};

struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

struct RunConfig {
  DimensionlessParams params;
  NumericalParams numerics;
  OutputOptions outputs;
  std::vector<SweepAxis> sweep;
  std::string out_dir;
  int workers = 1;
};

namespace detail {

enum class KeyKind { Real, Count };

struct KeySpec {
  const char* name;
  KeyKind kind;
  std::function<double&(RunConfig&)> real;
  std::function<int&(RunConfig&)> count;
};

inline const std::vector<KeySpec>& key_table() {
  using K = KeyKind;
  static const std::vector<KeySpec> table = {
      {"L", K::Real, [](RunConfig& c) -> double& { return c.params.shape.L; }, {}},
      {"d", K::Real, [](RunConfig& c) -> double& { return c.params.shape.d; }, {}},
      {"l0", K::Real, [](RunConfig& c) -> double& { return c.params.shape.l0; }, {}},
      {"delta", K::Real, [](RunConfig& c) -> double& { return c.params.shape.delta; }, {}},
      {"Rbar", K::Real, [](RunConfig& c) -> double& { return c.params.shape.Rbar; }, {}},
      {"Kr", K::Real, [](RunConfig& c) -> double& { return c.params.shape.Kr; }, {}},
      {"phi_r", K::Real, [](RunConfig& c) -> double& { return c.params.shape.phi_r; }, {}},
      {"a0", K::Real, [](RunConfig& c) -> double& { return c.params.forcing.a0; }, {}},
      {"b", K::Real, [](RunConfig& c) -> double& { return c.params.forcing.b; }, {}},
      {"phi_g", K::Real, [](RunConfig& c) -> double& { return c.params.forcing.phi_g; }, {}},
      {"Kbar", K::Real, [](RunConfig& c) -> double& { return c.params.forcing.Kbar; }, {}},
      {"Kp", K::Real, [](RunConfig& c) -> double& { return c.params.forcing.Kp; }, {}},
      {"fp", K::Real, [](RunConfig& c) -> double& { return c.params.fp; }, {}},
      {"K", K::Real, [](RunConfig& c) -> double& { return c.params.K; }, {}},
      {"J", K::Real, [](RunConfig& c) -> double& { return c.params.J; }, {}},
      {"m", K::Real, [](RunConfig& c) -> double& { return c.params.m; }, {}},
      {"alpha", K::Real, [](RunConfig& c) -> double& { return c.params.alpha; }, {}},
      {"H", K::Real, [](RunConfig& c) -> double& { return c.params.H; }, {}},
      {"Ec", K::Real, [](RunConfig& c) -> double& { return c.params.Ec; }, {}},
      {"Pr", K::Real, [](RunConfig& c) -> double& { return c.params.Pr; }, {}},
      {"dxi", K::Real, [](RunConfig& c) -> double& { return c.numerics.dxi; }, {}},
      {"dz", K::Real, [](RunConfig& c) -> double& { return c.numerics.dz; }, {}},
      {"dt", K::Real, [](RunConfig& c) -> double& { return c.numerics.dt; }, {}},
      {"warmup_periods", K::Count, {}, [](RunConfig& c) -> int& { return c.numerics.warmup_periods; }},
      {"measure_periods", K::Count, {}, [](RunConfig& c) -> int& { return c.numerics.measure_periods; }},
      {"cadence", K::Count, {}, [](RunConfig& c) -> int& { return c.outputs.cadence; }},
      {"workers", K::Count, {}, [](RunConfig& c) -> int& { return c.workers; }},
  };
  return table;
}

inline const KeySpec* find_key(std::string_view name) {
  for (const auto& k : key_table())
    if (name == k.name) return &k;
  return nullptr;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline std::string fmt_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Assigns one key by name. Throws ConfigError for unknown keys or non-integral counts.
inline void set_key(RunConfig& c, std::string_view key, double value) {
  const auto* spec = detail::find_key(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  if (spec->kind == detail::KeyKind::Real) {
    spec->real(c) = value;
  } else {
    if (value != std::floor(value) || std::abs(value) > 1e9)
      throw ConfigError(std::string(key) + " must be an integer");
    spec->count(c) = static_cast<int>(value);
  }
}

inline double get_key(const RunConfig& c, std::string_view key) {
  const auto* spec = detail::find_key(key);
  if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'");
  auto& mc = const_cast<RunConfig&>(c);
  return spec->kind == detail::KeyKind::Real ? spec->real(mc) : spec->count(mc);
}

/// Re-derives the grid from the spacings and checks every invariant,
/// including the explicit stability limit.
inline void finalize(RunConfig& c) {
  c.numerics = NumericalParams::make(c.params.shape.L, c.numerics.dz, c.numerics.dxi,
                                     c.numerics.dt, c.numerics.warmup_periods,
                                     c.numerics.measure_periods);
  validate(c.params, c.numerics);
  if (c.outputs.cadence < 1) throw ConfigError("cadence must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
}

/// All sweep points, the cartesian product of the axes in declaration order.
inline std::vector<RunConfig> expand_sweep(const RunConfig& base) {
  std::vector<RunConfig> points{base};
  points.front().sweep.clear();
  for (const auto& axis : base.sweep) {
    std::vector<RunConfig> next;
    for (const auto& p : points)
      for (double v : axis.values) {
        RunConfig c = p;
        set_key(c, axis.key, v);
        next.push_back(std::move(c));
      }
    points = std::move(next);
  }
  return points;
}

inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");

    if (key.rfind("sweep.", 0) == 0) {
      SweepAxis axis{key.substr(6), {}};
      const auto* spec = detail::find_key(axis.key);
      if (!spec || axis.key == "workers" || axis.key == "cadence")
        throw ConfigError(where + "cannot sweep '" + axis.key + "'");
      std::string items(value);
      for (char& ch : items)
        if (ch == ',') ch = ' ';
      std::istringstream in(items);
      std::string tok;
      while (in >> tok) {
        double v;
        if (!detail::parse_number(tok, v))
          throw ConfigError(where + key + ": cannot parse '" + tok + "' as a number");
        axis.values.push_back(v);
      }
      if (axis.values.empty()) throw ConfigError(where + key + ": empty value list");
      c.sweep.push_back(std::move(axis));
      continue;
    }

    if (!detail::find_key(key)) throw ConfigError(where + "unknown key '" + key + "'");
    double v;
    if (!detail::parse_number(value, v))
      throw ConfigError(where + key + ": cannot parse '" + std::string(value) + "' as a number");
    try {
      set_key(c, key, v);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }

  finalize(c);
  for (const auto& axis : c.sweep)
    for (double v : axis.values) {
      RunConfig probe = c;
      probe.sweep.clear();
      set_key(probe, axis.key, v);
      try {
        finalize(probe);
      } catch (const ConfigError& e) {
        throw ConfigError("sweep." + axis.key + " = " + detail::fmt_exact(v) + ": " + e.what());
      }
    }
  return c;
}

/// Fully resolved configuration; parse_config(to_text(c)) reproduces c.
inline std::string to_text(const RunConfig& c) {
  std::string out = "# resolved configuration\n";
  for (const auto& k : detail::key_table())
    out += std::string(k.name) + " = " + detail::fmt_exact(get_key(c, k.name)) + "\n";
  for (const auto& axis : c.sweep) {
    out += "sweep." + axis.key + " =";
    for (std::size_t i = 0; i < axis.values.size(); ++i)
      out += (i ? ", " : " ") + detail::fmt_exact(axis.values[i]);
    out += "\n";
  }
  return out;
}

inline bool same_settings(const RunConfig& a, const RunConfig& b) {
  return to_text(a) == to_text(b);
}

}  // namespace stenoflow
