#pragma once

// Command-line surface: configuration (flags over an optional JSON file),
// the analyze / spectrum / wavefunction / validate subcommands, and
// CSV / JSON emission with 17 significant digits.
//
// Exit codes: 0 success, 2 configuration error, 3 no physical result,
// 4 validation failure, 1 unexpected internal failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nurad/error.hpp"
#include "nurad/oracle.hpp"
#include "nurad/potential.hpp"
#include "nurad/spectrum.hpp"

namespace nurad::cli {

enum ExitCode : int { ok = 0, internal = 1, config_error = 2, no_result = 3, validation_failed = 4 };

enum class Command { analyze, spectrum, wavefunction, validate };
enum class Format { csv, json };
enum class R0Policy { unspecified, fixed, automatic };

/// Error raised while building a RunConfig; `key` names the offending setting.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what) : Error(ErrorKind::config, key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// -------------------------------------------------------------- formatting

/// Shortest form that carries 17 significant digits; round-trips any double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Inverse of format_number (also accepts nan / inf).
inline double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw Error(ErrorKind::invalid_input, "not a number: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

/// {"command": ..., "columns": [...], "rows": [{column: "value", ...}]}.
/// Every cell is a string so numbers keep their exact decimal form.
inline void write_json(std::ostream& os, const std::string& command, const Table& t) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

// -------------------------------------------------------------- configuration

struct GridSpec {
  bool log = false;
  double lo = 0.0;
  double hi = 20.0;
  int count = 201;

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : double(i) / (count - 1);
      out[i] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    if (count > 1) out.back() = hi;
    return out;
  }
};

/// "lin:<lo>:<hi>:<count>" or "log:<lo>:<hi>:<count>".
inline GridSpec parse_grid(const std::string& text, const std::string& key = "grid") {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log"))
    throw ConfigError(key, "expected lin:<lo>:<hi>:<count> or log:<lo>:<hi>:<count>, got '" + text + "'");
  GridSpec g;
  g.log = parts[0] == "log";
  try {
    g.lo = parse_number(parts[1]);
    g.hi = parse_number(parts[2]);
    std::size_t used = 0;
    g.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw ConfigError(key, "malformed grid '" + text + "'");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.hi > g.lo)) throw ConfigError(key, "need finite lo < hi");
  if (g.lo < 0.0) throw ConfigError(key, "radii must be >= 0");
  if (g.log && !(g.lo > 0.0)) throw ConfigError(key, "log grid needs lo > 0");
  if (g.count < 2 || g.count > 100000) throw ConfigError(key, "count must be in [2, 100000]");
  return g;
}

struct RunConfig {
  Command command = Command::spectrum;
  std::optional<std::string> preset;
  std::map<std::string, double> params;
  std::optional<std::vector<double>> coefficients;  ///< a0, a-1, a-2, ...
  InversePolyPotential potential;                    ///< resolved from the above
  R0Policy r0_policy = R0Policy::unspecified;
  double r0 = 1.0;
  int n_max = 3;
  BranchPolicy branch = BranchPolicy::plus;
  int n = 0;
  GridSpec grid;
  double oracle_tol = 1e-6;
  Format format = Format::csv;
  std::optional<std::string> out;
  double perturb_lambda2 = 0.0;  ///< test hook: added to every bound-state lambda^2 before validation

  /// Inverse-power coefficients {A-1, A-2, ...} of the resolved potential.
  const std::vector<double>& inverse_coefficients() const { return potential.inv_coeffs(); }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& preset_params() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"coulomb", {"alpha", "ell"}},
      {"magnetic", {"alpha", "A", "B", "C"}},
      {"neutrino", {"k", "eps"}},
  };
  return table;
}

inline const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = {"alpha", "A", "B", "C", "k", "eps", "ell"};
  return names;
}

/// Settings gathered from one source (file or flags) before merging.
struct Layer {
  std::optional<std::string> preset;
  std::optional<std::vector<double>> coefficients;
  std::map<std::string, double> params;
  std::optional<std::string> r0;
  std::optional<int> n_max;
  std::optional<std::string> branch;
  std::optional<int> n;
  std::optional<std::string> grid;
  std::optional<double> oracle_tol;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

inline std::vector<double> parse_coefficients(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(parse_number(item));
    } catch (const Error&) {
      throw ConfigError(key, "malformed coefficient '" + item + "'");
    }
  }
  if (out.size() < 2) throw ConfigError(key, "need a0 and at least one inverse-power coefficient");
  return out;
}

inline void check_keys(const nlohmann::json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
}

inline double json_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  return v.get<double>();
}

inline int json_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
  return v.get<int>();
}

inline std::string json_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "must be a string");
  return v.get<std::string>();
}

inline Layer read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc, "", {"potential", "expansion", "spectrum", "oracle", "output"});
  Layer L;
  if (doc.contains("potential")) {
    const auto& p = doc["potential"];
    std::set<std::string> allowed = {"preset", "coefficients"};
    allowed.insert(param_names().begin(), param_names().end());
    check_keys(p, "potential", allowed);
    if (p.contains("preset")) L.preset = json_string(p["preset"], "potential.preset");
    if (p.contains("coefficients")) {
      const auto& c = p["coefficients"];
      if (!c.is_array()) throw ConfigError("potential.coefficients", "must be an array of numbers");
      std::vector<double> v;
      for (const auto& x : c) v.push_back(json_number(x, "potential.coefficients"));
      if (v.size() < 2) throw ConfigError("potential.coefficients", "need a0 and at least one inverse-power coefficient");
      L.coefficients = v;
    }
    for (const auto& name : param_names())
      if (p.contains(name)) L.params[name] = json_number(p[name], "potential." + name);
  }
  if (doc.contains("expansion")) {
    const auto& e = doc["expansion"];
    check_keys(e, "expansion", {"r0"});
    if (e.contains("r0")) {
      if (e["r0"].is_string()) L.r0 = e["r0"].get<std::string>();
      else L.r0 = format_number(json_number(e["r0"], "expansion.r0"));
    }
  }
  if (doc.contains("spectrum")) {
    const auto& s = doc["spectrum"];
    check_keys(s, "spectrum", {"n_max", "branch", "n", "grid"});
    if (s.contains("n_max")) L.n_max = json_int(s["n_max"], "spectrum.n_max");
    if (s.contains("branch")) L.branch = json_string(s["branch"], "spectrum.branch");
    if (s.contains("n")) L.n = json_int(s["n"], "spectrum.n");
    if (s.contains("grid")) L.grid = json_string(s["grid"], "spectrum.grid");
  }
  if (doc.contains("oracle")) {
    const auto& o = doc["oracle"];
    check_keys(o, "oracle", {"tol"});
    if (o.contains("tol")) L.oracle_tol = json_number(o["tol"], "oracle.tol");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    check_keys(o, "output", {"format", "path"});
    if (o.contains("format")) L.format = json_string(o["format"], "output.format");
    if (o.contains("path")) L.out = json_string(o["path"], "output.path");
  }
  return L;
}

inline Command parse_command(const std::string& s) {
  if (s == "analyze") return Command::analyze;
  if (s == "spectrum") return Command::spectrum;
  if (s == "wavefunction") return Command::wavefunction;
  if (s == "validate") return Command::validate;
  throw ConfigError("command", "unknown subcommand '" + s + "'");
}

/// Merges file and flag layers (flags win) and validates the result.
inline RunConfig resolve(Command command, const Layer& file, const Layer& flags) {
  RunConfig cfg;
  cfg.command = command;

  auto check_source = [](const Layer& L, const std::string& preset_key, const std::string& coeff_key) {
    if (L.preset && L.coefficients)
      throw ConfigError(preset_key, "conflicts with " + coeff_key + "; give exactly one potential source");
  };
  check_source(file, "potential.preset", "potential.coefficients");
  check_source(flags, "--preset", "--coeffs");
  const bool flag_source = flags.preset || flags.coefficients;
  const Layer& src = flag_source ? flags : file;
  cfg.preset = src.preset;
  cfg.coefficients = src.coefficients;
  if (!flag_source) cfg.params = file.params;
  for (const auto& [k, v] : flags.params) cfg.params[k] = v;

  if (!cfg.preset && !cfg.coefficients) throw ConfigError("potential", "no potential given (use --preset or --coeffs)");
  if (cfg.coefficients) {
    if (!cfg.params.empty())
      throw ConfigError(cfg.params.begin()->first, "preset parameter given together with a coefficient list");
    const auto& c = *cfg.coefficients;
    try {
      cfg.potential = InversePolyPotential(c[0], std::vector<double>(c.begin() + 1, c.end()));
    } catch (const Error& e) {
      throw ConfigError("coefficients", e.what());
    }
  } else {
    const auto it = preset_params().find(*cfg.preset);
    if (it == preset_params().end())
      throw ConfigError("preset", "unknown preset '" + *cfg.preset + "' (coulomb, magnetic, neutrino)");
    for (const auto& [k, v] : cfg.params) {
      if (!it->second.count(k)) throw ConfigError(k, "not a parameter of preset '" + *cfg.preset + "'");
      if (!std::isfinite(v)) throw ConfigError(k, "must be finite");
    }
    try {
      cfg.potential = preset(*cfg.preset, cfg.params);
    } catch (const Error& e) {
      throw ConfigError("preset", e.what());
    }
  }

  if (const auto& r0 = flags.r0 ? flags.r0 : file.r0) {
    if (*r0 == "auto") {
      cfg.r0_policy = R0Policy::automatic;
    } else {
      try {
        cfg.r0 = parse_number(*r0);
      } catch (const Error&) {
        throw ConfigError("r0", "expected a positive number or 'auto', got '" + *r0 + "'");
      }
      if (!std::isfinite(cfg.r0) || !(cfg.r0 > 0.0)) throw ConfigError("r0", "must be a finite positive number");
      cfg.r0_policy = R0Policy::fixed;
    }
  }

  if (auto v = flags.n_max ? flags.n_max : file.n_max) {
    if (*v < 0 || *v > 50) throw ConfigError("n_max", "must be in [0, 50]");
    cfg.n_max = *v;
  }
  if (auto v = flags.n ? flags.n : file.n) {
    if (*v < 0 || *v > 50) throw ConfigError("n", "must be in [0, 50]");
    cfg.n = *v;
  }
  if (auto v = flags.branch ? flags.branch : file.branch) {
    if (*v == "plus") cfg.branch = BranchPolicy::plus;
    else if (*v == "minus") cfg.branch = BranchPolicy::minus;
    else if (*v == "both") cfg.branch = BranchPolicy::both;
    else throw ConfigError("branch", "expected plus, minus or both");
  }
  if (command == Command::wavefunction && cfg.branch == BranchPolicy::both)
    throw ConfigError("branch", "wavefunction needs a single branch (plus or minus)");
  if (auto v = flags.grid ? flags.grid : file.grid) cfg.grid = parse_grid(*v);
  if (auto v = flags.oracle_tol ? flags.oracle_tol : file.oracle_tol) {
    if (!std::isfinite(*v) || !(*v > 0.0) || *v > 1e-2) throw ConfigError("oracle_tol", "must be in (0, 1e-2]");
    cfg.oracle_tol = *v;
  }
  if (auto v = flags.format ? flags.format : file.format) {
    if (*v == "csv") cfg.format = Format::csv;
    else if (*v == "json") cfg.format = Format::json;
    else throw ConfigError("format", "expected csv or json");
  }
  cfg.out = flags.out ? flags.out : file.out;
  return cfg;
}

}  // namespace detail

/// Builds a RunConfig from argv-style arguments (program name excluded).
/// Throws ConfigError on any problem. Returns nullopt after printing help.
inline std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& help_out) {
  CLI::App app("Closed-form bound states for inverse-polynomial radial potentials", "nurad");
  std::string command;
  app.add_option("command", command, "analyze | spectrum | wavefunction | validate")->required();

  std::optional<std::string> preset, coeffs, r0, branch, grid, format, out, config;
  std::optional<int> n_max, n;
  std::optional<double> oracle_tol, perturb;
  std::map<std::string, std::optional<double>> params;
  for (const auto& name : detail::param_names()) params[name];

  app.add_option("--preset", preset, "coulomb | magnetic | neutrino");
  app.add_option("--coeffs", coeffs, "a0,a-1,a-2,... (raw coefficient list)");
  app.add_option("--alpha", params["alpha"], "coulomb / magnetic coupling");
  app.add_option("--A", params["A"], "magnetic A");
  app.add_option("--B", params["B"], "magnetic B");
  app.add_option("--C", params["C"], "magnetic C");
  app.add_option("--k", params["k"], "neutrino k (nonzero integer)");
  app.add_option("--eps", params["eps"], "neutrino epsilon (+1 or -1)");
  app.add_option("--ell", params["ell"], "coulomb angular momentum");
  app.add_option("--r0", r0, "expansion point: number or 'auto'");
  app.add_option("--n-max", n_max, "highest radial quantum number (<= 50)");
  app.add_option("--n", n, "radial quantum number for wavefunction");
  app.add_option("--branch", branch, "plus | minus | both");
  app.add_option("--grid", grid, "lin|log:<lo>:<hi>:<count> for wavefunction");
  app.add_option("--format", format, "csv | json");
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--config", config, "JSON configuration file");
  app.add_option("--oracle-tol", oracle_tol, "finite-difference convergence tolerance");
  app.add_option("--perturb-lambda2", perturb, "testing hook for validate")->group("");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("arguments", e.what());
  }

  detail::Layer flags;
  flags.preset = preset;
  if (coeffs) flags.coefficients = detail::parse_coefficients(*coeffs, "coeffs");
  for (const auto& [k, v] : params)
    if (v) flags.params[k] = *v;
  flags.r0 = r0;
  flags.n_max = n_max;
  flags.branch = branch;
  flags.n = n;
  flags.grid = grid;
  flags.oracle_tol = oracle_tol;
  flags.format = format;
  flags.out = out;

  const detail::Layer file = config ? detail::read_config_file(*config) : detail::Layer{};
  RunConfig cfg = detail::resolve(detail::parse_command(command), file, flags);
  if (perturb) {
    if (!std::isfinite(*perturb)) throw ConfigError("perturb_lambda2", "must be finite");
    cfg.perturb_lambda2 = *perturb;
  }
  return cfg;
}

// -------------------------------------------------------------- commands

/// r0 actually used: explicit value, auto_r0, or (when unspecified) auto_r0
/// only if the potential has terms that the expansion approximates.
inline double resolve_r0(const RunConfig& cfg) {
  switch (cfg.r0_policy) {
    case R0Policy::fixed: return cfg.r0;
    case R0Policy::automatic: return auto_r0(cfg.potential);
    case R0Policy::unspecified: break;
  }
  for (int h = 3; h <= cfg.potential.h_max(); ++h)
    if (cfg.potential.coeff(h) != 0.0) return auto_r0(cfg.potential);
  return 1.0;
}

inline const char* branch_symbol(int sign) { return sign > 0 ? "+" : "-"; }

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline Table cmd_analyze(const RunConfig& cfg) {
  const auto rep = landscape(cfg.potential);
  struct Row {
    double r, v;
    int order;
    std::string kind;
  };
  std::vector<Row> rows;
  for (double z : rep.zeros) rows.push_back({z, 0.0, 0, "zero"});
  for (const auto& e : rep.extrema) rows.push_back({e.r, e.value, 1, to_string(e.kind)});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.r != b.r ? a.r < b.r : a.order < b.order; });
  Table t{{"r", "V", "kind"}, {}};
  for (const auto& r : rows) t.rows.push_back({format_number(r.r), format_number(r.v), r.kind});
  return t;
}

struct SpectrumOutcome {
  Table table;
  std::vector<EigenState> states;
  bool any_normalizable = false;
};

inline SpectrumOutcome cmd_spectrum(const RunConfig& cfg) {
  SpectrumOutcome out;
  out.states = solve_spectrum(cfg.potential, resolve_r0(cfg), cfg.n_max, cfg.branch);
  out.table.columns = {"n", "branch", "lambda2", "q", "w", "z", "r0", "normalizable"};
  for (const auto& s : out.states) {
    out.any_normalizable = out.any_normalizable || s.normalizable();
    out.table.rows.push_back({std::to_string(s.n), branch_symbol(s.branch_sign), format_number(s.lambda2),
                              format_number(s.q), format_number(s.w), format_number(s.z), format_number(s.r0),
                              bool_text(s.normalizable())});
  }
  return out;
}

/// Throws Error(non_normalizable) when the requested state is not bound.
inline Table cmd_wavefunction(const RunConfig& cfg) {
  const int sign = cfg.branch == BranchPolicy::minus ? -1 : +1;
  const EigenState s = make_state(cfg.potential, resolve_r0(cfg), cfg.n, sign);
  const Eigenfunction u(s);
  Table t{{"r", "U"}, {}};
  for (double r : cfg.grid.points()) t.rows.push_back({format_number(r), format_number(u(r))});
  return t;
}

struct ValidateOutcome {
  Table table;
  GapReport report;
  bool any_bound = false;
};

inline ValidateOutcome cmd_validate(const RunConfig& cfg) {
  ValidateOutcome out;
  auto states = solve_spectrum(cfg.potential, resolve_r0(cfg), cfg.n_max, cfg.branch);
  for (auto& s : states) {
    if (s.normalizable()) {
      out.any_bound = true;
      s.lambda2 += cfg.perturb_lambda2;
    }
  }
  out.report = validate(cfg.potential, states, cfg.oracle_tol);
  out.table.columns = {"n",          "branch",    "lambda2_nu", "lambda2_eff_oracle", "eff_agreement",
                       "lambda2_true_oracle", "gap", "converged"};
  for (const auto& r : out.report.rows)
    out.table.rows.push_back({std::to_string(r.n), branch_symbol(r.branch_sign), format_number(r.lambda2_nu),
                              format_number(r.lambda2_eff_oracle), to_string(r.eff_agreement),
                              format_number(r.lambda2_true_oracle), format_number(r.gap), bool_text(r.converged)});
  return out;
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::spectrum: return "spectrum";
    case Command::wavefunction: return "wavefunction";
    case Command::validate: return "validate";
  }
  return "?";
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::invalid_input: return config_error;
    case ErrorKind::no_structure:
    case ErrorKind::no_branch:
    case ErrorKind::complex_index:
    case ErrorKind::singular_branch:
    case ErrorKind::non_normalizable: return no_result;
    default: return internal;
  }
}

/// Full CLI: parse, dispatch, emit. `out` receives the table unless --out is
/// given; diagnostics go to `err` as single lines.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto parsed = parse_config(args, out);
    if (!parsed) return ok;
    const RunConfig& cfg = *parsed;

    Table table;
    int code = ok;
    std::string note;
    switch (cfg.command) {
      case Command::analyze: table = cmd_analyze(cfg); break;
      case Command::spectrum: {
        auto res = cmd_spectrum(cfg);
        table = std::move(res.table);
        if (!res.any_normalizable) {
          code = no_result;
          note = "spectrum: no normalizable state";
        }
        break;
      }
      case Command::wavefunction: table = cmd_wavefunction(cfg); break;
      case Command::validate: {
        auto res = cmd_validate(cfg);
        table = std::move(res.table);
        if (!res.any_bound) {
          code = no_result;
          note = "validate: no bound state to check";
        } else if (!res.report.all_pass()) {
          code = validation_failed;
          note = "validate: closed form disagrees with the oracle on the effective potential";
        }
        break;
      }
    }

    std::ofstream file;
    if (cfg.out) {
      file.open(*cfg.out, std::ios::binary);
      if (!file) {
        err << "error: output.path: cannot open '" << *cfg.out << "'\n";
        return config_error;
      }
    }
    std::ostream& dest = cfg.out ? static_cast<std::ostream&>(file) : out;
    if (cfg.format == Format::csv) write_csv(dest, table);
    else write_json(dest, command_name(cfg.command), table);
    if (!note.empty()) err << note << '\n';
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return internal;
  }
}

}  // namespace nurad::cli
