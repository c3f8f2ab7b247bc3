#include "heatlab/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "heatlab/entropy.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/estimates.hpp"
#include "heatlab/manifolds.hpp"
#include "heatlab/moments.hpp"
#include "heatlab/parametrix.hpp"
#include "svg.hpp"

namespace heatlab::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kOutDirVariable = "HEATLAB_OUT_DIR";
constexpr double kSlackFloor = -1e-8;

double parseReal(std::string_view text, const char* what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ArgumentError(fmt::format("{}: '{}' is not a finite number", what, s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::string num(double v) { return fmt::format("{:.16e}", v); }

// A finished command: rows for the table file, scalar results for the footer
// and summary, and whether every asserted check held.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Json results = Json::object();
  bool pass = true;
  std::string svg;
};

using Settings = std::map<std::string, std::string>;

const std::vector<std::string>& settingKeys() {
  static const std::vector<std::string> keys = {"model", "t-grid", "d-grid", "tol", "r",
                                                "out",   "format", "plot",   "which", "t0"};
  return keys;
}

Settings readConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError(fmt::format("config: cannot read '{}'", path));
  Settings settings;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ArgumentError(fmt::format("config {}:{}: expected key=value", path, lineNo));
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (std::find(settingKeys().begin(), settingKeys().end(), key) == settingKeys().end())
      throw ArgumentError(fmt::format("config {}:{}: unknown key '{}'", path, lineNo, key));
    settings[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return settings;
}

bool parseBool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ArgumentError(fmt::format("plot: '{}' is not a boolean", s));
}

RunConfig toConfig(const std::string& command, const Settings& s) {
  RunConfig cfg;
  cfg.command = command;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };
  if (auto v = get("model")) cfg.model = *v;
  if (auto v = get("t-grid")) cfg.tGrid = parseGrid(*v);
  if (auto v = get("d-grid")) cfg.dGrid = parseGrid(*v);
  if (auto v = get("tol")) {
    cfg.tol = parseReal(*v, "tol");
    if (!(cfg.tol > 0.0)) throw ArgumentError("tol must be positive");
  }
  if (auto v = get("r")) {
    cfg.r = parseReal(*v, "r");
    if (!(*cfg.r > 0.0)) throw ArgumentError("r must be positive");
  }
  if (auto v = get("out")) cfg.outPath = *v;
  if (auto v = get("format")) {
    if (*v == "csv") cfg.format = Format::Csv;
    else if (*v == "json") cfg.format = Format::Json;
    else throw ArgumentError(fmt::format("format: expected csv or json, got '{}'", *v));
  }
  if (auto v = get("plot")) cfg.plot = parseBool(*v);
  if (auto v = get("which")) {
    if (*v != "lyp" && *v != "perelman" && *v != "hamilton" && *v != "liyau")
      throw ArgumentError(fmt::format("which: expected lyp, perelman, hamilton or liyau, got '{}'", *v));
    cfg.which = *v;
  }
  if (auto v = get("t0")) {
    cfg.t0 = parseReal(*v, "t0");
    if (!(cfg.t0 > 0.0)) throw ArgumentError("t0 must be positive");
  }
  return cfg;
}

Json configEcho(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts, std::span<const double> ds) {
  Json echo;
  echo["command"] = cfg.command;
  echo["model"] = m.name();
  echo["t-grid"] = ts.empty() ? "" : fmt::format("{:.17g}..{:.17g} ({} points)", ts.front(), ts.back(), ts.size());
  if (!ds.empty()) echo["d-grid"] = fmt::format("{:.17g}..{:.17g} ({} points)", ds.front(), ds.back(), ds.size());
  echo["tol"] = fmt::format("{:.17g}", cfg.tol);
  if (cfg.r) echo["r"] = fmt::format("{:.17g}", *cfg.r);
  if (cfg.command == "inequality-scan") echo["which"] = cfg.which;
  if (cfg.command == "inequality-scan" && cfg.which == "hamilton") echo["t0"] = fmt::format("{:.17g}", cfg.t0);
  return echo;
}

// ---------------------------------------------------------------- commands

Table entropyTable(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts) {
  Table table;
  table.columns = {"t", "N", "dNdt_direct", "dNdt_integrand", "predicted", "residual"};
  const double predicted = -0.5 * m.scalarCurvature();
  double maxN = 0.0, maxRate = 0.0;
  for (double t : ts) {
    const EntropySample s = entropyDerivative(m, t, cfg.tol);
    table.rows.push_back({t, s.N, s.dNdt_direct, s.dNdt_integrand, predicted * t, s.N - predicted * t});
    maxN = std::max(maxN, std::abs(s.N));
    maxRate = std::max({maxRate, std::abs(s.dNdt_direct), std::abs(s.dNdt_integrand)});
  }
  const AsymptoticReport rep = entropySlopeAtZero(m, ts, cfg.tol);
  const bool slopeOk = std::abs(rep.slopeAtZero - predicted) <= 0.02 * std::abs(predicted) + 1e-6;
  table.results["predicted_slope"] = predicted;
  table.results["fitted_slope"] = rep.slopeAtZero;
  table.results["slope_check"] = slopeOk ? "pass" : "fail";
  table.pass = slopeOk;
  if (m.kind() == ModelKind::Euclidean) {
    const bool nullOk = maxN <= 1e-8 && maxRate <= 1e-6;
    table.results["max_abs_N"] = maxN;
    table.results["null_check"] = nullOk ? "pass" : "fail";
    table.pass = table.pass && nullOk;
  }
  if (cfg.plot) {
    svg::Series entropy{"N(t)", {}, {}, false}, reference{"-R/2 t", {}, {}, true};
    for (const auto& row : table.rows) {
      entropy.x.push_back(row[0]);
      entropy.y.push_back(row[1]);
      reference.x.push_back(row[0]);
      reference.y.push_back(row[4]);
    }
    table.svg = svg::lineChart("Nash entropy on " + m.name(), "t", "N", {entropy, reference}, true);
  }
  return table;
}

Table slopeFit(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts) {
  Table table;
  table.columns = {"t", "N", "N_over_t", "residual"};
  const AsymptoticReport rep = entropySlopeAtZero(m, ts, cfg.tol);
  for (const EntropySample& s : rep.samples)
    table.rows.push_back({s.t, s.N, s.N / s.t, std::abs(s.N - rep.predictedSlope * s.t)});
  const bool slopeOk = std::abs(rep.slopeAtZero - rep.predictedSlope) <= 0.02 * std::abs(rep.predictedSlope) + 1e-6;
  table.results["slope_at_zero"] = rep.slopeAtZero;
  table.results["predicted_slope"] = rep.predictedSlope;
  table.results["extrapolation_residual"] = rep.extrapolationResidual;
  table.results["residual_below_floor"] = rep.residualBelowFloor;
  if (!rep.residualBelowFloor) {
    table.results["residual_exponent"] = rep.residualExponent;
    table.results["residual_std_error"] = rep.residualStdError;
  }
  table.results["slope_check"] = slopeOk ? "pass" : "fail";
  table.pass = slopeOk;
  if (cfg.plot) {
    svg::Series q{"N/t", {}, {}, false}, ref{"-R/2", {}, {}, true};
    for (const auto& row : table.rows) {
      q.x.push_back(row[0]);
      q.y.push_back(row[2]);
      ref.x.push_back(row[0]);
      ref.y.push_back(rep.predictedSlope);
    }
    table.svg = svg::lineChart("Entropy slope on " + m.name(), "t", "N/t", {q, ref}, true);
  }
  return table;
}

Table remainderCheck(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts,
                     std::span<const double> ds) {
  const ParametrixData p = cfg.r ? ParametrixData::forModel(m, *cfg.r) : ParametrixData::forModel(m);
  Table table;
  table.columns = {"t", "sup_F_tilted", "sup_dFdt_tilted"};
  const RemainderFit fit = remainderScalingFit(p, ds, ts);
  for (double t : ts) {
    double supF = 0.0, supFt = 0.0;
    for (double d : ds) {
      if (d > p.r / 2) continue;
      const double tilt = std::exp(d * d / (5.0 * t));
      supF = std::max(supF, std::abs(remainder(p, d, t)) * tilt);
      const double ft = centralDiff([&](double s) { return remainder(p, d, s); }, t, t / 10.0);
      supFt = std::max(supFt, std::abs(ft) * tilt);
    }
    table.rows.push_back({t, supF, supFt});
  }
  table.results["N0"] = p.N0;
  table.results["order"] = p.order;
  table.results["r"] = p.r;
  table.results["exact_zero"] = fit.exactZero;
  bool ok = fit.exactZero;
  if (!fit.exactZero) {
    table.results["value_exponent"] = fit.value.slope;
    table.results["derivative_exponent"] = fit.timeDerivative.slope;
    ok = fit.value.slope >= fit.expectedValueExponent - 0.5 &&
         fit.timeDerivative.slope >= fit.expectedDerivativeExponent - 0.5;
  }
  table.results["expected_value_exponent"] = fit.expectedValueExponent;
  table.results["expected_derivative_exponent"] = fit.expectedDerivativeExponent;
  table.results["exponent_check"] = ok ? "pass" : "fail";
  table.pass = ok;
  if (cfg.plot) {
    svg::Series a{"log10 sup |F| e^(d^2/5t)", {}, {}, false}, b{"log10 sup |dF/dt| e^(d^2/5t)", {}, {}, false};
    for (const auto& row : table.rows) {
      a.x.push_back(row[0]);
      a.y.push_back(std::log10(row[1]));
      b.x.push_back(row[0]);
      b.y.push_back(std::log10(row[2]));
    }
    table.svg = svg::lineChart("Parametrix remainder on " + m.name(), "t", "log10", {a, b}, true);
  }
  return table;
}

Table inequalityScan(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts,
                     std::span<const double> ds) {
  const std::string& which = cfg.which;
  std::function<double(double, double)> value;
  std::function<double(double)> toSlack = [](double v) { return v; };
  bool asserted = true;
  std::optional<ShiftedSolution> shifted;
  if (which == "lyp") {
    value = [&](double d, double t) { return lypQuantity(m, d, t); };
    toSlack = [](double v) { return -v; };
    // The inequality is only claimed for Rc >= 0.
    asserted = m.ricciLowerBound() == 0.0;
  } else if (which == "perelman") {
    value = [&](double d, double t) { return perelmanResidual(m, d, t); };
    toSlack = [](double v) { return -std::abs(v); };
    asserted = false;
  } else if (which == "hamilton") {
    shifted = ShiftedSolution::make(m, cfg.t0, *std::max_element(ts.begin(), ts.end()));
    value = [&](double d, double s) { return hamiltonSlack(*shifted, d, s); };
  } else {
    value = [&](double d, double s) { return liYauLowerCheck(m, d, s); };
  }

  Table table;
  table.columns = {"d", which == "hamilton" ? "s" : "t", "value", "slack"};
  std::vector<double> values;
  const SlackReport rep = scanSlack(ds, ts, [&](double d, double t) {
    const double v = value(d, t);
    values.push_back(v);
    return toSlack(v);
  });
  for (std::size_t i = 0; i < rep.grid.size(); ++i)
    table.rows.push_back({rep.grid[i].first, rep.grid[i].second, values[i], rep.slack[i]});

  table.results["which"] = which;
  table.results["min_slack"] = rep.minSlack;
  table.results["argmin_d"] = rep.argmin.first;
  table.results["argmin_t"] = rep.argmin.second;
  table.results["asserted"] = asserted;
  bool ok = true;
  if (which == "liyau") ok = std::isfinite(rep.minSlack);
  else if (asserted) ok = rep.minSlack >= kSlackFloor;
  if (which == "perelman") {
    double d0 = 0.0;
    for (double d : ds)
      if (d > 0.0 && (d0 == 0.0 || d < d0)) d0 = d;
    const double tMin = *std::min_element(ts.begin(), ts.end());
    if (d0 > 0.0) {
      const RichardsonResult lim = perelmanLimit(m, d0, tMin);
      table.results["limit"] = lim.limit;
      table.results["limit_residual"] = lim.residual;
    }
  }
  table.results["check"] = asserted || which == "liyau" ? (ok ? "pass" : "fail") : "recorded";
  table.pass = ok;
  if (cfg.plot) {
    std::vector<double> dv(ds.begin(), ds.end()), tv(ts.begin(), ts.end());
    table.svg = svg::heatStrip(which + " slack on " + m.name(), dv, tv, rep.slack);
  }
  return table;
}

Table momentsVerify(const RunConfig& cfg, const ModelSpace& m, std::span<const double> ts) {
  const int n = m.dimension();
  const std::vector<double> lambdas(n, m.scalarCurvature() / n);
  auto scaleI = [](const MomentSpec& s) {
    double a = 0.0;
    for (double l : s.lambdas) a += std::abs(l);
    return 4.0 * (s.n + 2) * a * s.t * s.t;
  };
  auto scaleQ = [](const MomentSpec& s) {
    double a = 0.0;
    for (double l : s.lambdas) a += std::abs(l);
    return 8.0 * (s.n * s.n + 6 * s.n + 8) * a * s.t * s.t * s.t;
  };
  auto rel = [](double err, double scale) { return scale > 0.0 ? err / scale : err; };

  Table table;
  table.columns = {"t", "I_closed", "I_wick", "Q_closed", "Q_wick", "induction_I", "induction_Q"};
  double worst = 0.0;
  for (double t : ts) {
    const MomentSpec spec{n, lambdas, t};
    const double ic = momentIn(spec), iw = momentInWick(spec), qc = momentQn(spec), qw = momentQnWick(spec);
    std::pair<double, double> ind{0.0, 0.0};
    if (n >= 2) ind = inductionStep(spec, {n - 1, std::vector<double>(lambdas.begin(), lambdas.end() - 1), t});
    table.rows.push_back({t, ic, iw, qc, qw, ind.first, ind.second});
    worst = std::max({worst, rel(std::abs(ic - iw), scaleI(spec)), rel(std::abs(qc - qw), scaleQ(spec)),
                      std::abs(ind.first), std::abs(ind.second)});
  }

  // Seeded random sweep over n <= 8, 100 draws each.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lambdaDist(-1.0, 1.0), logT(std::log(1e-3), 0.0);
  double worstI = 0.0, worstQ = 0.0, worstInduction = 0.0;
  for (int dim = 1; dim <= 8; ++dim) {
    for (int draw = 0; draw < 100; ++draw) {
      MomentSpec spec{dim, std::vector<double>(dim), 0.0};
      for (double& l : spec.lambdas) l = lambdaDist(rng);
      spec.t = std::exp(logT(rng));
      worstI = std::max(worstI, rel(std::abs(momentIn(spec) - momentInWick(spec)), scaleI(spec)));
      worstQ = std::max(worstQ, rel(std::abs(momentQn(spec) - momentQnWick(spec)), scaleQ(spec)));
      if (dim >= 2) {
        const auto [ri, rq] =
            inductionStep(spec, {dim - 1, std::vector<double>(spec.lambdas.begin(), spec.lambdas.end() - 1), spec.t});
        worstInduction = std::max({worstInduction, std::abs(ri), std::abs(rq)});
      }
    }
  }
  const bool ok = worst <= 1e-12 && worstI <= 1e-12 && worstQ <= 1e-12 && worstInduction <= 1e-12;
  table.results["model_rows_worst"] = worst;
  table.results["random_worst_I"] = worstI;
  table.results["random_worst_Q"] = worstQ;
  table.results["random_worst_induction"] = worstInduction;
  table.results["moment_check"] = ok ? "pass" : "fail";
  table.pass = ok;
  if (cfg.plot) {
    svg::Series a{"I_n closed form", {}, {}, false}, b{"Q_n closed form", {}, {}, false};
    for (const auto& row : table.rows) {
      a.x.push_back(row[0]);
      a.y.push_back(row[1]);
      b.x.push_back(row[0]);
      b.y.push_back(row[3]);
    }
    table.svg = svg::lineChart("Gaussian moments for " + m.name(), "t", "value", {a, b}, true);
  }
  return table;
}

// ---------------------------------------------------------------- output

std::string renderCsv(const Table& table, const Json& echo) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + num(row[i]);
    out += '\n';
  }
  auto footer = [&](const Json& obj) {
    for (const auto& [key, v] : obj.items()) {
      if (v.is_number_float()) out += fmt::format("# {}={}\n", key, num(v.get<double>()));
      else if (v.is_string()) out += fmt::format("# {}={}\n", key, v.get<std::string>());
      else out += fmt::format("# {}={}\n", key, v.dump());
    }
  };
  footer(echo);
  footer(table.results);
  out += fmt::format("# status={}\n", table.pass ? "pass" : "fail");
  return out;
}

std::string renderJson(const Table& table, const Json& echo) {
  Json doc;
  doc["config"] = echo;
  doc["columns"] = table.columns;
  doc["rows"] = Json::array();
  for (const auto& row : table.rows) doc["rows"].push_back(row);
  doc["results"] = table.results;
  doc["status"] = table.pass ? "pass" : "fail";
  return doc.dump(2) + "\n";
}

std::filesystem::path outputPath(const RunConfig& cfg, const ModelSpace& m, Format format) {
  if (cfg.outPath) return *cfg.outPath;
  const char* dir = std::getenv(kOutDirVariable);
  std::string stem = cfg.command;
  if (cfg.command == "inequality-scan") stem += "_" + cfg.which;
  std::string model = m.name();
  std::replace(model.begin(), model.end(), ':', '-');
  return std::filesystem::path(dir && *dir ? dir : ".") /
         fmt::format("{}_{}.{}", stem, model, format == Format::Json ? "json" : "csv");
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ArgumentError(fmt::format("cannot write '{}'", path.string()));
  file << content;
  if (!file) throw ArgumentError(fmt::format("cannot write '{}'", path.string()));
}

struct RawOptions {
  std::string model, tGrid, dGrid, tol, r, out, format, which, t0, config;
  bool plot = false;
};

}  // namespace

std::vector<double> GridSpec::values() const { return makeGrid(min, max, static_cast<std::size_t>(count), log); }

std::string GridSpec::str() const { return fmt::format("{:.17g}:{:.17g}:{}:{}", min, max, count, log ? "log" : "lin"); }

GridSpec parseGrid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw ArgumentError(fmt::format("grid '{}': expected min:max:count:log|lin", text));
  GridSpec g;
  g.min = parseReal(parts[0], "grid min");
  g.max = parseReal(parts[1], "grid max");
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), g.count);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size())
    throw ArgumentError(fmt::format("grid '{}': count must be an integer", text));
  if (parts[3] == "log") g.log = true;
  else if (parts[3] == "lin" || parts[3] == "linear") g.log = false;
  else throw ArgumentError(fmt::format("grid '{}': spacing must be log or lin", text));
  if (!(g.min < g.max)) throw ArgumentError(fmt::format("grid '{}': min must be below max", text));
  if (g.count < 3) throw ArgumentError(fmt::format("grid '{}': count must be at least 3", text));
  if (g.log && !(g.min > 0.0)) throw ArgumentError(fmt::format("grid '{}': log spacing needs min > 0", text));
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"heatlab: Nash entropy, parametrix and gradient-estimate checks on model spaces"};
  app.require_subcommand(1);
  RawOptions raw;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"entropy-table", "N(t) and dN/dt by both routes over a t-grid, with the fitted slope"},
      {"slope-fit", "Short-time entropy slope and residual exponent"},
      {"remainder-check", "Scaling of the parametrix remainder on B(r/2)"},
      {"inequality-scan", "Slack of a pointwise inequality over a (d, t) grid"},
      {"moments-verify", "Gaussian moment identities against the Wick expansion"},
  };
  std::map<std::string, std::map<std::string, CLI::Option*>> given;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    auto& opts = given[c.name];
    opts["model"] = sub->add_option("--model", raw.model, "euclidean:<n>, h3[:kappa], s2 or s1");
    opts["t-grid"] = sub->add_option("--t-grid", raw.tGrid, "min:max:count:log|lin");
    opts["d-grid"] = sub->add_option("--d-grid", raw.dGrid, "min:max:count:log|lin");
    opts["tol"] = sub->add_option("--tol", raw.tol, "absolute quadrature tolerance");
    opts["r"] = sub->add_option("--r", raw.r, "cutoff radius");
    opts["out"] = sub->add_option("--out", raw.out, "output file (default: $HEATLAB_OUT_DIR/<command>_<model>.<ext>)");
    opts["format"] = sub->add_option("--format", raw.format, "csv or json");
    opts["plot"] = sub->add_flag("--plot", raw.plot, "also write an SVG next to the table");
    opts["which"] = sub->add_option("--which", raw.which, "lyp, perelman, hamilton or liyau (inequality-scan)");
    opts["t0"] = sub->add_option("--t0", raw.t0, "time shift for the hamilton scan");
    sub->add_option("--config", raw.config, "flat key=value file; flags take precedence");
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "heatlab: " << e.what() << "\n\n" << app.help();
    return kBadConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  RunConfig cfg;
  std::optional<ModelSpace> model;
  try {
    Settings settings;
    if (!raw.config.empty()) settings = readConfigFile(raw.config);
    const std::map<std::string, std::string> flagValues = {
        {"model", raw.model}, {"t-grid", raw.tGrid}, {"d-grid", raw.dGrid}, {"tol", raw.tol},
        {"r", raw.r},         {"out", raw.out},      {"format", raw.format}, {"plot", raw.plot ? "true" : "false"},
        {"which", raw.which}, {"t0", raw.t0}};
    for (const auto& [key, opt] : given[command])
      if (opt->count() > 0) settings[key] = flagValues.at(key);
    cfg = toConfig(command, settings);
    if (cfg.model.empty()) {
      err << "heatlab: " << command << ": --model is required\n\n" << sub->help();
      return kBadConfig;
    }
    model = parseModel(cfg.model);
  } catch (const std::exception& e) {
    err << "heatlab: " << command << ": " << e.what() << "\n\n" << sub->help();
    return kBadConfig;
  }

  const ModelSpace& m = *model;
  const double r = cfg.r.value_or(m.defaultCutoffRadius());
  const double reach = std::min(3.0, m.injectivityRadius());
  GridSpec tDefault{1e-4, 1e-2, 10, true}, dDefault{0.0, reach, 31, false};
  if (command == "remainder-check") tDefault = {1e-3, 1e-1, 9, true}, dDefault = {0.0, r / 2, 11, false};
  if (command == "inequality-scan") tDefault = {1e-3, 1.0, 13, true};
  if (command == "inequality-scan" && cfg.which == "hamilton") tDefault = {1e-4, 0.05, 12, true};
  if (command == "moments-verify") tDefault = {1e-2, 1.0, 5, true};
  const std::vector<double> ts = cfg.tGrid.value_or(tDefault).values();
  const std::vector<double> ds = cfg.dGrid.value_or(dDefault).values();
  const Format format = cfg.format.value_or(command == "slope-fit" ? Format::Json : Format::Csv);

  Table table;
  try {
    if (command == "entropy-table") table = entropyTable(cfg, m, ts);
    else if (command == "slope-fit") table = slopeFit(cfg, m, ts);
    else if (command == "remainder-check") table = remainderCheck(cfg, m, ts, ds);
    else if (command == "inequality-scan") table = inequalityScan(cfg, m, ts, ds);
    else table = momentsVerify(cfg, m, ts);
  } catch (const NumericError& e) {
    err << "heatlab: " << command << ": numeric failure in " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "heatlab: " << command << ": " << e.what() << "\n";
    return kBadConfig;
  }

  const bool usesD = command == "remainder-check" || command == "inequality-scan";
  const Json echo = configEcho(cfg, m, ts, usesD ? std::span<const double>(ds) : std::span<const double>());
  const std::filesystem::path path = outputPath(cfg, m, format);
  try {
    writeFile(path, format == Format::Json ? renderJson(table, echo) : renderCsv(table, echo));
    if (cfg.plot) {
      std::filesystem::path plotPath = path;
      writeFile(plotPath.replace_extension(".svg"), table.svg);
    }
  } catch (const std::exception& e) {
    err << "heatlab: " << command << ": " << e.what() << "\n";
    return kBadConfig;
  }

  Json summary;
  summary["command"] = command;
  summary["model"] = m.name();
  summary["status"] = table.pass ? "pass" : "fail";
  summary["rows"] = table.rows.size();
  summary["out"] = path.string();
  summary["results"] = table.results;
  out << summary.dump() << "\n";
  return table.pass ? kOk : kCheckFailed;
}

}  // namespace heatlab::cli
