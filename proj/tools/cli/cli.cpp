#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ruelle/errors.hpp"
#include "ruelle/linalg.hpp"
#include "ruelle/orbit.hpp"
#include "ruelle/orbits.hpp"
#include "ruelle/traces.hpp"
#include "ruelle/transport.hpp"

namespace ruelle::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kHausdorffTolerance = 1e-3;
constexpr double kWedgeTolerance = 1e-10;
constexpr int kTrappedGrid = 201;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("bad number \"" + s + "\" in " + what);
  return v;
}

Rect parse_region(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw DomainError("--region needs re_min,re_max,im_min,im_max");
  return {to_double(parts[0], "--region"), to_double(parts[1], "--region"),
          to_double(parts[2], "--region"), to_double(parts[3], "--region")};
}

GridSize parse_grid(const std::string& text) {
  auto parts = split(text, 'x');
  if (parts.size() == 1) parts.push_back(parts[0]);
  if (parts.size() != 2) throw DomainError("--grid needs N or NxM");
  auto to_int = [](const std::string& s) {
    const double v = to_double(s, "--grid");
    if (v != std::floor(v) || v > 1e6) throw DomainError("--grid entries must be integers");
    return static_cast<int>(v);
  };
  return {to_int(parts[0]), to_int(parts[1])};
}

std::array<std::int64_t, 4> parse_matrix(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw DomainError("--A needs a,b,c,d (row-major)");
  std::array<std::int64_t, 4> a{};
  for (int i = 0; i < 4; ++i) {
    const double v = to_double(parts[i], "--A");
    if (v != std::floor(v) || std::abs(v) > 1e15) throw DomainError("--A entries must be integers");
    a[i] = static_cast<std::int64_t>(v);
  }
  return a;
}

Rect default_region(const RunConfig& cfg) {
  if (cfg.model == "cat") return {-1.0, 1.0, -7.0, 7.0};
  if (cfg.model == "horseshoe") return {-3.0, 0.0, -kPi, kPi};
  return {-4.5, -0.5, -3.5, 3.5};
}

std::vector<Complex> lambda_points(const RunConfig& cfg) {
  if (cfg.lambda) return {*cfg.lambda};
  if (!cfg.region || !cfg.grid) throw DomainError("give --lambda, or both --region and --grid");
  const Rect& r = *cfg.region;
  std::vector<Complex> pts;
  for (int j = 0; j < cfg.grid->ny; ++j) {
    for (int i = 0; i < cfg.grid->nx; ++i) {
      pts.emplace_back(r.re_min + r.width() * i / (cfg.grid->nx - 1),
                       r.im_min + r.height() * j / (cfg.grid->ny - 1));
    }
  }
  return pts;
}

// Rows of (column -> text) rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Columns holding text rather than numbers (quoted in JSON).
  std::vector<bool> text;

  std::string render(const std::string& format) const {
    std::string s;
    if (format == "csv") {
      s += fmt::format("{}\n", fmt::join(columns, ","));
      for (const auto& row : rows) s += fmt::format("{}\n", fmt::join(row, ","));
      return s;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json obj;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (text[c]) {
          obj[columns[c]] = row[c];
        } else {
          const double v = std::stod(row[c]);
          obj[columns[c]] = std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
        }
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

std::string orbits_command(const RunConfig& cfg) {
  const auto model = cfg.make_model();
  const auto cycles = model.enumerate_cycles(cfg.t_max);
  const auto orbits = expand_repetitions(cycles, cfg.t_max);
  Table t{{"model", "label", "primitive_period", "repetition", "period", "det_I_minus_P", "tr_P"},
          {},
          {true, true, false, false, false, false, false}};
  for (const auto& o : orbits) {
    t.rows.push_back({model.name, o.label(), num(o.primitive_period()),
                      std::to_string(o.repetition()), num(o.period()),
                      num(o.det_identity_minus_poincare()), num(wedge_trace(o.poincare(), 1))});
  }
  return t.render(cfg.format);
}

int orientation_beta(const ModelDescriptor& model, double t_max) {
  const auto cycles = model.enumerate_cycles(t_max);
  const auto orbits = expand_repetitions(cycles, t_max);
  if (orbits.empty()) throw DomainError("no closed orbits with T <= tmax; cannot fix beta");
  return check_orientability(orbits);
}

std::string trace_command(const RunConfig& cfg, bool zeta) {
  const auto model = cfg.make_model();
  const auto pts = lambda_points(cfg);
  const int beta = zeta && cfg.log_derivative ? orientation_beta(model, cfg.t_max) : 0;
  Table t{{"lambda_re", "lambda_im", "value_re", "value_im", "tail_estimate"}, {}, {false, false, false, false, false}};
  for (const Complex lambda : pts) {
    TraceValue v;
    if (!zeta) {
      v = trace_sum(model, lambda, cfg.t_max, cfg.degree);
    } else if (cfg.log_derivative) {
      v = zeta_log_derivative(model, lambda, cfg.t_max, Potential::zero(), beta);
    } else {
      v = zeta_product(model, lambda, cfg.t_max);
    }
    t.rows.push_back({num(lambda.real()), num(lambda.imag()), num(v.value.real()), num(v.value.imag()),
                      num(v.tail_estimate)});
  }
  return t.render(cfg.format);
}

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

struct CommandResult {
  std::string text;
  bool pass = true;
  std::vector<std::string> failures;
};

CommandResult resonances_command(const RunConfig& cfg) {
  if (cfg.format != "json") throw DomainError("resonances output is JSON only");
  const auto model = cfg.make_model();
  const Rect region = cfg.region.value_or(default_region(cfg));
  const auto report = verify_against_oracle(model, region, cfg.grid);

  std::vector<ResonanceReport> found = report.matched;
  found.insert(found.end(), report.unmatched_found.begin(), report.unmatched_found.end());
  std::sort(found.begin(), found.end(), [](const ResonanceReport& a, const ResonanceReport& b) {
    if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
    return a.position.imag() < b.position.imag();
  });
  ordered_json arr = ordered_json::array();
  for (const auto& r : found) {
    ordered_json o;
    o["model"] = model.name;
    o["lambda_re"] = r.position.real();
    o["lambda_im"] = r.position.imag();
    o["residue_re"] = r.residue.real();
    o["residue_im"] = r.residue.imag();
    o["method"] = std::string(to_string(r.method));
    o["position_error"] = finite_or_null(r.position_error);
    o["residue_error"] = finite_or_null(r.residue_error);
    if (r.matched_oracle) {
      o["oracle_match"] = {{"lambda_re", r.matched_oracle->position.real()},
                           {"lambda_im", r.matched_oracle->position.imag()},
                           {"rank", r.matched_oracle->rank}};
    } else {
      o["oracle_match"] = nullptr;
    }
    arr.push_back(std::move(o));
  }
  return {arr.dump(2) + "\n", report.pass, report.failures};
}

std::string resolvent_command(const RunConfig& cfg) {
  const auto model = cfg.make_model();
  const auto f = builtin_function(model, cfg.function);
  const Complex lambda = cfg.lambda.value_or(Complex(1.0, 0.0));
  const auto& box = model.section;
  Table t{{"x1", "x2", "x3", "u_re", "u_im", "error"}, {}, {false, false, false, false, false, false}};
  const int n = cfg.points;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point x{box.x_min + (box.x_max - box.x_min) * i / (n - 1),
                    box.y_min + (box.y_max - box.y_min) * j / (n - 1), box.third};
      if (!(model.rho(x) > 0.0)) continue;
      const auto u = resolvent_apply(model, f, lambda, x);
      t.rows.push_back({num(x[0]), num(x[1]), num(x[2]), num(u.value.real()), num(u.value.imag()),
                        num(u.error)});
    }
  }
  return t.render(cfg.format);
}

CommandResult verify_command(const RunConfig& cfg) {
  if (cfg.format != "json") throw DomainError("verify output is JSON only");
  const auto model = cfg.make_model();
  CommandResult result;
  ordered_json doc;
  doc["model"] = model.name;

  const auto convex = check_convexity(model, cfg.convexity_resolution);
  doc["convexity"] = {{"pass", convex.pass},
                      {"applicable", convex.applicable},
                      {"boundary_samples", convex.boundary_samples},
                      {"glancing_samples", convex.glancing_samples},
                      {"glancing_tolerance", convex.glancing_tolerance},
                      {"max_second_derivative", convex.max_second_derivative},
                      {"message", convex.message}};
  if (!convex.pass) result.failures.push_back("convexity: " + convex.message);

  const auto cone = certify_cones(model, default_cone_options(model));
  doc["cones"] = {{"pass", cone.pass},
                  {"aperture", cone.aperture},
                  {"t0", cone.t0},
                  {"required_factor", cone.required_factor},
                  {"forward_min_expansion", cone.forward_min_expansion},
                  {"backward_min_expansion", cone.backward_min_expansion},
                  {"max_image_aperture", cone.max_image_aperture},
                  {"sample_count", cone.sample_count},
                  {"message", cone.message}};
  if (!cone.pass) result.failures.push_back("cones: " + cone.message);

  {
    const auto late = trapped_set_approx(model, kTrappedGrid, cfg.trapped_time);
    const auto early = trapped_set_approx(model, kTrappedGrid, 0.5 * cfg.trapped_time);
    bool nested = true;
    for (std::size_t k = 0; k < late.trapped.size(); ++k) {
      nested = nested && (!late.gamma_plus[k] || early.gamma_plus[k]) &&
               (!late.gamma_minus[k] || early.gamma_minus[k]);
    }
    ordered_json trapped = {{"pass", false}, {"T", cfg.trapped_time}, {"grid", kTrappedGrid}, {"nested", nested}};
    bool pass = nested;
    if (model.in_tail) {
      const double hp = mask_hausdorff_distance(model, late, TailSet::gamma_plus);
      const double hm = mask_hausdorff_distance(model, late, TailSet::gamma_minus);
      trapped["hausdorff_gamma_plus"] = finite_or_null(hp);
      trapped["hausdorff_gamma_minus"] = finite_or_null(hm);
      pass = pass && hp <= kHausdorffTolerance && hm <= kHausdorffTolerance;
    } else {
      trapped["hausdorff_gamma_plus"] = nullptr;
      trapped["hausdorff_gamma_minus"] = nullptr;
    }
    trapped["pass"] = pass;
    doc["trapped"] = trapped;
    if (!pass) result.failures.push_back("trapped: masks not nested or too far from the exact tails");
  }

  {
    const auto cycles = model.enumerate_cycles(cfg.t_max);
    const auto orbits = expand_repetitions(cycles, cfg.t_max);
    double wedge_error = 0.0;
    for (const auto& o : orbits) {
      wedge_error = std::max(wedge_error, static_cast<double>(std::abs(wedge_identity_defect(o.poincare()))));
    }
    ordered_json orient = {{"pass", false}, {"beta", nullptr}, {"orbits", orbits.size()},
                           {"wedge_identity_max_error", wedge_error}};
    try {
      if (orbits.empty()) throw OrientabilityError("no closed orbits with T <= tmax", "");
      orient["beta"] = check_orientability(orbits);
      orient["pass"] = wedge_error <= kWedgeTolerance;
    } catch (const OrientabilityError& e) {
      orient["failure"] = e.what();
      orient["orbit"] = e.orbit_label();
    }
    if (!orient["pass"].get<bool>()) result.failures.push_back("orientability/wedge identity failed");
    doc["orientability"] = orient;
  }

  result.pass = result.failures.empty();
  doc["pass"] = result.pass;
  result.text = doc.dump(2) + "\n";
  return result;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw DomainError("cannot open output file " + cfg.out);
  file << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flag storage; a flag overrides config and defaults only when it was given.
struct Flags {
  std::string config, model, a, region, grid, out, format, function;
  std::vector<double> lambda;
  double lambda_re = 1.0, lambda_im = 0.0;
  double lambda_u = 0.0, lambda_s = 0.0, t_max = 0.0, trapped_time = 0.0;
  int degree = 0, convexity_resolution = 0;
  bool log_derivative = false;
};

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override it)");
  sub->add_option("--model", f.model, "basic | cat | horseshoe")
      ->check(CLI::IsMember({"basic", "cat", "horseshoe"}));
  sub->add_option("--A", f.a, "cat matrix a,b,c,d (row-major)");
  sub->add_option("--lambda-u", f.lambda_u, "horseshoe expansion rate");
  sub->add_option("--lambda-s", f.lambda_s, "horseshoe contraction rate");
  sub->add_option("--out", f.out, "output file (default: stdout)");
}

bool given(const CLI::App* sub, const std::string& name) {
  const auto* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

RunConfig assemble(const CLI::App* sub, const Flags& f) {
  RunConfig cfg;
  cfg.command = sub->get_name();
  if (cfg.command == "resonances" || cfg.command == "verify") cfg.format = "json";
  if (given(sub, "--config")) cfg = merge_config_json(read_file(f.config), cfg);
  if (given(sub, "--model")) cfg.model = f.model;
  if (given(sub, "--A")) cfg.a = parse_matrix(f.a);
  if (given(sub, "--lambda-u")) cfg.lambda_u = f.lambda_u;
  if (given(sub, "--lambda-s")) cfg.lambda_s = f.lambda_s;
  if (given(sub, "--tmax")) cfg.t_max = f.t_max;
  if (given(sub, "--degree")) cfg.degree = f.degree;
  if (given(sub, "--lambda")) cfg.lambda = Complex(f.lambda[0], f.lambda[1]);
  if (given(sub, "--lambda-re") || given(sub, "--lambda-im")) {
    const Complex base = cfg.lambda.value_or(Complex(1.0, 0.0));
    cfg.lambda = Complex(given(sub, "--lambda-re") ? f.lambda_re : base.real(),
                         given(sub, "--lambda-im") ? f.lambda_im : base.imag());
  }
  if (given(sub, "--region")) cfg.region = parse_region(f.region);
  if (given(sub, "--grid")) {
    const auto g = parse_grid(f.grid);
    if (cfg.command == "resolvent") {
      if (g.nx != g.ny) throw DomainError("resolvent --grid takes a single size n");
      cfg.points = g.nx;
    } else {
      cfg.grid = g;
    }
  }
  if (given(sub, "--log-derivative")) cfg.log_derivative = f.log_derivative;
  if (given(sub, "--f")) cfg.function = f.function;
  if (given(sub, "--trapped-time")) cfg.trapped_time = f.trapped_time;
  if (given(sub, "--convexity-grid")) cfg.convexity_resolution = f.convexity_resolution;
  if (given(sub, "--format")) cfg.format = f.format;
  if (given(sub, "--out")) cfg.out = f.out;
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  if (model != "basic" && model != "cat" && model != "horseshoe") {
    throw DomainError("unknown model \"" + model + "\"");
  }
  // Enumeration is capped at kMaxSymbolLength period units.
  const double max_time = kMaxSymbolLength * (model == "basic" ? 2.0 * kPi : 1.0);
  if (!(t_max > 0.0) || t_max > max_time) {
    throw DomainError(fmt::format("tmax must lie in (0, {:.6g}] for {}", max_time, model));
  }
  if (degree < 0 || degree > 2) throw DomainError("degree must be 0, 1 or 2");
  if (grid && (grid->nx < 2 || grid->ny < 2)) throw DomainError("grids need at least 2 points per axis");
  if (region && !(region->re_min < region->re_max && region->im_min < region->im_max)) {
    throw DomainError("region must satisfy re_min < re_max and im_min < im_max");
  }
  if (points < 2) throw DomainError("resolvent grid needs at least 2 points per axis");
  if (!(trapped_time > 0.0)) throw DomainError("trapped_time must be positive");
  if (convexity_resolution < 2) throw DomainError("convexity grid needs at least 2 samples per axis");
  if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
  if (!(lambda_u > 0.0) || !(lambda_s > 0.0)) throw DomainError("horseshoe rates must be positive");
}

ModelDescriptor RunConfig::make_model() const {
  if (model == "cat") return cat_suspension({a[0], a[1], a[2], a[3]});
  if (model == "horseshoe") return horseshoe_suspension(lambda_u, lambda_s);
  return basic_example();
}

RunConfig merge_config_json(std::string_view json_text, RunConfig base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  try {
    if (j.contains("model")) base.model = j.at("model").get<std::string>();
    if (j.contains("A")) {
      const auto& rows = j.at("A");
      if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
        throw DomainError("\"A\" must be a 2x2 integer matrix");
      }
      base.a = {rows[0][0].get<std::int64_t>(), rows[0][1].get<std::int64_t>(),
                rows[1][0].get<std::int64_t>(), rows[1][1].get<std::int64_t>()};
    }
    base.lambda_u = j.value("lambda_u", base.lambda_u);
    base.lambda_s = j.value("lambda_s", base.lambda_s);
    base.t_max = j.value("tmax", base.t_max);
    base.degree = j.value("degree", base.degree);
    if (j.contains("lambda")) {
      const auto l = j.at("lambda").get<std::vector<double>>();
      if (l.size() != 2) throw DomainError("\"lambda\" must be [re, im]");
      base.lambda = Complex(l[0], l[1]);
    }
    if (j.contains("region")) {
      const auto r = j.at("region").get<std::vector<double>>();
      if (r.size() != 4) throw DomainError("\"region\" must be [re_min, re_max, im_min, im_max]");
      base.region = Rect{r[0], r[1], r[2], r[3]};
    }
    if (j.contains("grid")) {
      const auto g = j.at("grid").get<std::vector<int>>();
      if (g.size() != 2) throw DomainError("\"grid\" must be [nx, ny]");
      base.grid = GridSize{g[0], g[1]};
    }
    base.log_derivative = j.value("log_derivative", base.log_derivative);
    base.function = j.value("f", base.function);
    base.points = j.value("points", base.points);
    base.trapped_time = j.value("trapped_time", base.trapped_time);
    base.convexity_resolution = j.value("convexity_resolution", base.convexity_resolution);
    base.out = j.value("out", base.out);
    base.format = j.value("format", base.format);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
  return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pollicott-Ruelle resonances of model open hyperbolic flows", "ruelle"};
  app.require_subcommand(1);
  Flags f;

  auto* orbits = app.add_subcommand("orbits", "list closed orbits (gamma, T) with T <= tmax as CSV");
  auto* trace = app.add_subcommand("trace", "truncated trace sum F_l(lambda)");
  auto* zeta = app.add_subcommand("zeta", "truncated zeta product or its log-derivative");
  auto* resonances = app.add_subcommand("resonances", "locate poles and check them against the oracle");
  auto* resolvent = app.add_subcommand("resolvent", "apply R(lambda) to a built-in bump on a grid");
  auto* verify = app.add_subcommand("verify", "convexity, cone, trapped-set and orientability checks");

  for (auto* sub : {orbits, trace, zeta, resonances, resolvent, verify}) add_model_flags(sub, f);
  for (auto* sub : {orbits, trace, zeta, verify}) {
    sub->add_option("--tmax", f.t_max, "largest orbit period");
  }
  for (auto* sub : {orbits, trace, zeta, resolvent}) {
    sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  }
  for (auto* sub : {trace, zeta, resolvent}) {
    sub->add_option("--lambda", f.lambda, "spectral parameter: re im")->expected(2)->allow_extra_args(false);
  }
  for (auto* sub : {trace, zeta, resonances}) {
    sub->add_option("--region", f.region, "re_min,re_max,im_min,im_max");
  }
  for (auto* sub : {trace, zeta, resonances, resolvent}) {
    sub->add_option("--grid", f.grid, "NxM (n for resolvent)");
  }
  trace->add_option("--degree", f.degree, "wedge degree l");
  zeta->add_flag("--log-derivative", f.log_derivative, "zeta'/zeta as the alternating trace sum");
  resolvent->add_option("--lambda-re", f.lambda_re, "Re lambda (default 1)");
  resolvent->add_option("--lambda-im", f.lambda_im, "Im lambda (default 0)");
  resolvent->add_option("--f", f.function, "bump | bump-k<N>");
  verify->add_option("--trapped-time", f.trapped_time, "escape-time threshold T for the masks");
  verify->add_option("--convexity-grid", f.convexity_resolution, "boundary samples per axis");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kSuccess;
    err << app.help();
    return kUsageError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const RunConfig cfg = assemble(sub, f);
    if (cfg.command == "orbits") {
      emit(cfg, orbits_command(cfg), out);
    } else if (cfg.command == "trace" || cfg.command == "zeta") {
      emit(cfg, trace_command(cfg, cfg.command == "zeta"), out);
    } else if (cfg.command == "resolvent") {
      emit(cfg, resolvent_command(cfg), out);
    } else {
      const auto result = cfg.command == "resonances" ? resonances_command(cfg) : verify_command(cfg);
      emit(cfg, result.text, out);
      for (const auto& msg : result.failures) err << "verification failed: " << msg << "\n";
      return result.pass ? kSuccess : kVerificationFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kSuccess;
}

}  // namespace ruelle::cli
