#include "ruelle/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "ruelle/errors.hpp"
#include "ruelle/numeric.hpp"
#include "ruelle/orbits.hpp"

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleGuard = 1e-8;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix to_matrix(const IntMatrix2& m) {
  Matrix out(2, 2);
  out << static_cast<double>(m.a), static_cast<double>(m.b), static_cast<double>(m.c),
      static_cast<double>(m.d);
  return out;
}

// Strip geometry of the affine horseshoe on [0,1]^2: branch i maps
// V_i = [a_i, a_i + 1/lambda_u] x [0,1] onto [0,1] x [b_i, b_i + lambda_s].
struct HorseshoeGeometry {
  double margin;
  std::array<double, 2> a;
  std::array<double, 2> b;

  explicit HorseshoeGeometry(const HorseshoeParams& p) {
    const bool disjoint = p.lambda_u > 2.0 && p.lambda_s < 0.5;
    margin = disjoint ? std::min({0.05, (1.0 - 2.0 / p.lambda_u) / 4.0, (1.0 - 2.0 * p.lambda_s) / 4.0})
                      : 0.0;
    a = {margin, 1.0 - margin - 1.0 / p.lambda_u};
    b = {margin, 1.0 - margin - p.lambda_s};
  }
};

ModelDescriptor make_basic() {
  ModelDescriptor m;
  m.name = "basic";
  m.kind = ModelKind::basic;
  m.stable_dim = 1;
  m.hyperbolicity_constant = 1.0;
  m.hyperbolicity_rate = 1.0;
  m.period_unit = kTwoPi;
  m.flow = [](const Point& x, double t) -> Point {
    return {std::exp(t) * x[0], std::exp(-t) * x[1], wrap(x[2] + t, kTwoPi)};
  };
  m.vector_field = [](const Point& x) -> Point { return {x[0], -x[1], 1.0}; };
  m.rho = [](const Point& x) { return 1.0 - x[0] * x[0] - x[1] * x[1]; };
  m.rho_x = [](const Point& x) { return -2.0 * x[0] * x[0] + 2.0 * x[1] * x[1]; };
  m.rho_xx = [](const Point& x) { return -4.0 * x[0] * x[0] - 4.0 * x[1] * x[1]; };
  m.boundary_point = [](double u, double v) -> Point {
    return {std::cos(kTwoPi * u), std::sin(kTwoPi * u), kTwoPi * v};
  };
  m.enumerate_cycles = [](double t_max) {
    std::vector<PrimitiveCycle> cycles;
    if (kTwoPi <= t_max * (1.0 + 1e-12)) {
      // d phi^{2pi} = diag(e^{2pi}, e^{-2pi}) on span{d/dx1, d/dx2}.
      cycles.push_back({"K", 1, kTwoPi, diag2(std::exp(-kTwoPi), std::exp(kTwoPi)), {}});
    }
    return cycles;
  };
  m.primitive_cycle_counts = [](int n_max) {
    std::vector<std::int64_t> counts(n_max + 1, 0);
    if (n_max >= 1) counts[1] = 1;
    return counts;
  };
  m.cycle_points = [](const PrimitiveCycle&) { return std::vector<Point>{{0.0, 0.0, 0.0}}; };
  m.step_differential = [](const PrimitiveCycle&, int) {
    return diag2(std::exp(kTwoPi), std::exp(-kTwoPi));
  };
  m.transversal_differential = [](double t) { return diag2(std::exp(t), std::exp(-t)); };
  m.escape_closed_form = [](const Point& x, int sign) -> std::optional<double> {
    // rho(phi^t x) = 0  <=>  a u^2 - u + b = 0 with u = e^{2t} (forward);
    // the discriminant 1 - 4ab is positive on U since a + b < 1.
    const double a = x[0] * x[0];
    const double b = x[1] * x[1];
    const double lead = sign > 0 ? a : b;
    if (lead == 0.0) return std::nullopt;
    const double u = (1.0 + std::sqrt(1.0 - 4.0 * a * b)) / (2.0 * lead);
    return sign * 0.5 * std::log(u);
  };
  m.in_tail = [](const Point& x, int sign) { return sign > 0 ? x[1] == 0.0 : x[0] == 0.0; };
  m.section = {-1.0, 1.0, -1.0, 1.0, 0.0};
  m.escape_step = 0.05;
  m.event_spacing = 0.0;
  return m;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::basic: return "basic";
    case ModelKind::cat: return "cat";
    case ModelKind::horseshoe: return "horseshoe";
  }
  return "unknown";
}

double CatParams::expanding_eigenvalue() const {
  const double tr = static_cast<double>(a.trace());
  return (std::abs(tr) + std::sqrt(tr * tr - 4.0)) / 2.0;
}

ModelDescriptor basic_example() { return make_basic(); }

ModelDescriptor cat_suspension(const IntMatrix2& a) {
  if (a.det() != 1) throw DomainError("cat map needs det A = 1");
  const std::int64_t tr = a.trace();
  if (tr >= -2 && tr <= 2) throw DomainError("cat map needs |tr A| > 2 (hyperbolic)");

  ModelDescriptor m;
  m.name = "cat";
  m.kind = ModelKind::cat;
  CatParams params{a};
  m.params = params;
  m.stable_dim = 1;
  m.period_unit = 1.0;
  m.hyperbolicity_rate = std::log(params.expanding_eigenvalue());
  {
    Eigen::EigenSolver<Matrix> es(to_matrix(a));
    Matrix v = es.eigenvectors().real();
    v.col(0).normalize();
    v.col(1).normalize();
    Eigen::JacobiSVD<Matrix> svd(v);
    m.hyperbolicity_constant = svd.singularValues()(0) / svd.singularValues()(1);
  }

  const Matrix fwd = to_matrix(a);
  const Matrix bwd = to_matrix(a.adjugate());
  m.flow = [fwd, bwd](const Point& x, double t) -> Point {
    const double total = x[2] + t;
    const double steps = std::floor(total);
    const Matrix& step = steps >= 0 ? fwd : bwd;
    double px = x[0], py = x[1];
    for (long k = 0, n = static_cast<long>(std::abs(steps)); k < n; ++k) {
      const double nx = step(0, 0) * px + step(0, 1) * py;
      const double ny = step(1, 0) * px + step(1, 1) * py;
      px = wrap(nx, 1.0);
      py = wrap(ny, 1.0);
    }
    return {px, py, total - steps};
  };
  m.vector_field = [](const Point&) -> Point { return {0.0, 0.0, 1.0}; };
  m.rho = [](const Point&) { return 1.0; };
  m.enumerate_cycles = [a](double t_max) {
    std::vector<PrimitiveCycle> cycles;
    const int n_max = static_cast<int>(std::floor(t_max + 1e-9));
    for (int n = 1; n <= n_max; ++n) {
      auto block = cat_cycles(a, n);
      std::move(block.begin(), block.end(), std::back_inserter(cycles));
    }
    return cycles;
  };
  m.primitive_cycle_counts = [a](int n_max) {
    std::vector<std::int64_t> fix(n_max + 1, 0), counts(n_max + 1, 0);
    for (int n = 1; n <= n_max; ++n) fix[n] = cat_fixed_point_count(a, n);
    for (int d = 1; d <= n_max; ++d) {
      std::int64_t sum = 0;
      for (int e = 1; e <= d; ++e) {
        if (d % e == 0) sum += moebius(d / e) * fix[e];
      }
      counts[d] = sum / d;
    }
    return counts;
  };
  m.cycle_points = [](const PrimitiveCycle& cycle) {
    std::vector<Point> out;
    for (const auto& x : parse_cat_label(cycle.label)) {
      out.push_back({x.x().to_double(), x.y().to_double(), 0.0});
    }
    return out;
  };
  m.step_differential = [fwd](const PrimitiveCycle&, int) { return fwd; };
  m.transversal_differential = [fwd](double t) {
    return matrix_power(fwd, static_cast<int>(std::lround(t)));
  };
  m.escape_closed_form = [](const Point&, int) -> std::optional<double> { return std::nullopt; };
  m.in_tail = [](const Point&, int) { return true; };
  m.section = {0.0, 1.0, 0.0, 1.0, 0.5};
  m.escape_step = 0.05;
  m.event_spacing = 1.0;
  return m;
}

ModelDescriptor horseshoe_suspension(double lambda_u, double lambda_s) {
  if (!(lambda_u > 1.0) || !std::isfinite(lambda_u)) {
    throw DomainError("horseshoe needs lambda_u > 1");
  }
  if (!(lambda_s > 0.0 && lambda_s < 1.0)) throw DomainError("horseshoe needs 0 < lambda_s < 1");

  ModelDescriptor m;
  m.name = "horseshoe";
  m.kind = ModelKind::horseshoe;
  const HorseshoeParams params{lambda_u, lambda_s};
  m.params = params;
  const HorseshoeGeometry geo(params);
  m.geometric = geo.margin > 0.0;
  m.stable_dim = 1;
  m.period_unit = 1.0;
  m.hyperbolicity_constant = 1.0;
  m.hyperbolicity_rate = std::min(std::log(lambda_u), -std::log(lambda_s));

  m.flow = [params, geo](const Point& x, double t) -> Point {
    const double total = x[2] + t;
    const double steps = std::floor(total);
    double px = x[0], py = x[1];
    for (long k = 0, n = static_cast<long>(std::abs(steps)); k < n; ++k) {
      if (steps > 0) {
        const int i = px < 0.5 ? 0 : 1;
        px = params.lambda_u * (px - geo.a[i]);
        py = params.lambda_s * py + geo.b[i];
      } else {
        const int i = py < 0.5 ? 0 : 1;
        px = px / params.lambda_u + geo.a[i];
        py = (py - geo.b[i]) / params.lambda_s;
      }
    }
    return {px, py, total - steps};
  };
  m.vector_field = [](const Point&) -> Point { return {0.0, 0.0, 1.0}; };
  m.rho = [params, geo](const Point& x) {
    const double w = 1.0 / params.lambda_u;
    double strip = -1.0;
    for (double a : geo.a) strip = std::max(strip, (x[0] - a) * (a + w - x[0]) / (w * w));
    const double vertical = x[1] * (1.0 - x[1]);
    return strip > 0.0 && vertical > 0.0 ? 16.0 * strip * vertical : std::min(strip, vertical);
  };
  m.enumerate_cycles = [params](double t_max) {
    const int n_max = static_cast<int>(std::floor(t_max + 1e-9));
    return n_max >= 1 ? lyndon_cycles(n_max, params) : std::vector<PrimitiveCycle>{};
  };
  m.primitive_cycle_counts = [](int n_max) { return lyndon_counts(n_max); };
  m.cycle_points = [params](const PrimitiveCycle& cycle) {
    std::vector<Point> out;
    std::string word = cycle.label;
    for (std::size_t k = 0; k < word.size(); ++k) {
      const auto xy = horseshoe_periodic_point(word, params);
      out.push_back({xy[0], xy[1], 0.0});
      std::rotate(word.begin(), word.begin() + 1, word.end());
    }
    return out;
  };
  const Matrix step = diag2(lambda_u, lambda_s);
  m.step_differential = [step](const PrimitiveCycle&, int) { return step; };
  m.transversal_differential = [params](double t) {
    const double n = static_cast<double>(std::lround(t));
    return diag2(std::pow(params.lambda_u, n), std::pow(params.lambda_s, n));
  };
  m.section = {0.0, 1.0, 0.0, 1.0, 0.5};
  m.escape_step = 0.05;
  m.event_spacing = 1.0;
  return m;
}

std::array<double, 2> horseshoe_periodic_point(const std::string& word,
                                               const HorseshoeParams& params) {
  const HorseshoeGeometry geo(params);
  const int n = static_cast<int>(word.size());
  if (n == 0) throw DomainError("empty horseshoe word");
  // x_k = a_{w_k} + x_{k+1} / lambda_u and y_{k+1} = lambda_s y_k + b_{w_k}.
  double x = 0.0, y = 0.0;
  for (int k = 0; k < n; ++k) {
    const int i = word[k] - '0';
    if (i != 0 && i != 1) throw DomainError("horseshoe words are binary");
    x += geo.a[i] * std::pow(params.lambda_u, -k);
    y += geo.b[i] * std::pow(params.lambda_s, n - 1 - k);
  }
  x /= 1.0 - std::pow(params.lambda_u, -n);
  y /= 1.0 - std::pow(params.lambda_s, n);
  return {x, y};
}

ModelDescriptor model_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("model")) throw DomainError("model config needs a \"model\" key");
  const auto name = j.at("model").get<std::string>();
  try {
    if (name == "basic") return basic_example();
    if (name == "cat") {
      IntMatrix2 a{2, 1, 1, 1};
      if (j.contains("A")) {
        const auto& rows = j.at("A");
        if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
          throw DomainError("\"A\" must be a 2x2 integer matrix");
        }
        a = {rows[0][0].get<std::int64_t>(), rows[0][1].get<std::int64_t>(),
             rows[1][0].get<std::int64_t>(), rows[1][1].get<std::int64_t>()};
      }
      return cat_suspension(a);
    }
    if (name == "horseshoe") {
      return horseshoe_suspension(j.value("lambda_u", 3.0), j.value("lambda_s", 0.25));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad model parameter: ") + e.what());
  }
  throw DomainError("unknown model \"" + name + "\"");
}

Complex oracle_trace(const ModelDescriptor& model, Complex lambda) {
  switch (model.kind) {
    case ModelKind::basic: {
      if (lambda.real() <= -1.0) {
        const double l = std::round(-1.0 - lambda.real());
        const double k = std::round(lambda.imag());
        if (l >= 0.0 && std::abs(lambda - Complex(-1.0 - l, k)) < kPoleGuard) {
          throw PoleError("basic-example trace has a pole at lambda = -1 - l + ik");
        }
        throw DomainError("closed-form series needs Re lambda > -1");
      }
      // pi e^{-2 pi m lambda} / (cosh(2 pi m) - 1) = 2 pi e^{-2 pi m (lambda+1)} / (1 - e^{-2 pi m})^2
      Complex sum = 0.0;
      for (int m = 1; m < 10'000'000; ++m) {
        const double q = -std::expm1(-kTwoPi * m);
        const Complex term = kTwoPi * std::exp(-kTwoPi * m * (lambda + 1.0)) / (q * q);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      }
      return sum;
    }
    case ModelKind::cat: {
      const double k = std::round(lambda.imag() / kTwoPi);
      if (std::abs(lambda - Complex(0.0, kTwoPi * k)) < kPoleGuard) {
        throw PoleError("cat-suspension trace has a pole at lambda = 2 pi i k");
      }
      return 1.0 / expm1(lambda);
    }
    case ModelKind::horseshoe: {
      const auto& p = std::get<HorseshoeParams>(model.params);
      const double ratio = 2.0 * p.lambda_s * std::exp(-lambda.real());
      if (!(ratio < 1.0)) throw DomainError("horseshoe series needs Re lambda > log(2 lambda_s)");
      // sum_n 2^n e^{-lambda n} / |det(I - P_n)|, grouped by n.
      Complex sum = 0.0;
      const Complex z = 2.0 * p.lambda_s * std::exp(-lambda);
      Complex zn = 1.0;
      for (int n = 1; n < 10'000'000; ++n) {
        zn *= z;
        const double det = (1.0 - std::pow(p.lambda_u, -n)) * (1.0 - std::pow(p.lambda_s, n));
        const Complex term = zn / det;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      }
      return sum;
    }
  }
  throw DomainError("model has no trace oracle");
}

ResonanceOracle resonance_oracle(const ModelDescriptor& model, const Rect& region) {
  ResonanceOracle oracle;
  oracle.validity = region;
  auto& poles = oracle.poles;
  switch (model.kind) {
    case ModelKind::basic:
      for (int l = 0; -1.0 - l >= region.re_min; ++l) {
        for (auto k = static_cast<long>(std::ceil(region.im_min)); k <= std::floor(region.im_max); ++k) {
          const Complex z(-1.0 - l, static_cast<double>(k));
          if (region.contains(z)) poles.push_back({z, l + 1});
        }
      }
      break;
    case ModelKind::cat:
      for (auto k = static_cast<long>(std::ceil(region.im_min / kTwoPi));
           k * kTwoPi <= region.im_max; ++k) {
        const Complex z(0.0, kTwoPi * static_cast<double>(k));
        if (region.contains(z)) poles.push_back({z, 1});
      }
      break;
    case ModelKind::horseshoe: {
      const auto& p = std::get<HorseshoeParams>(model.params);
      const double lu = std::log(p.lambda_u);
      const double ls = std::log(p.lambda_s);
      for (int j = 0; std::log(2.0) - j * lu + ls >= region.re_min; ++j) {
        for (int k = 0;; ++k) {
          const double re = std::log(2.0) - j * lu + (k + 1) * ls;
          if (re < region.re_min) break;
          for (auto m = static_cast<long>(std::ceil(region.im_min / kTwoPi));
               m * kTwoPi <= region.im_max; ++m) {
            const Complex z(re, kTwoPi * static_cast<double>(m));
            if (!region.contains(z)) continue;
            auto same = std::find_if(poles.begin(), poles.end(),
                                     [&](const OraclePole& q) { return std::abs(q.position - z) < 1e-9; });
            if (same != poles.end()) {
              same->rank += 1;
            } else {
              poles.push_back({z, 1});
            }
          }
        }
      }
      break;
    }
  }
  std::sort(poles.begin(), poles.end(), [](const OraclePole& a, const OraclePole& b) {
    if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
    return a.position.imag() < b.position.imag();
  });
  return oracle;
}

}  // namespace ruelle
