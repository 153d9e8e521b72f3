#include "ruelle/orbits.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ruelle {

namespace {

void require_symbol_length(int n, const char* what) {
  if (n < 1 || n > kMaxSymbolLength) {
    throw DomainError(std::string(what) + " must lie in [1, " +
                      std::to_string(kMaxSymbolLength) + "], got " + std::to_string(n));
  }
}

// Duval's algorithm over {0, 1}; calls visit(word) in lexicographic order.
template <class Visit>
void duval(int n_max, Visit&& visit) {
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    visit(w);
    const std::size_t m = w.size();
    while (w.size() < static_cast<std::size_t>(n_max)) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == 1) w.pop_back();
  }
}

std::int64_t mod_floor(int128 x, std::int64_t m) {
  auto r = static_cast<std::int64_t>(x % m);
  return r < 0 ? r + m : r;
}

Matrix to_matrix(const IntMatrix2& m) {
  Matrix out(2, 2);
  out << static_cast<double>(m.a), static_cast<double>(m.b), static_cast<double>(m.c),
      static_cast<double>(m.d);
  return out;
}

}  // namespace

std::vector<std::string> lyndon_words(int n_max) {
  require_symbol_length(n_max, "n_max");
  std::vector<std::string> words;
  duval(n_max, [&](const std::vector<int>& w) {
    std::string s(w.size(), '0');
    for (std::size_t i = 0; i < w.size(); ++i) s[i] = static_cast<char>('0' + w[i]);
    words.push_back(std::move(s));
  });
  std::stable_sort(words.begin(), words.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return words;
}

std::vector<std::int64_t> lyndon_counts(int n_max) {
  require_symbol_length(n_max, "n_max");
  std::vector<std::int64_t> counts(n_max + 1, 0);
  duval(n_max, [&](const std::vector<int>& w) { ++counts[w.size()]; });
  return counts;
}

std::vector<PrimitiveCycle> lyndon_cycles(int n_max, const HorseshoeParams& params) {
  std::vector<PrimitiveCycle> cycles;
  for (auto& word : lyndon_words(n_max)) {
    const int n = static_cast<int>(word.size());
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = std::pow(params.lambda_u, -n);
    p(1, 1) = std::pow(params.lambda_s, -n);
    cycles.push_back({std::move(word), n, static_cast<double>(n), std::move(p), {}});
  }
  return cycles;
}

std::int64_t cat_fixed_point_count(const IntMatrix2& a, int n) {
  require_symbol_length(n, "period");
  const std::int64_t d = (a.pow(n) - IntMatrix2::identity()).det();
  if (d == 0) throw DomainError("det(A^n - I) = 0: A is not hyperbolic");
  return d < 0 ? -d : d;
}

std::vector<TorusPoint> cat_fixed_points(const IntMatrix2& a, int n) {
  require_symbol_length(n, "period");
  const IntMatrix2 m = a.pow(n) - IntMatrix2::identity();
  const std::int64_t d = m.det();
  if (d == 0) throw DomainError("det(A^n - I) = 0: A is not hyperbolic");
  const std::int64_t den = d < 0 ? -d : d;
  if (den > kMaxMaterializedPoints) {
    throw EnumerationLimit("|det(A^n - I)| = " + std::to_string(den) +
                           " exceeds the materialization limit");
  }

  // Column-style Hermite reduction M U = [[h11, 0], [h21, h22]] with U
  // unimodular, so M Z^2 = H Z^2 and {0..|h11|-1} x {0..|h22|-1} is a
  // fundamental domain of Z^2 / M Z^2.
  std::int64_t s = 0, t = 0;
  {
    std::int64_t old_r = m.a, r = m.b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
      const std::int64_t q = old_r / r;
      old_r = std::exchange(r, old_r - q * r);
      old_s = std::exchange(s1, old_s - q * s1);
      old_t = std::exchange(t1, old_t - q * t1);
    }
    s = old_s;
    t = old_t;
    if (old_r < 0) {
      s = -s;
      t = -t;
    }
  }
  const std::int64_t g = std::gcd(m.a, m.b);
  const IntMatrix2 u{s, -m.b / g, t, m.a / g};
  const IntMatrix2 h = m * u;
  const std::int64_t h11 = h.a < 0 ? -h.a : h.a;
  const std::int64_t h22 = h.d < 0 ? -h.d : h.d;
  if (h.b != 0 || h11 * h22 != den) throw Error("internal: Hermite reduction failed");

  // x = adj(M) k / det(M), reduced mod 1 with common denominator |det M|.
  const IntMatrix2 adj = m.adjugate();
  const std::int64_t sign = d < 0 ? -1 : 1;
  std::vector<TorusPoint> points;
  points.reserve(static_cast<std::size_t>(den));
  for (std::int64_t k1 = 0; k1 < h11; ++k1) {
    for (std::int64_t k2 = 0; k2 < h22; ++k2) {
      const int128 px = (static_cast<int128>(adj.a) * k1 + static_cast<int128>(adj.b) * k2) * sign;
      const int128 py = (static_cast<int128>(adj.c) * k1 + static_cast<int128>(adj.d) * k2) * sign;
      points.push_back({mod_floor(px, den), mod_floor(py, den), den});
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (static_cast<std::int64_t>(points.size()) != den) {
    throw Error("internal: fixed-point enumeration produced duplicates");
  }
  return points;
}

std::vector<PrimitiveCycle> cat_cycles(const IntMatrix2& a, int n) {
  const auto points = cat_fixed_points(a, n);
  const auto orbits = group_into_cycles<TorusPoint>(
      points, [&a](const TorusPoint& x) { return apply_mod1(a, x); }, n);
  const IntMatrix2 an = a.pow(n);
  // (A^n)^{-T} with det A^n = 1.
  const Matrix poincare = to_matrix({an.d, -an.c, -an.b, an.a});
  std::vector<PrimitiveCycle> cycles;
  cycles.reserve(orbits.size());
  for (const auto& orbit : orbits) {
    std::string label;
    for (const auto& x : orbit) {
      if (!label.empty()) label += ' ';
      label += x.str();
    }
    cycles.push_back({std::move(label), n, static_cast<double>(n), poincare, {}});
  }
  return cycles;
}

std::vector<TorusPoint> parse_cat_label(const std::string& label) {
  auto parse_rational = [](const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  };
  std::vector<std::pair<Rational, Rational>> coords;
  std::istringstream in(label);
  std::string token;
  std::int64_t den = 1;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw DomainError("malformed cat cycle label: " + label);
    Rational x = parse_rational(token.substr(0, colon));
    Rational y = parse_rational(token.substr(colon + 1));
    den = std::lcm(den, std::lcm(x.den(), y.den()));
    coords.emplace_back(x, y);
  }
  std::vector<TorusPoint> points;
  for (const auto& [x, y] : coords) {
    points.push_back({x.num() * (den / x.den()), y.num() * (den / y.den()), den});
  }
  return points;
}

Matrix poincare_of_cycle(const ModelDescriptor& model, const PrimitiveCycle& cycle, int start) {
  const int n = cycle.length;
  Matrix d = model.step_differential(cycle, ((start % n) + n) % n);
  for (int k = 1; k < n; ++k) {
    d = model.step_differential(cycle, (start + k) % n) * d;
  }
  return inverse_transpose(d);
}

int moebius(int n) {
  if (n < 1) throw DomainError("moebius needs n >= 1");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

OrbitCountTable count_orbits(const ModelDescriptor& model, double t_max) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  const int steps = static_cast<int>(std::floor(t_max / model.period_unit + 1e-9));
  if (steps > kMaxSymbolLength) {
    throw EnumerationLimit("orbit counting is limited to " + std::to_string(kMaxSymbolLength) +
                           " period units");
  }
  OrbitCountTable table;
  if (steps < 1) return table;
  const auto primitive = model.primitive_cycle_counts(steps);
  for (int k = 1; k <= steps; ++k) {
    std::int64_t n = 0;
    for (int d = 1; d <= k; ++d) n += primitive[d] * (k / d);
    table.entries.push_back({k * model.period_unit, n});
  }

  std::vector<double> ts, ys;
  for (std::size_t i = (2 * table.entries.size()) / 3; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    if (e.count <= 0) continue;
    ts.push_back(e.t);
    ys.push_back(std::log(e.t * static_cast<double>(e.count)));
  }
  if (ts.size() >= 2) {
    const double n = static_cast<double>(ts.size());
    const double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      sxy += (ts[i] - mt) * (ys[i] - my);
      sxx += (ts[i] - mt) * (ts[i] - mt);
    }
    table.growth_rate = sxy / sxx;
  }
  return table;
}

}  // namespace ruelle
