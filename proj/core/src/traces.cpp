#include "ruelle/traces.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "ruelle/errors.hpp"
#include "ruelle/numeric.hpp"

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates per-period-block contributions and extrapolates the tail
// geometrically from the last two non-empty blocks. Block ratios of these
// models creep up towards their limit, so the one-ratio extrapolation can
// fall just short of the true tail; it is doubled.
class BlockTail {
 public:
  explicit BlockTail(double unit) : unit_(unit) {}

  void add(double period, Complex contribution) {
    blocks_[std::llround(period / unit_)] += contribution;
  }

  // Sets tail_estimate and abscissa_margin.
  void finish(TraceValue& out) const {
    if (blocks_.size() < 2) return;
    auto last = blocks_.rbegin();
    auto prev = std::next(last);
    const double mag_last = std::abs(last->second);
    const double mag_prev = std::abs(prev->second);
    if (mag_last == 0.0) {
      out.tail_estimate = 0.0;
      return;
    }
    if (mag_prev == 0.0) return;
    const double gap = static_cast<double>(last->first - prev->first);
    const double r = std::pow(mag_last / mag_prev, 1.0 / gap);
    out.abscissa_margin = -std::log(r) / unit_;
    out.tail_estimate = r < 1.0 ? kSafety * mag_last * r / (1.0 - r) : kInf;
  }

 private:
  static constexpr double kSafety = 2.0;
  double unit_;
  std::map<long long, Complex> blocks_;
};

std::vector<PrimitiveCycle> cycles_with_potential(const ModelDescriptor& model, double t_max,
                                                  const Potential& potential) {
  auto cycles = model.enumerate_cycles(t_max);
  for (auto& c : cycles) c.primitive_potential_average = potential.average(c);
  return cycles;
}

// pi sum_m e^{-2 pi m lambda} / (cosh(2 pi m) - 1), written to avoid cosh overflow.
Complex basic_series(Complex lambda) {
  Complex sum = 0.0;
  for (int m = 1; m < 1'000'000; ++m) {
    const double q = -std::expm1(-kTwoPi * m);
    const Complex term = kTwoPi * std::exp(-kTwoPi * m * (lambda + 1.0)) / (q * q);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

Potential Potential::zero() {
  return {[](const PrimitiveCycle&) { return Complex{}; }};
}

Potential Potential::constant(Complex c) {
  return {[c](const PrimitiveCycle&) { return c; }};
}

TraceValue trace_sum(const ModelDescriptor& model, Complex lambda, double t_max, int degree,
                     const Potential& potential) {
  const auto cycles = cycles_with_potential(model, t_max, potential);
  const auto orbits = expand_repetitions(cycles, t_max);
  TraceValue out;
  BlockTail tail(model.period_unit);
  const WeightParams params{lambda, degree, 0};
  for (const auto& orbit : orbits) {
    const Complex w = orbit_weight(orbit, params);
    out.value += w;
    tail.add(orbit.period(), w);
  }
  out.terms_used = static_cast<int>(orbits.size());
  tail.finish(out);
  return out;
}

TraceValue zeta_product(const ModelDescriptor& model, Complex lambda, double t_max,
                        const Potential& potential) {
  const auto cycles = cycles_with_potential(model, t_max, potential);
  TraceValue out;
  out.value = 1.0;
  BlockTail tail(model.period_unit);
  for (const auto& c : cycles) {
    if (c.primitive_period > t_max * (1.0 + 1e-12)) continue;
    const Complex z = std::exp(-c.primitive_period * (lambda + c.primitive_potential_average));
    out.value *= 1.0 - z;
    tail.add(c.primitive_period, std::log(1.0 - z));
    ++out.terms_used;
  }
  // Tail of the log-sum, transferred to the product.
  TraceValue log_tail;
  tail.finish(log_tail);
  out.abscissa_margin = log_tail.abscissa_margin;
  out.tail_estimate = log_tail.converged()
                          ? std::abs(out.value) * std::expm1(log_tail.tail_estimate)
                          : kInf;
  return out;
}

TraceValue zeta_log_derivative(const ModelDescriptor& model, Complex lambda, double t_max,
                               const Potential& potential, int beta) {
  TraceValue out;
  out.tail_estimate = 0.0;
  const int transversal_dim = model.dimension - 1;
  for (int l = 0; l <= transversal_dim; ++l) {
    const TraceValue f = trace_sum(model, lambda, t_max, l, potential);
    const double sign = ((l + beta) % 2 == 0) ? 1.0 : -1.0;
    out.value += sign * f.value;
    out.tail_estimate += f.tail_estimate;
    out.terms_used += f.terms_used;
    out.abscissa_margin = l == 0 ? f.abscissa_margin : std::fmin(out.abscissa_margin, f.abscissa_margin);
  }
  return out;
}

Complex continue_basic(Complex lambda, double pole_guard) {
  const double l = std::round(-1.0 - lambda.real());
  if (l >= 0.0) {
    const Complex pole(-1.0 - l, std::round(lambda.imag()));
    if (std::abs(lambda - pole) < pole_guard || lambda == pole) {
      throw PoleError("basic-example trace evaluated at a pole");
    }
  }
  constexpr double kSeriesEdge = -0.5;
  if (lambda.real() >= kSeriesEdge) return basic_series(lambda);

  const int depth = static_cast<int>(std::ceil(kSeriesEdge - lambda.real()));
  Complex f_next = basic_series(lambda + static_cast<double>(depth + 1));  // F(lambda + j + 2)
  Complex f_curr = basic_series(lambda + static_cast<double>(depth));      // F(lambda + j + 1)
  for (int j = depth - 1; j >= 0; --j) {
    const Complex mu = lambda + static_cast<double>(j + 1);
    const Complex denom = expm1(kTwoPi * mu);
    if (denom == Complex{}) throw PoleError("basic-example trace evaluated at a pole");
    const Complex f = 2.0 * f_curr - f_next + kTwoPi / denom;
    f_next = f_curr;
    f_curr = f;
  }
  return f_curr;
}

TraceValue continue_horseshoe(Complex lambda, int j_max, const HorseshoeParams& params,
                              double pole_guard) {
  if (j_max < 0) throw DomainError("lattice truncation must be non-negative");
  const Complex e = std::exp(-lambda);
  const double a = 1.0 / params.lambda_u;
  const double b = params.lambda_s;
  TraceValue out;
  for (int j = 0; j <= j_max; ++j) {
    for (int k = 0; k <= j_max; ++k) {
      const double w = std::pow(a, j) * std::pow(b, k + 1);
      const Complex z = 2.0 * w * e;
      const Complex denom = 1.0 - z;
      if (std::abs(denom) < pole_guard || denom == Complex{}) {
        throw PoleError("horseshoe trace evaluated at a lattice pole");
      }
      out.value += z / denom;
      ++out.terms_used;
    }
  }
  // Omitted (j, k): |z| <= c a^j b^k with c = 2 lambda_s |e^{-lambda}|.
  const double c = 2.0 * b * std::abs(e);
  const double aj = std::pow(a, j_max + 1);
  const double bk = std::pow(b, j_max + 1);
  const double outside = c * (aj / ((1.0 - a) * (1.0 - b)) + (1.0 - aj) / (1.0 - a) * bk / (1.0 - b));
  const double z_max = c * std::max(aj, bk);
  out.tail_estimate = z_max < 1.0 ? outside / (1.0 - z_max) : kInf;
  return out;
}

Complex continue_cat(Complex lambda, double pole_guard) {
  const double k = std::round(lambda.imag() / kTwoPi);
  const Complex pole(0.0, kTwoPi * k);
  if (std::abs(lambda - pole) < pole_guard || lambda == pole) {
    throw PoleError("cat-suspension trace evaluated at a pole");
  }
  return 1.0 / expm1(lambda);
}

std::function<Complex(Complex)> continuation(const ModelDescriptor& model, double pole_guard,
                                             int horseshoe_lattice) {
  switch (model.kind) {
    case ModelKind::basic:
      return [pole_guard](Complex z) { return continue_basic(z, pole_guard); };
    case ModelKind::cat:
      return [pole_guard](Complex z) { return continue_cat(z, pole_guard); };
    case ModelKind::horseshoe: {
      const auto params = std::get<HorseshoeParams>(model.params);
      return [=](Complex z) {
        return continue_horseshoe(z, horseshoe_lattice, params, pole_guard).value;
      };
    }
  }
  throw DomainError("model has no continuation");
}

}  // namespace ruelle
