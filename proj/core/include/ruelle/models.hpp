#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ruelle/exact.hpp"
#include "ruelle/linalg.hpp"
#include "ruelle/orbit.hpp"

namespace ruelle {

// Ambient coordinates. Basic example: (x1, x2, x3 mod 2pi). Suspensions:
// (x, y, s) with s in [0, 1) the position along the unit roof.
using Point = std::array<double, 3>;

enum class ModelKind { basic, cat, horseshoe };

std::string_view to_string(ModelKind kind);

struct CatParams {
  IntMatrix2 a{2, 1, 1, 1};
  // Largest |eigenvalue| of A.
  double expanding_eigenvalue() const;
};

struct HorseshoeParams {
  double lambda_u = 3.0;
  double lambda_s = 0.25;
};

// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max] in C.
struct Rect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  bool contains(Complex z, double slack = 0.0) const {
    return z.real() >= re_min - slack && z.real() <= re_max + slack &&
           z.imag() >= im_min - slack && z.imag() <= im_max + slack;
  }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
};

struct OraclePole {
  Complex position;
  int rank = 1;
};

struct ResonanceOracle {
  std::vector<OraclePole> poles;
  Rect validity;
};

// Two-dimensional slice of ambient space used for grid-based operations:
// first coordinate in [x_min, x_max], second in [y_min, y_max], third fixed.
struct SectionBox {
  double x_min, x_max, y_min, y_max;
  double third = 0.0;
};

// Immutable bundle describing one open hyperbolic flow.
struct ModelDescriptor {
  std::string name;
  ModelKind kind = ModelKind::basic;
  int dimension = 3;
  int stable_dim = 1;
  // |d phi^t v| <= C e^{-gamma |t|} |v| on the stable/unstable bundles.
  double hyperbolicity_constant = 1.0;
  double hyperbolicity_rate = 1.0;
  // Every closed-orbit period is an integer multiple of this.
  double period_unit = 1.0;
  // False when the horseshoe strips overlap; geometric operations then refuse.
  bool geometric = true;
  std::variant<std::monostate, CatParams, HorseshoeParams> params;

  std::function<Point(const Point&, double)> flow;
  std::function<Point(const Point&)> vector_field;
  // U = {rho > 0}.
  std::function<double(const Point&)> rho;
  // X rho and X^2 rho; empty when the boundary has no smooth glancing set.
  std::function<double(const Point&)> rho_x;
  std::function<double(const Point&)> rho_xx;
  // Boundary parametrization (u, v) in [0,1)^2 -> point with rho = 0.
  std::function<Point(double, double)> boundary_point;

  std::function<std::vector<PrimitiveCycle>(double)> enumerate_cycles;
  // Number of primitive cycles of each symbolic length 1..n_max (index 0 unused).
  std::function<std::vector<std::int64_t>(int)> primitive_cycle_counts;
  // Section crossings of a cycle, starting at its canonical point.
  std::function<std::vector<Point>(const PrimitiveCycle&)> cycle_points;
  // Forward differential of the return map at step `k` of a cycle,
  // restricted to the transversal (stable/unstable) coordinates.
  std::function<Matrix(const PrimitiveCycle&, int)> step_differential;
  // Forward differential d phi^t on the transversal at points of K.
  std::function<Matrix(double)> transversal_differential;
  // Closed-form escape time, sign = +1 forward, -1 backward; nullopt = trapped.
  std::function<std::optional<double>(const Point&, int)> escape_closed_form;
  // Exact membership in Gamma_+ (sign +1) or Gamma_- (sign -1).
  std::function<bool(const Point&, int)> in_tail;

  SectionBox section;
  // Time-stepping resolution for generic escape searches.
  double escape_step = 0.05;
  // Flow-time increment between discrete events (roof crossings) or 0.
  double event_spacing = 0.0;
};

ModelDescriptor basic_example();

// Suspension of x -> A x mod 1 with unit roof; needs det A = 1 and |tr A| > 2.
ModelDescriptor cat_suspension(const IntMatrix2& a);

// Suspension of the affine two-branch horseshoe with differential
// diag(lambda_u, lambda_s) on both branches and unit roof.
ModelDescriptor horseshoe_suspension(double lambda_u, double lambda_s);

// Model from {"model": "basic"|"cat"|"horseshoe", "A": [[..],[..]],
// "lambda_u": .., "lambda_s": ..}. Missing parameters take the defaults
// A = [[2,1],[1,1]], lambda_u = 3, lambda_s = 1/4.
ModelDescriptor model_from_json(std::string_view json_text);

// Closed-form trace, computed without orbit enumeration.
Complex oracle_trace(const ModelDescriptor& model, Complex lambda);

// Predicted resonances inside `region` with their ranks. Coincident lattice
// points are merged with summed ranks.
ResonanceOracle resonance_oracle(const ModelDescriptor& model, const Rect& region);

}  // namespace ruelle
