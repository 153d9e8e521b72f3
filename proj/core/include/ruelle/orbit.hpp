#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ruelle/linalg.hpp"

namespace ruelle {

using Complex = std::complex<double>;

// Orbits with |det(I - P)| at or below this value are rejected as
// non-hyperbolic.
inline constexpr double kNondegeneracyThreshold = 1e-12;

// A primitive periodic orbit. Repetitions are derived on demand by
// expand_repetitions and never stored.
struct PrimitiveCycle {
  // Canonical representative: the lexicographically minimal rotation of the
  // symbolic word (or of the point list for point-based enumerations).
  std::string label;
  // Number of map iterates for suspensions; 1 for flows with a single return.
  int length = 1;
  double primitive_period = 0.0;
  // Linearized Poincare map on the annihilator of the flow direction.
  Matrix primitive_poincare;
  Complex primitive_potential_average{};
};

// One closed trajectory (gamma, T) with T = m * T#.
class ClosedOrbit {
 public:
  // Builds the m-th repetition of `cycle`; P = (P#)^m.
  ClosedOrbit(const PrimitiveCycle& cycle, int repetition);

  // Raw construction, used for externally supplied or synthetic orbits.
  ClosedOrbit(std::string label, double primitive_period, int repetition,
              Matrix poincare, Complex potential_average = {});

  const std::string& label() const noexcept { return label_; }
  double period() const noexcept { return period_; }
  double primitive_period() const noexcept { return primitive_period_; }
  int repetition() const noexcept { return repetition_; }
  const Matrix& poincare() const noexcept { return poincare_; }
  double det_identity_minus_poincare() const noexcept { return det_; }
  Complex potential_average() const noexcept { return potential_average_; }
  // Scalar transport trace exp(-T V_gamma).
  Complex transport_trace() const;

 private:
  std::string label_;
  double primitive_period_;
  int repetition_;
  double period_;
  Matrix poincare_;
  double det_;
  Complex potential_average_;
};

struct WeightParams {
  Complex lambda{};
  int wedge_degree = 0;
  int orientation_sign = 0;
};

// Every (cycle, m) with m * T# <= t_max, ordered by (period, label).
std::vector<ClosedOrbit> expand_repetitions(std::span<const PrimitiveCycle> cycles,
                                            double t_max);

// exp(-T (lambda + V)) * T# * tr(wedge^l P) / |det(I - P)|.
Complex orbit_weight(const ClosedOrbit& orbit, const WeightParams& params);

// Parity beta with (-1)^beta det(I - P) = |det(I - P)| on every orbit.
// Throws OrientabilityError naming the first orbit that disagrees.
int check_orientability(std::span<const ClosedOrbit> orbits);

}  // namespace ruelle
