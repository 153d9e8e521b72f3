#include "ruelle/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruelle/errors.hpp"

namespace ruelle {

namespace {

double checked_det(const Matrix& p, const std::string& label) {
  const double det = det_identity_minus(p);
  if (!(std::abs(det) > kNondegeneracyThreshold)) {
    std::ostringstream os;
    os << "orbit '" << label << "' has |det(I - P)| = " << std::abs(det)
       << " at or below " << kNondegeneracyThreshold;
    throw NonHyperbolicOrbit(os.str());
  }
  return det;
}

}  // namespace

ClosedOrbit::ClosedOrbit(const PrimitiveCycle& cycle, int repetition)
    : ClosedOrbit(cycle.label, cycle.primitive_period, repetition,
                  matrix_power(cycle.primitive_poincare, repetition),
                  cycle.primitive_potential_average) {}

ClosedOrbit::ClosedOrbit(std::string label, double primitive_period, int repetition,
                         Matrix poincare, Complex potential_average)
    : label_(std::move(label)),
      primitive_period_(primitive_period),
      repetition_(repetition),
      period_(repetition * primitive_period),
      poincare_(std::move(poincare)),
      det_(0.0),
      potential_average_(potential_average) {
  if (!(primitive_period_ > 0.0)) throw DomainError("primitive period must be positive");
  if (repetition_ < 1) throw DomainError("repetition must be at least 1");
  det_ = checked_det(poincare_, label_);
}

Complex ClosedOrbit::transport_trace() const {
  return std::exp(-period_ * potential_average_);
}

std::vector<ClosedOrbit> expand_repetitions(std::span<const PrimitiveCycle> cycles,
                                            double t_max) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  // Periods such as 2 * (2 pi) versus a user-typed 4 pi differ in the last ulp.
  const double limit = t_max * (1.0 + 1e-12);
  std::vector<ClosedOrbit> orbits;
  for (const auto& cycle : cycles) {
    if (!(cycle.primitive_period > 0.0)) {
      throw DomainError("primitive period must be positive");
    }
    for (int m = 1; m * cycle.primitive_period <= limit; ++m) {
      orbits.emplace_back(cycle, m);
    }
  }
  std::stable_sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) {
    if (a.period() != b.period()) return a.period() < b.period();
    return a.label() < b.label();
  });
  return orbits;
}

Complex orbit_weight(const ClosedOrbit& orbit, const WeightParams& params) {
  const double wedge = wedge_trace(orbit.poincare(), params.wedge_degree);
  const Complex exponent = -orbit.period() * (params.lambda + orbit.potential_average());
  return std::exp(exponent) * (orbit.primitive_period() * wedge /
                               std::abs(orbit.det_identity_minus_poincare()));
}

int check_orientability(std::span<const ClosedOrbit> orbits) {
  if (orbits.empty()) throw DomainError("orientability check needs at least one orbit");
  const int beta = orbits.front().det_identity_minus_poincare() > 0.0 ? 0 : 1;
  for (const auto& orbit : orbits) {
    const int sign = orbit.det_identity_minus_poincare() > 0.0 ? 0 : 1;
    if (sign != beta) {
      std::ostringstream os;
      os << "orbit '" << orbit.label() << "' (T = " << orbit.period()
         << ") has det(I - P) = " << orbit.det_identity_minus_poincare()
         << ", inconsistent with beta = " << beta;
      throw OrientabilityError(os.str(), orbit.label());
    }
  }
  return beta;
}

}  // namespace ruelle
