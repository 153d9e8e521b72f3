#pragma once

#include <functional>
#include <limits>

#include "ruelle/models.hpp"
#include "ruelle/orbit.hpp"

namespace ruelle {

inline constexpr double kDefaultPoleGuard = 1e-8;
inline constexpr int kDefaultHorseshoeLattice = 40;

// A truncated trace or zeta value with an estimate of the omitted terms.
struct TraceValue {
  Complex value{};
  // Bound on the omitted tail; +inf outside the estimated convergence region.
  double tail_estimate = std::numeric_limits<double>::infinity();
  int terms_used = 0;
  // Re lambda minus the estimated convergence abscissa (NaN if unknown).
  double abscissa_margin = std::numeric_limits<double>::quiet_NaN();

  bool converged() const { return tail_estimate < std::numeric_limits<double>::infinity(); }
};

// Scalar potential, represented by its average over each primitive cycle.
struct Potential {
  std::function<Complex(const PrimitiveCycle&)> average;

  static Potential zero();
  static Potential constant(Complex c);
};

// sum over closed orbits with T <= t_max of
//   e^{-T(lambda + V)} T# tr(wedge^degree P) / |det(I - P)|.
// The tail is extrapolated from the ratio of the last two period blocks,
// with a safety factor of 2.
TraceValue trace_sum(const ModelDescriptor& model, Complex lambda, double t_max, int degree = 0,
                     const Potential& potential = Potential::zero());

// prod over primitive cycles with T# <= t_max of (1 - e^{-T#(lambda + V#)}).
TraceValue zeta_product(const ModelDescriptor& model, Complex lambda, double t_max,
                        const Potential& potential = Potential::zero());

// sum_l (-1)^{l + beta} F_l(lambda), which equals zeta'/zeta.
TraceValue zeta_log_derivative(const ModelDescriptor& model, Complex lambda, double t_max,
                               const Potential& potential, int beta);

// Meromorphic continuation of the basic-example trace to all of C, through
// F(lambda) = 2F(lambda+1) - F(lambda+2) + 2pi / (e^{2pi(lambda+1)} - 1).
// Throws PoleError within `pole_guard` of -1 - l + ik (guard 0: exact poles only).
Complex continue_basic(Complex lambda, double pole_guard = kDefaultPoleGuard);

// Lattice resummation of the horseshoe trace:
//   sum_{j,k <= j_max} 2w e^{-lambda} / (1 - 2w e^{-lambda}),  w = lambda_u^{-j} lambda_s^{k+1}.
TraceValue continue_horseshoe(Complex lambda, int j_max, const HorseshoeParams& params,
                              double pole_guard = kDefaultPoleGuard);

// 1 / (e^lambda - 1).
Complex continue_cat(Complex lambda, double pole_guard = kDefaultPoleGuard);

// The model's continued trace as a callable.
std::function<Complex(Complex)> continuation(const ModelDescriptor& model,
                                             double pole_guard = kDefaultPoleGuard,
                                             int horseshoe_lattice = kDefaultHorseshoeLattice);

}  // namespace ruelle
