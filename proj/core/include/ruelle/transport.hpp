#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/models.hpp"

namespace ruelle {

Point flow(const ModelDescriptor& model, const Point& x, double t);

// Escape times: forward > 0, backward < 0; nullopt means trapped in that
// direction (x lies on Gamma_- resp. Gamma_+).
struct EscapeResult {
  std::optional<double> forward_time;
  std::optional<double> backward_time;
  std::optional<Point> exit_point;   // phi^{forward_time}(x)
  std::optional<Point> entry_point;  // phi^{backward_time}(x)
};

inline constexpr double kDefaultEscapeHorizon = 100.0;

// Closed form when the model provides one, otherwise escape_time_bisection.
// Throws DomainError for x outside U.
EscapeResult escape_time(const ModelDescriptor& model, const Point& x);

// Generic search: march with the model's escape step until rho <= 0, then
// bisect the crossing to 1e-12. Trajectories still inside U after `horizon`
// are reported as trapped.
EscapeResult escape_time_bisection(const ModelDescriptor& model, const Point& x,
                                   double horizon = kDefaultEscapeHorizon);

// Smooth compactly supported test function on U.
struct TestFunction {
  std::string id;
  std::function<Complex(const Point&)> value;
  double sup_norm = 1.0;
};

// Built-in bumps: "bump" (radial, identically 1 near the centre of the
// section) and "bump-k<N>" (bump times e^{i N theta}, theta the periodic
// coordinate). Throws DomainError for unknown ids.
TestFunction builtin_function(const ModelDescriptor& model, const std::string& id);

struct QuadratureRule {
  int nodes = 16;
  double panel_length = 0.25;
};

struct ResolventValue {
  Complex value{};
  // Tail bound sup|f| e^{-Re lambda T_cut} / Re lambda when truncated.
  double error = 0.0;
  double integrated_time = 0.0;
};

// u(x) = int_0^T e^{-lambda t} f(phi^{-t}(x)) dt with T the backward exit time
// from U capped at t_cut (default 50 / Re lambda). Solves (X + lambda) u = f.
ResolventValue resolvent_apply(const ModelDescriptor& model, const TestFunction& f, Complex lambda,
                               const Point& x, QuadratureRule quadrature = {},
                               std::optional<double> t_cut = std::nullopt);

// Sample points for pde_residual: for the basic example a box in
// {0.2 <= |x2| <= 0.45}, away from Gamma_+ = {x2 = 0}, where u is only
// finitely smooth.
std::vector<Point> default_residual_samples(const ModelDescriptor& model, int per_axis = 5);

// max over samples of |X.grad u + lambda u - f| with u = R(lambda) f and
// second-order central differences of step h.
double pde_residual(const ModelDescriptor& model, Complex lambda, const TestFunction& f, double h,
                    const std::vector<Point>& samples, QuadratureRule quadrature = {});

struct ConvexityReport {
  bool applicable = false;
  bool pass = false;
  int boundary_samples = 0;
  int glancing_samples = 0;
  double glancing_tolerance = 0.0;
  // Largest X^2 rho over the glancing samples.
  double max_second_derivative = 0.0;
  std::string message;
};

// Samples a resolution x resolution boundary grid and requires
// X^2 rho < -margin wherever |X rho| is within one grid step of zero.
ConvexityReport check_convexity(const ModelDescriptor& model, int resolution,
                                double margin = 1e-6);

struct ConeOptions {
  double aperture = 0.349065850398865915;  // 20 degrees
  double t0 = 1.0;
  double required_factor = 4.0;
  int samples = 8;
  // Build the expanding cone around the contracting axis (a deliberate failure).
  bool swap_axes = false;
};

struct ConeCertificate {
  Eigen::Vector2d unstable_axis;
  Eigen::Vector2d stable_axis;
  double aperture = 0.0;
  double t0 = 0.0;
  double required_factor = 0.0;
  // Minimum of |M xi|_* / |xi|_* over each cone and sampled t in [t0, 2 t0],
  // with |xi|_* = max(|pi_u xi|, |pi_s xi|) in the dual splitting.
  double forward_min_expansion = 0.0;
  double backward_min_expansion = 0.0;
  double min_expansion = 0.0;
  // Largest image aperture; strict inclusion needs it below `aperture`.
  double max_image_aperture = 0.0;
  int sample_count = 0;
  bool pass = false;
  std::string message;
};

// Expansion factor 4 with t0 the shortest time (whole roof steps for suspensions,
// half units otherwise) at which e^{gamma t0} >= 4.
ConeOptions default_cone_options(const ModelDescriptor& model);

// Dual unstable cone under (d phi^t)^{-T} and dual stable cone under
// (d phi^{-t})^{-T}: strict invariance and expansion by required_factor.
ConeCertificate certify_cones(const ModelDescriptor& model, const ConeOptions& options = {});

struct TrappedMasks {
  int nx = 0, ny = 0;
  std::vector<double> xs, ys;
  // Row-major (j * nx + i); gamma_plus: backward escape beyond T;
  // gamma_minus: forward escape beyond T; trapped = both.
  std::vector<bool> gamma_plus, gamma_minus, trapped;
  double third = 0.0;
  Point point(int i, int j) const;
};

TrappedMasks trapped_set_approx(const ModelDescriptor& model, int n, double t);

enum class TailSet { gamma_plus, gamma_minus, trapped };

// Hausdorff distance (section coordinates) between a mask and the grid points
// of the exact set given by model.in_tail. +inf if exactly one is empty.
double mask_hausdorff_distance(const ModelDescriptor& model, const TrappedMasks& masks, TailSet set);

}  // namespace ruelle
