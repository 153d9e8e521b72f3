#include "ruelle/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ruelle/errors.hpp"
#include "ruelle/quadrature.hpp"

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBisectionTolerance = 1e-12;

void require_geometric(const ModelDescriptor& model) {
  if (!model.geometric) {
    throw DomainError(model.name + ": strips overlap, the model has no geometric realisation");
  }
}

// e^{-1/u} glued into a C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double radial_bump(double r, double inner, double outer) {
  return 1.0 - smooth_step((r - inner) / (outer - inner));
}

// One direction of the event-driven search used for suspensions: rho is
// constant on each roof fibre, so the orbit can only leave U at a crossing.
struct EventEscape {
  std::optional<double> time;
  std::optional<Point> point;
};

EventEscape escape_by_events(const ModelDescriptor& model, const Point& x, int sign,
                             double horizon) {
  const double unit = model.event_spacing;
  const double s = x[2];
  // Time of the first crossing in direction `sign`.
  const double first = sign > 0 ? unit - s : s;
  Point y = model.flow(x, sign * (first + 0.5 * unit));
  for (double crossing = first; crossing <= horizon; crossing += unit) {
    if (model.rho(y) <= 0.0) {
      // Last point of the orbit inside the closure of U, on the roof.
      Point last = model.flow(y, -sign * unit);
      last[2] = sign > 0 ? unit : 0.0;
      return {sign * crossing, last};
    }
    y = model.flow(y, sign * unit);
  }
  return {};
}

EscapeResult search_escape(const ModelDescriptor& model, const Point& x, double horizon) {
  if (!(model.rho(x) > 0.0)) throw DomainError("escape_time needs a point inside U");
  EscapeResult out;
  if (model.event_spacing > 0.0) {
    const auto fwd = escape_by_events(model, x, +1, horizon);
    const auto bwd = escape_by_events(model, x, -1, horizon);
    out.forward_time = fwd.time;
    out.exit_point = fwd.point;
    out.backward_time = bwd.time;
    out.entry_point = bwd.point;
    return out;
  }
  for (int sign : {+1, -1}) {
    const double step = model.escape_step;
    double lo = 0.0;
    std::optional<double> hit;
    for (double t = step; t <= horizon + step; t += step) {
      if (model.rho(model.flow(x, sign * t)) <= 0.0) {
        hit = t;
        break;
      }
      lo = t;
    }
    if (!hit) continue;
    double hi = *hit;
    while (hi - lo > kBisectionTolerance * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if (model.rho(model.flow(x, sign * mid)) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    if (sign > 0) {
      out.forward_time = t;
      out.exit_point = model.flow(x, t);
    } else {
      out.backward_time = -t;
      out.entry_point = model.flow(x, -t);
    }
  }
  return out;
}

EscapeResult closed_form_escape(const ModelDescriptor& model, const Point& x) {
  if (!(model.rho(x) > 0.0)) throw DomainError("escape_time needs a point inside U");
  EscapeResult out;
  out.forward_time = model.escape_closed_form(x, +1);
  out.backward_time = model.escape_closed_form(x, -1);
  if (out.forward_time) out.exit_point = model.flow(x, *out.forward_time);
  if (out.backward_time) out.entry_point = model.flow(x, *out.backward_time);
  return out;
}

}  // namespace

Point TrappedMasks::point(int i, int j) const { return {xs.at(i), ys.at(j), third}; }

Point flow(const ModelDescriptor& model, const Point& x, double t) { return model.flow(x, t); }

EscapeResult escape_time(const ModelDescriptor& model, const Point& x) {
  require_geometric(model);
  if (model.escape_closed_form) return closed_form_escape(model, x);
  return search_escape(model, x, kDefaultEscapeHorizon);
}

EscapeResult escape_time_bisection(const ModelDescriptor& model, const Point& x, double horizon) {
  require_geometric(model);
  if (!(horizon > 0.0)) throw DomainError("escape horizon must be positive");
  return search_escape(model, x, horizon);
}

TestFunction builtin_function(const ModelDescriptor& model, const std::string& id) {
  int k = 0;
  if (id != "bump") {
    const std::string prefix = "bump-k";
    if (id.rfind(prefix, 0) != 0 || id.size() == prefix.size()) {
      throw DomainError("unknown test function \"" + id + "\" (expected bump or bump-k<N>)");
    }
    std::size_t used = 0;
    try {
      k = std::stoi(id.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw DomainError("unknown test function \"" + id + "\"");
    }
    if (used != id.size() - prefix.size()) throw DomainError("unknown test function \"" + id + "\"");
  }

  TestFunction f;
  f.id = id;
  f.sup_norm = 1.0;
  if (model.kind == ModelKind::basic) {
    f.value = [k](const Point& x) -> Complex {
      const double psi = radial_bump(std::hypot(x[0], x[1]), 0.3, 0.7);
      if (psi == 0.0) return 0.0;
      return k == 0 ? Complex(psi) : psi * std::polar(1.0, k * x[2]);
    };
  } else {
    f.value = [k](const Point& x) -> Complex {
      const double psi = radial_bump(std::hypot(x[0] - 0.5, x[1] - 0.5), 0.15, 0.35);
      if (psi == 0.0) return 0.0;
      return k == 0 ? Complex(psi) : psi * std::polar(1.0, kTwoPi * k * x[2]);
    };
  }
  return f;
}

ResolventValue resolvent_apply(const ModelDescriptor& model, const TestFunction& f, Complex lambda,
                               const Point& x, QuadratureRule quadrature,
                               std::optional<double> t_cut) {
  if (quadrature.nodes < 1 || !(quadrature.panel_length > 0.0)) {
    throw DomainError("quadrature needs at least one node and a positive panel length");
  }
  const double re = lambda.real();
  const auto escape = escape_time(model, x);
  const double exit = escape.backward_time ? -*escape.backward_time
                                           : std::numeric_limits<double>::infinity();
  if (!std::isfinite(exit) && !(re > 0.0)) {
    throw DomainError("resolvent integral diverges: Re lambda <= 0 on a trapped backward orbit");
  }
  double cut = std::numeric_limits<double>::infinity();
  if (t_cut) {
    if (!(*t_cut > 0.0)) throw DomainError("T_cut must be positive");
    cut = *t_cut;
  } else if (re > 0.0) {
    cut = 50.0 / re;
  }

  ResolventValue out;
  const double horizon = std::min(exit, cut);
  out.integrated_time = horizon;
  if (exit > cut) {
    out.error = re > 0.0 ? f.sup_norm * std::exp(-re * cut) / re
                         : std::numeric_limits<double>::infinity();
  }

  // Breakpoints at roof crossings, then uniform panels in between.
  std::vector<double> breaks{0.0};
  if (model.event_spacing > 0.0) {
    for (double c = x[2] > 0.0 ? x[2] : model.event_spacing; c < horizon; c += model.event_spacing) {
      if (c > 0.0) breaks.push_back(c);
    }
  }
  breaks.push_back(horizon);

  const auto rule = gauss_legendre(quadrature.nodes);
  Complex sum = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a0 = breaks[b];
    const double a1 = breaks[b + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((a1 - a0) / quadrature.panel_length)));
    const double width = (a1 - a0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a0 + (p + 0.5) * width;
      // Evaluate relative to the panel midpoint: no crossing lies inside a panel.
      const Point base = model.flow(x, -mid);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double offset = 0.5 * width * rule.nodes[q];
        const double t = mid + offset;
        const Complex fx = f.value(model.flow(base, -offset));
        if (fx != 0.0) sum += 0.5 * width * rule.weights[q] * std::exp(-lambda * t) * fx;
      }
    }
  }
  out.value = sum;
  return out;
}

std::vector<Point> default_residual_samples(const ModelDescriptor& model, int per_axis) {
  if (per_axis < 2) throw DomainError("need at least two samples per axis");
  std::vector<Point> samples;
  auto lin = [per_axis](double a, double b, int i) { return a + (b - a) * i / (per_axis - 1); };
  if (model.kind == ModelKind::basic) {
    for (double x3 : {0.5, 2.0, 4.0}) {
      for (int j = 0; j < per_axis; ++j) {
        for (double sign : {-1.0, 1.0}) {
          for (int i = 0; i < per_axis; ++i) {
            samples.push_back({lin(-0.45, 0.45, i), sign * lin(0.2, 0.45, j), x3});
          }
        }
      }
    }
    return samples;
  }
  const auto& box = model.section;
  for (double s : {0.3, 0.5, 0.7}) {
    for (int j = 0; j < per_axis; ++j) {
      for (int i = 0; i < per_axis; ++i) {
        const Point p{lin(box.x_min, box.x_max, i), lin(box.y_min, box.y_max, j), s};
        if (model.rho(p) > 0.0) samples.push_back(p);
      }
    }
  }
  return samples;
}

double pde_residual(const ModelDescriptor& model, Complex lambda, const TestFunction& f, double h,
                    const std::vector<Point>& samples, QuadratureRule quadrature) {
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  auto u = [&](const Point& p) { return resolvent_apply(model, f, lambda, p, quadrature).value; };
  double worst = 0.0;
  for (const auto& x : samples) {
    const Point field = model.vector_field(x);
    Complex xu = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (field[i] == 0.0) continue;
      Point plus = x, minus = x;
      plus[i] += h;
      minus[i] -= h;
      xu += field[i] * (u(plus) - u(minus)) / (2.0 * h);
    }
    worst = std::max(worst, std::abs(xu + lambda * u(x) - f.value(x)));
  }
  return worst;
}

ConvexityReport check_convexity(const ModelDescriptor& model, int resolution, double margin) {
  ConvexityReport report;
  if (!model.rho_x || !model.rho_xx || !model.boundary_point) {
    report.applicable = false;
    report.pass = true;
    report.message = "no smooth boundary; nothing to check";
    return report;
  }
  if (resolution < 2) throw DomainError("convexity grid needs at least 2 samples per axis");
  report.applicable = true;

  const int n = resolution;
  std::vector<double> xr(static_cast<std::size_t>(n) * n), xxr(xr.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point p = model.boundary_point(static_cast<double>(i) / n, static_cast<double>(j) / n);
      xr[j * n + i] = model.rho_x(p);
      xxr[j * n + i] = model.rho_xx(p);
    }
  }
  // A sign change of X rho between neighbours is resolved at this scale.
  double tol = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = xr[j * n + i];
      tol = std::max(tol, std::abs(v - xr[j * n + (i + 1) % n]));
      tol = std::max(tol, std::abs(v - xr[((j + 1) % n) * n + i]));
    }
  }
  report.glancing_tolerance = tol;
  report.boundary_samples = n * n;
  report.max_second_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < xr.size(); ++k) {
    if (std::abs(xr[k]) > tol) continue;
    ++report.glancing_samples;
    report.max_second_derivative = std::max(report.max_second_derivative, xxr[k]);
  }
  if (report.glancing_samples == 0) {
    report.pass = true;
    report.max_second_derivative = 0.0;
    report.message = "no glancing samples";
  } else {
    report.pass = report.max_second_derivative < -margin;
    report.message = report.pass ? "X^2 rho < 0 on the glancing set"
                                 : "glancing sample with X^2 rho >= -margin";
  }
  return report;
}

namespace {

struct ConeSweep {
  double min_expansion = std::numeric_limits<double>::infinity();
  double max_aperture = 0.0;
  Eigen::Vector2d axis;
};

// Sweeps the cone of half-angle `aperture` around the dominant eigen-direction
// of make(t) (the other one if swap), measured in the eigen-coordinates at t0.
template <class Make>
ConeSweep sweep_cone(Make make, const std::vector<double>& times, double aperture, int samples,
                     bool swap) {
  Eigen::EigenSolver<Eigen::Matrix2d> es(make(times.front()));
  if (es.eigenvalues().imag().cwiseAbs().maxCoeff() != 0.0) {
    throw DomainError("differential has complex eigenvalues; no invariant splitting");
  }
  Eigen::Matrix2d basis = es.eigenvectors().real();
  const auto mu = es.eigenvalues().real().cwiseAbs();
  int dominant = mu(0) >= mu(1) ? 0 : 1;
  if (swap) dominant = 1 - dominant;
  if (dominant == 1) basis.col(0).swap(basis.col(1));
  basis.col(0).normalize();
  basis.col(1).normalize();
  const Eigen::Matrix2d to_coords = basis.inverse();

  ConeSweep out;
  out.axis = basis.col(0);
  const int count = std::max(samples, 2);
  for (double t : times) {
    const Eigen::Matrix2d action = to_coords * make(t) * basis;
    for (int k = 0; k < count; ++k) {
      const double theta = -aperture + 2.0 * aperture * k / (count - 1);
      const Eigen::Vector2d c(1.0, std::tan(theta));
      const Eigen::Vector2d image = action * c;
      const double norm_in = c.cwiseAbs().maxCoeff();
      const double norm_out = image.cwiseAbs().maxCoeff();
      out.min_expansion = std::min(out.min_expansion, norm_out / norm_in);
      const double angle = image(0) == 0.0 ? std::numbers::pi / 2
                                           : std::atan(std::abs(image(1) / image(0)));
      out.max_aperture = std::max(out.max_aperture, angle);
    }
  }
  return out;
}

}  // namespace

ConeOptions default_cone_options(const ModelDescriptor& model) {
  ConeOptions options;
  const double needed = std::log(options.required_factor) / model.hyperbolicity_rate;
  const double unit = model.event_spacing > 0.0 ? model.event_spacing : 0.5;
  options.t0 = std::max(unit, unit * std::ceil(needed / unit - 1e-12));
  return options;
}

ConeCertificate certify_cones(const ModelDescriptor& model, const ConeOptions& options) {
  if (!(options.aperture > 0.0 && options.aperture < std::numbers::pi / 4)) {
    throw DomainError("cone aperture must lie in (0, pi/4)");
  }
  if (!(options.t0 > 0.0)) throw DomainError("t0 must be positive");
  if (!model.transversal_differential) throw DomainError(model.name + ": no transversal differential");

  std::vector<double> times;
  if (model.event_spacing > 0.0) {
    const auto first = static_cast<long>(std::ceil(options.t0 / model.event_spacing - 1e-12));
    const auto last = static_cast<long>(std::floor(2.0 * options.t0 / model.event_spacing + 1e-12));
    for (long n = std::max(1L, first); n <= std::max(first, last); ++n) {
      times.push_back(static_cast<double>(n) * model.event_spacing);
    }
  } else {
    const int count = std::max(options.samples, 2);
    for (int k = 0; k < count; ++k) times.push_back(options.t0 * (1.0 + static_cast<double>(k) / (count - 1)));
  }

  auto forward = [&](double t) -> Eigen::Matrix2d {
    const Matrix d = model.transversal_differential(t);
    return Eigen::Matrix2d(d).inverse().transpose();
  };
  auto backward = [&](double t) -> Eigen::Matrix2d {
    const Matrix d = model.transversal_differential(t);
    return Eigen::Matrix2d(d).transpose();
  };
  const auto u = sweep_cone(forward, times, options.aperture, options.samples, options.swap_axes);
  const auto s = sweep_cone(backward, times, options.aperture, options.samples, options.swap_axes);

  ConeCertificate cert;
  cert.unstable_axis = u.axis;
  cert.stable_axis = s.axis;
  cert.aperture = options.aperture;
  cert.t0 = options.t0;
  cert.required_factor = options.required_factor;
  cert.forward_min_expansion = u.min_expansion;
  cert.backward_min_expansion = s.min_expansion;
  cert.min_expansion = std::min(u.min_expansion, s.min_expansion);
  cert.max_image_aperture = std::max(u.max_aperture, s.max_aperture);
  cert.sample_count = static_cast<int>(times.size()) * std::max(options.samples, 2) * 2;
  const bool expands = cert.min_expansion >= options.required_factor * (1.0 - 1e-12);
  const bool included = cert.max_image_aperture < options.aperture * (1.0 - 1e-9);
  cert.pass = expands && included;
  if (cert.pass) {
    cert.message = "cones strictly invariant and expanded";
  } else if (!included) {
    cert.message = "image cone not strictly inside the cone";
  } else {
    cert.message = "expansion below the required factor";
  }
  return cert;
}

TrappedMasks trapped_set_approx(const ModelDescriptor& model, int n, double t) {
  require_geometric(model);
  if (n < 2) throw DomainError("trapped-set grid needs at least 2 points per axis");
  if (!(t > 0.0)) throw DomainError("T must be positive");
  TrappedMasks masks;
  masks.nx = masks.ny = n;
  masks.third = model.section.third;
  for (int i = 0; i < n; ++i) {
    masks.xs.push_back(model.section.x_min + (model.section.x_max - model.section.x_min) * i / (n - 1));
    masks.ys.push_back(model.section.y_min + (model.section.y_max - model.section.y_min) * i / (n - 1));
  }
  const std::size_t size = static_cast<std::size_t>(n) * n;
  masks.gamma_plus.assign(size, false);
  masks.gamma_minus.assign(size, false);
  masks.trapped.assign(size, false);
  const double horizon = t + std::max(model.event_spacing, model.escape_step);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point p = masks.point(i, j);
      if (!(model.rho(p) > 0.0)) continue;
      const auto e = model.escape_closed_form ? closed_form_escape(model, p)
                                              : search_escape(model, p, horizon);
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      masks.gamma_plus[k] = !e.backward_time || -*e.backward_time > t;
      masks.gamma_minus[k] = !e.forward_time || *e.forward_time > t;
      masks.trapped[k] = masks.gamma_plus[k] && masks.gamma_minus[k];
    }
  }
  return masks;
}

double mask_hausdorff_distance(const ModelDescriptor& model, const TrappedMasks& masks,
                               TailSet set) {
  if (!model.in_tail) throw DomainError(model.name + ": exact tails are not available");
  const std::vector<bool>& mask = set == TailSet::gamma_plus    ? masks.gamma_plus
                                  : set == TailSet::gamma_minus ? masks.gamma_minus
                                                                : masks.trapped;
  std::vector<Point> only_mask, only_exact, mask_points, exact_points;
  for (int j = 0; j < masks.ny; ++j) {
    for (int i = 0; i < masks.nx; ++i) {
      const Point p = masks.point(i, j);
      bool exact = false;
      if (model.rho(p) > 0.0) {
        const bool plus = model.in_tail(p, +1);
        const bool minus = model.in_tail(p, -1);
        exact = set == TailSet::gamma_plus ? plus : set == TailSet::gamma_minus ? minus : plus && minus;
      }
      const bool marked = mask[static_cast<std::size_t>(j) * masks.nx + i];
      if (marked) mask_points.push_back(p);
      if (exact) exact_points.push_back(p);
      if (marked && !exact) only_mask.push_back(p);
      if (exact && !marked) only_exact.push_back(p);
    }
  }
  if (mask_points.empty() && exact_points.empty()) return 0.0;
  if (mask_points.empty() || exact_points.empty()) return std::numeric_limits<double>::infinity();
  // Points in both sets contribute zero.
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& a : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : to) best = std::min(best, std::hypot(a[0] - b[0], a[1] - b[1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(only_mask, exact_points), directed(only_exact, mask_points));
}

}  // namespace ruelle
