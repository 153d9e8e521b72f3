#include "ruelle/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ruelle/errors.hpp"
#include "ruelle/traces.hpp"

namespace ruelle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNewtonTolerance = 1e-10;
constexpr int kNewtonMaxIterations = 50;
constexpr double kDedupDistance = 1e-6;

double magnitude(const ComplexFunction& f, Complex z) {
  try {
    const double m = std::abs(f(z));
    return std::isfinite(m) ? m : kInf;
  } catch (const PoleError&) {
    return kInf;
  }
}

// 1/f, with exact poles mapped to 0.
Complex reciprocal(const ComplexFunction& f, Complex z) {
  try {
    return 1.0 / f(z);
  } catch (const PoleError&) {
    return 0.0;
  }
}

struct NewtonResult {
  Complex z;
  double step = 0.0;
  bool converged = false;
};

NewtonResult refine(const ComplexFunction& f, Complex seed, const Rect& region, double max_drift) {
  // Once |1/f| drops below the tolerance, one more polishing step is taken.
  constexpr double h = 1e-6;
  Complex z = seed;
  double last_step = kInf;
  bool small = false;
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const Complex g = reciprocal(f, z);
    if (g == Complex{}) return {z, 0.0, true};
    if (small) return {z, last_step, true};
    small = std::abs(g) <= kNewtonTolerance;
    const Complex dg = (reciprocal(f, z + h) - reciprocal(f, z - h)) / (2.0 * h);
    if (dg == Complex{} || !std::isfinite(std::abs(dg))) return {z, kInf, false};
    const Complex step = g / dg;
    z -= step;
    last_step = std::abs(step);
    if (!region.contains(z) || std::abs(z - seed) > max_drift) return {z, last_step, false};
  }
  return {z, last_step, small};
}

ResidueEstimate trapezoid_residue(const ComplexFunction& f, Complex center, double radius,
                                  int nodes) {
  const int fine = 2 * nodes;
  Complex coarse_sum = 0.0, fine_sum = 0.0;
  for (int j = 0; j < fine; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / fine;
    const Complex dz = std::polar(radius, theta);
    const Complex term = f(center + dz) * dz;
    fine_sum += term;
    if (j % 2 == 0) coarse_sum += term;
  }
  const Complex coarse = coarse_sum / static_cast<double>(nodes);
  const Complex refined = fine_sum / static_cast<double>(fine);
  return {refined, std::abs(refined - coarse)};
}

bool by_position(const ResonanceReport& a, const ResonanceReport& b) {
  if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
  return a.position.imag() < b.position.imag();
}

}  // namespace

std::string_view to_string(PoleMethod method) {
  return method == PoleMethod::grid_newton ? "grid+newton" : "lattice-oracle";
}

ResidueEstimate residue_at(const ComplexFunction& f, Complex center, double radius, int nodes) {
  if (!(radius > 0.0)) throw DomainError("contour radius must be positive");
  if (nodes < 4) throw DomainError("contour needs at least 4 nodes");
  const auto estimate = trapezoid_residue(f, center, radius, nodes);
  if (!(estimate.error <= 1e-6)) {
    std::ostringstream os;
    os << "residue quadrature at " << center << " (radius " << radius
       << ") changed by " << estimate.error << " under node doubling";
    throw QuadratureError(os.str());
  }
  return estimate;
}

std::vector<ResonanceReport> locate_resonances(const ComplexFunction& f, const Rect& region,
                                               GridSize grid) {
  if (grid.nx < 8 || grid.ny < 8) throw DomainError("pole search needs at least an 8x8 grid");
  if (!(region.width() > 0.0 && region.height() > 0.0)) throw DomainError("empty search region");
  const double dx = region.width() / (grid.nx - 1);
  const double dy = region.height() / (grid.ny - 1);
  auto node = [&](int i, int j) { return Complex(region.re_min + i * dx, region.im_min + j * dy); };

  std::vector<double> mag(static_cast<std::size_t>(grid.nx) * grid.ny);
  auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(j) * grid.nx + i]; };
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) at(i, j) = magnitude(f, node(i, j));
  }
  // Every strict local maximum seeds Newton. By the maximum principle these sit
  // next to poles or on the region's edge; a median threshold would drop real
  // poles wherever |f| has a large smooth background.
  const double max_drift = 2.0 * std::hypot(dx, dy);
  std::vector<ResonanceReport> found;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double v = at(i, j);
      if (!std::isfinite(v) && v != kInf) continue;
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= grid.nx || jj >= grid.ny) continue;
          if (!(v > at(ii, jj))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      const auto result = refine(f, node(i, j), region, max_drift);
      if (!result.converged) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& r) {
        return std::abs(r.position - result.z) < kDedupDistance;
      });
      if (duplicate) continue;
      ResonanceReport report;
      report.position = result.z;
      report.position_error = result.step;
      report.method = PoleMethod::grid_newton;
      found.push_back(report);
    }
  }
  std::sort(found.begin(), found.end(), by_position);

  for (auto& report : found) {
    double nearest = kInf;
    for (const auto& other : found) {
      if (&other != &report) nearest = std::min(nearest, std::abs(other.position - report.position));
    }
    const double radius = std::min(0.1, nearest / 3.0);
    try {
      const auto res = trapezoid_residue(f, report.position, radius, 64);
      report.residue = res.value;
      report.residue_error = res.error;
    } catch (const PoleError&) {
      report.residue = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      report.residue_error = kInf;
    }
  }
  return found;
}

std::vector<ResonanceReport> oracle_reports(const ModelDescriptor& model, const Rect& region) {
  std::vector<ResonanceReport> out;
  for (const auto& pole : resonance_oracle(model, region).poles) {
    ResonanceReport r;
    r.position = pole.position;
    r.residue = static_cast<double>(pole.rank);
    r.method = PoleMethod::lattice_oracle;
    r.matched_oracle = pole;
    out.push_back(r);
  }
  return out;
}

GridSize default_grid(const Rect& region) {
  constexpr double kSpacing = 0.05;
  return {std::max(8, static_cast<int>(std::ceil(region.width() / kSpacing)) + 1),
          std::max(8, static_cast<int>(std::ceil(region.height() / kSpacing)) + 1)};
}

VerificationReport verify_against_oracle(const ModelDescriptor& model, const Rect& region,
                                         std::optional<GridSize> grid) {
  const auto f = continuation(model, 0.0);
  auto found = locate_resonances(f, region, grid.value_or(default_grid(region)));
  const auto oracle = resonance_oracle(model, region).poles;

  struct Pair {
    double distance;
    std::size_t found, oracle;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      pairs.push_back({std::abs(found[i].position - oracle[k].position), i, k});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.distance < b.distance; });
  std::vector<bool> found_used(found.size(), false), oracle_used(oracle.size(), false);
  for (const auto& p : pairs) {
    if (found_used[p.found] || oracle_used[p.oracle]) continue;
    found_used[p.found] = oracle_used[p.oracle] = true;
    found[p.found].matched_oracle = oracle[p.oracle];
  }

  VerificationReport report;
  for (std::size_t i = 0; i < found.size(); ++i) {
    auto& r = found[i];
    if (!found_used[i]) {
      std::ostringstream os;
      os << "unmatched pole at " << r.position;
      report.failures.push_back(os.str());
      report.unmatched_found.push_back(r);
      continue;
    }
    const auto& o = *r.matched_oracle;
    const double dist = std::abs(r.position - o.position);
    const double res_err = std::abs(r.residue - static_cast<double>(o.rank));
    if (!(dist < kPositionTolerance)) {
      std::ostringstream os;
      os << "pole at " << r.position << " is " << dist << " from oracle " << o.position;
      report.failures.push_back(os.str());
    }
    if (!(res_err < kResidueTolerance)) {
      std::ostringstream os;
      os << "residue " << r.residue << " at " << o.position << " differs from rank " << o.rank;
      report.failures.push_back(os.str());
    }
    report.matched.push_back(r);
  }
  for (std::size_t k = 0; k < oracle.size(); ++k) {
    if (oracle_used[k]) continue;
    std::ostringstream os;
    os << "oracle pole at " << oracle[k].position << " (rank " << oracle[k].rank << ") not found";
    report.failures.push_back(os.str());
    report.missed.push_back(oracle[k]);
  }
  report.pass = report.failures.empty();
  return report;
}

}  // namespace ruelle
