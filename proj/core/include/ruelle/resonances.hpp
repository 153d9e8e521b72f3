#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruelle/models.hpp"

namespace ruelle {

using ComplexFunction = std::function<Complex(Complex)>;

enum class PoleMethod { grid_newton, lattice_oracle };

std::string_view to_string(PoleMethod method);

struct ResonanceReport {
  Complex position{};
  Complex residue{};
  PoleMethod method = PoleMethod::grid_newton;
  double position_error = 0.0;
  double residue_error = 0.0;
  std::optional<OraclePole> matched_oracle;
};

struct GridSize {
  int nx = 0;
  int ny = 0;
};

struct ResidueEstimate {
  Complex value{};
  // |R_2N - R_N| from node doubling.
  double error = 0.0;
};

// (1/2 pi i) times the contour integral of f over |lambda - center| = radius,
// trapezoid rule on `nodes` and 2 * `nodes` points. Throws QuadratureError
// when the two estimates differ by more than 1e-6.
ResidueEstimate residue_at(const ComplexFunction& f, Complex center, double radius = 0.1,
                           int nodes = 64);

// Poles of f inside `region`: strict local maxima of |f| on the grid, refined
// by Newton's method on 1/f. Seeds that drift more than two cell diagonals or
// leave the region are dropped.
// f may throw PoleError exactly at a pole. Sorted by (Re, Im).
std::vector<ResonanceReport> locate_resonances(const ComplexFunction& f, const Rect& region,
                                               GridSize grid);

// Oracle poles as reports (residue = rank, zero errors).
std::vector<ResonanceReport> oracle_reports(const ModelDescriptor& model, const Rect& region);

struct VerificationReport {
  bool pass = false;
  std::vector<ResonanceReport> matched;
  std::vector<ResonanceReport> unmatched_found;
  std::vector<OraclePole> missed;
  std::vector<std::string> failures;
};

inline constexpr double kPositionTolerance = 1e-8;
inline constexpr double kResidueTolerance = 1e-6;

// Default grid: spacing at most 0.05 per axis (and at least 8 x 8 nodes).
GridSize default_grid(const Rect& region);

// Locates the poles of the model's continued trace in `region` and matches
// them one-to-one against the resonance oracle.
VerificationReport verify_against_oracle(const ModelDescriptor& model, const Rect& region,
                                         std::optional<GridSize> grid = std::nullopt);

}  // namespace ruelle
