#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/exact.hpp"
#include "ruelle/models.hpp"
#include "ruelle/orbit.hpp"

namespace ruelle {

// Hard cap on symbolic length / number of map iterates.
inline constexpr int kMaxSymbolLength = 30;
// Largest number of periodic points materialized by a single enumeration.
inline constexpr std::int64_t kMaxMaterializedPoints = 20'000'000;

// Binary Lyndon words of length <= n_max, ordered by (length, lexicographic).
std::vector<std::string> lyndon_words(int n_max);

// Number of binary Lyndon words of each length 1..n_max, counted by running
// Duval's generator (index 0 unused).
std::vector<std::int64_t> lyndon_counts(int n_max);

// Lyndon words wrapped as primitive cycles of the horseshoe suspension.
std::vector<PrimitiveCycle> lyndon_cycles(int n_max, const HorseshoeParams& params);

// Horseshoe periodic point on the section for a word (forward itinerary).
std::array<double, 2> horseshoe_periodic_point(const std::string& word,
                                               const HorseshoeParams& params);

// All x in [0,1)^2 with A^n x = x mod 1, in exact arithmetic.
std::vector<TorusPoint> cat_fixed_points(const IntMatrix2& a, int n);

// |det(A^n - I)|, exactly.
std::int64_t cat_fixed_point_count(const IntMatrix2& a, int n);

// Partition n-periodic points into orbits and keep those of primitive period
// exactly n. Each orbit is rotated to start at its smallest point; orbits are
// sorted by that point. Throws DomainError if a point is not n-periodic.
template <class P, class Map>
std::vector<std::vector<P>> group_into_cycles(std::span<const P> points, Map map, int n) {
  if (n < 1) throw DomainError("period must be at least 1");
  std::set<P> seen;
  std::vector<std::vector<P>> cycles;
  for (const P& start : points) {
    if (seen.contains(start)) continue;
    std::vector<P> orbit{start};
    P x = map(start);
    int steps = 1;
    while (!(x == start)) {
      if (steps == n) throw DomainError("point is not periodic with period " + std::to_string(n));
      orbit.push_back(x);
      x = map(x);
      ++steps;
    }
    if (n % steps != 0) throw DomainError("point period does not divide n");
    seen.insert(orbit.begin(), orbit.end());
    if (steps != n) continue;
    std::rotate(orbit.begin(), std::min_element(orbit.begin(), orbit.end()), orbit.end());
    cycles.push_back(std::move(orbit));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const auto& l, const auto& r) { return l.front() < r.front(); });
  return cycles;
}

// Primitive cycles of exact length n for the cat suspension.
std::vector<PrimitiveCycle> cat_cycles(const IntMatrix2& a, int n);

// Points of a cat cycle recovered from its label.
std::vector<TorusPoint> parse_cat_label(const std::string& label);

// Inverse transpose of the product of step differentials around the cycle,
// starting from step `start` (any rotation gives a conjugate matrix).
Matrix poincare_of_cycle(const ModelDescriptor& model, const PrimitiveCycle& cycle,
                         int start = 0);

struct OrbitCountEntry {
  double t = 0.0;
  std::int64_t count = 0;
};

struct OrbitCountTable {
  std::vector<OrbitCountEntry> entries;
  // Least-squares slope of log(T N(T)) against T over the last third of the
  // table, i.e. h in N(T) ~ e^{hT} / (hT).
  double growth_rate = 0.0;
};

// N(T) for T = period_unit, 2 period_unit, ..., counting (gamma, T) pairs
// including repetitions.
OrbitCountTable count_orbits(const ModelDescriptor& model, double t_max);

// Moebius function.
int moebius(int n);

}  // namespace ruelle
