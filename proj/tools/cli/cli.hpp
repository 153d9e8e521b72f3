#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruelle/models.hpp"
#include "ruelle/resonances.hpp"

namespace ruelle::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

struct RunConfig {
  std::string command;

  std::string model = "basic";
  std::array<std::int64_t, 4> a{2, 1, 1, 1};
  double lambda_u = 3.0;
  double lambda_s = 0.25;

  double t_max = 12.0;
  int degree = 0;
  // A single spectral parameter, or a grid over `region`.
  std::optional<Complex> lambda;
  std::optional<Rect> region;
  std::optional<GridSize> grid;
  bool log_derivative = false;

  // resolvent
  std::string function = "bump";
  int points = 21;
  // verify
  double trapped_time = 10.0;
  int convexity_resolution = 100;

  std::string out;
  std::string format = "csv";

  // Throws DomainError when a field is outside its documented range.
  void validate() const;
  ModelDescriptor make_model() const;
};

// Fields present in a JSON object override `base`. Keys mirror RunConfig:
// model, A, lambda_u, lambda_s, tmax, degree, lambda [re, im],
// region [re_min, re_max, im_min, im_max], grid [nx, ny], log_derivative,
// f, points, trapped_time, convexity_resolution, out, format.
RunConfig merge_config_json(std::string_view json_text, RunConfig base);

// Entry point behind the `ruelle` executable. Results go to `out` unless
// --out names a file; diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruelle::cli
