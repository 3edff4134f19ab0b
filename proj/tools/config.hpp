#pragma once

// Problem description file.
//
//   # comment
//   key = value
//
// Numeric lists use brackets: `directions = [[1, 1, 1, -1], [1, 1, -1, 1]]`.
// Expressions run to the end of the line. Keys:
//
//   n, r                 dimension and number of ridge directions (required)
//   directions           r rows of n reals (required)
//   completion           n - r rows of n reals (optional; default: standard vectors)
//   intervals            r pairs [lo, hi] for Y_1..Y_r (required)
//   box0                 n - r pairs [lo, hi] for Y_0 (required when r < n)
//   f | f_star           exactly one: f in x1..xn, or f_star in y1..yn
//   w1 .. wr             weights in x1..xn or y1..yn (optional; default 1)
//   q                    Gauss nodes per axis (default 8)
//   tolerance            fixed-point tolerance (default 1e-10)
//   max_sweeps           fixed-point sweep limit (default 10000)
//   damping              fixed-point damping in (0, 1] (default 1)
//   init                 zeros | closed_form (default zeros)

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ridge/domain.hpp"
#include "ridge/error.hpp"
#include "ridge/weighted.hpp"

namespace ridge::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ProblemConfig {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<Vector> directions;
  std::optional<std::vector<Vector>> completion;
  std::vector<Interval> intervals;
  std::vector<Interval> box0;
  std::string f;       // exactly one of f / f_star is non-empty
  std::string f_star;
  std::vector<std::string> weights;  // r entries; "1" when absent
  std::size_t q = RSetDomain::kDefaultOrder;
  SolverConfig solver;

  /// All weights are the literal 1.
  bool unit_weights() const;
};

ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::string& path);

/// Canonical text form; parses back to an equivalent config.
std::string to_text(const ProblemConfig& cfg);

/// Everything needed to run a solver, built from a config.
struct Instance {
  DirectionBasis basis;
  RSetDomain domain;
  WeightedProblem problem;
  bool unit_weights;
};

Instance build_instance(const ProblemConfig& cfg);

}  // namespace ridge::cli
