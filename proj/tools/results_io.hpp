#pragma once

// Results directory layout:
//   summary.json   one record, fixed field order, reals as %.17g
//   config.txt     canonical echo of the config that produced the results
//   gI.csv         header `y,gI`, one row per axis-I Gauss node
//   gI_dense.csv   optional equispaced resampling, same header

#include <filesystem>
#include <string>
#include <vector>

#include "ridge/domain.hpp"
#include "ridge/error.hpp"
#include "ridge/solution.hpp"

namespace ridge::cli {

class ResultsError : public Error {
 public:
  using Error::Error;
};

/// Node coordinates and values of one component.
struct ComponentTable {
  std::vector<double> nodes;
  std::vector<double> values;
};

struct Summary {
  std::string method;
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t q = 0;
  double det_j = 0.0;
  double a = 0.0;
  double error = 0.0;
  double residual_error = 0.0;
  double orthogonality_defect = 0.0;
  Defect characterization;
  Convergence convergence;
  std::vector<Interval> intervals;
};

std::string format_real(double v);

std::string summary_json(const Summary& s);
std::string component_csv(std::size_t index, const ComponentTable& table);

/// Equispaced resampling through the nodes, `points` >= 2 including both ends.
std::string dense_csv(std::size_t index, const ComponentTable& table, const Interval& span,
                      std::size_t points);

ComponentTable component_table(const RSetDomain& dom, const RidgeComponent& c);

void write_results(const std::filesystem::path& dir, const Summary& s,
                   const std::vector<ComponentTable>& tables, const std::string& config_echo);

/// Writes gI_dense.csv for every component listed in the directory's summary.
void write_dense(const std::filesystem::path& dir, std::size_t points);

Summary read_summary(const std::filesystem::path& dir);
ComponentTable read_component(const std::filesystem::path& dir, std::size_t index);

/// Components read back and checked against the nodes of `dom`.
std::vector<RidgeComponent> read_components(const std::filesystem::path& dir,
                                            const RSetDomain& dom);

}  // namespace ridge::cli
