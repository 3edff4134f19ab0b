#include "results_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ridge/gauss_legendre.hpp"

namespace ridge::cli {
namespace fs = std::filesystem;

namespace {

std::string column_name(std::size_t index) { return "g" + std::to_string(index + 1); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResultsError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResultsError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw ResultsError("cannot write '" + path.string() + "'");
}

double parse_real(std::string_view s, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ResultsError(path.string() + ":" + std::to_string(line) + ": malformed number '" +
                       std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string summary_json(const Summary& s) {
  std::string j = "{\n";
  auto field = [&](const std::string& key, const std::string& value, bool last = false) {
    j += "  \"" + key + "\": " + value + (last ? "\n" : ",\n");
  };
  field("method", "\"" + s.method + "\"");
  field("n", std::to_string(s.n));
  field("r", std::to_string(s.r));
  field("q", std::to_string(s.q));
  field("det_j", format_real(s.det_j));
  field("a", format_real(s.a));
  field("error", format_real(s.error));
  field("residual_error", format_real(s.residual_error));
  field("orthogonality_defect", format_real(s.orthogonality_defect));
  field("characterization_defect",
        "{\"value\": " + format_real(s.characterization.value) +
            ", \"component\": " + std::to_string(s.characterization.axis + 1) +
            ", \"node\": " + std::to_string(s.characterization.node) + "}");
  std::string history = "[";
  for (std::size_t i = 0; i < s.convergence.residual_history.size(); ++i) {
    if (i) history += ", ";
    history += format_real(s.convergence.residual_history[i]);
  }
  history += "]";
  field("convergence", std::string("{\"converged\": ") +
                           (s.convergence.converged ? "true" : "false") +
                           ", \"sweeps\": " + std::to_string(s.convergence.sweeps) +
                           ", \"last_change\": " + format_real(s.convergence.last_change) +
                           ", \"residual_history\": " + history + "}");
  field("warning", s.convergence.converged ? "null" : "\"not converged\"");
  std::string intervals = "[";
  std::string components = "[";
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    if (i) {
      intervals += ", ";
      components += ", ";
    }
    intervals += "[" + format_real(s.intervals[i].lo) + ", " + format_real(s.intervals[i].hi) + "]";
    components += "\"" + column_name(i) + ".csv\"";
  }
  field("intervals", intervals + "]");
  field("components", components + "]", true);
  return j + "}\n";
}

std::string component_csv(std::size_t index, const ComponentTable& table) {
  std::string s = "y," + column_name(index) + "\n";
  for (std::size_t k = 0; k < table.nodes.size(); ++k) {
    s += format_real(table.nodes[k]) + "," + format_real(table.values[k]) + "\n";
  }
  return s;
}

std::string dense_csv(std::size_t index, const ComponentTable& table, const Interval& span,
                      std::size_t points) {
  if (points < 2) throw InvalidArgument("dense resampling needs at least 2 points");
  const BarycentricInterpolant interp(table.nodes, table.values);
  std::string s = "y," + column_name(index) + "\n";
  for (std::size_t k = 0; k < points; ++k) {
    const double t = k + 1 == points
                         ? span.hi
                         : span.lo + span.length() * static_cast<double>(k) /
                                         static_cast<double>(points - 1);
    s += format_real(t) + "," + format_real(interp(t)) + "\n";
  }
  return s;
}

ComponentTable component_table(const RSetDomain& dom, const RidgeComponent& c) {
  const auto nodes = dom.nodes(c.axis);
  return {std::vector<double>(nodes.begin(), nodes.end()), c.values};
}

void write_results(const fs::path& dir, const Summary& s,
                   const std::vector<ComponentTable>& tables, const std::string& config_echo) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ResultsError("cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "summary.json", summary_json(s));
  write_file(dir / "config.txt", config_echo);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    write_file(dir / (column_name(i) + ".csv"), component_csv(i, tables[i]));
  }
}

void write_dense(const fs::path& dir, std::size_t points) {
  const Summary s = read_summary(dir);
  for (std::size_t i = 0; i < s.r; ++i) {
    const ComponentTable table = read_component(dir, i);
    write_file(dir / (column_name(i) + "_dense.csv"),
               dense_csv(i, table, s.intervals[i], points));
  }
}

Summary read_summary(const fs::path& dir) {
  const fs::path path = dir / "summary.json";
  const std::string text = read_file(path);
  Summary s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.method = j.at("method").get<std::string>();
    s.n = j.at("n").get<std::size_t>();
    s.r = j.at("r").get<std::size_t>();
    s.q = j.at("q").get<std::size_t>();
    s.det_j = j.at("det_j").get<double>();
    s.a = j.at("a").get<double>();
    s.error = j.at("error").get<double>();
    s.residual_error = j.at("residual_error").get<double>();
    s.orthogonality_defect = j.at("orthogonality_defect").get<double>();
    const auto& cd = j.at("characterization_defect");
    s.characterization.value = cd.at("value").get<double>();
    s.characterization.axis = cd.at("component").get<std::size_t>() - 1;
    s.characterization.node = cd.at("node").get<std::size_t>();
    const auto& conv = j.at("convergence");
    s.convergence.converged = conv.at("converged").get<bool>();
    s.convergence.sweeps = conv.at("sweeps").get<std::size_t>();
    s.convergence.last_change = conv.at("last_change").get<double>();
    s.convergence.residual_history = conv.at("residual_history").get<std::vector<double>>();
    for (const auto& iv : j.at("intervals")) {
      s.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ResultsError("corrupt '" + path.string() + "': " + e.what());
  }
  if (s.r == 0 || s.intervals.size() != s.r) {
    throw ResultsError("corrupt '" + path.string() + "': interval count does not match r");
  }
  return s;
}

ComponentTable read_component(const fs::path& dir, std::size_t index) {
  const fs::path path = dir / (column_name(index) + ".csv");
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "y," + column_name(index)) {
    throw ResultsError(path.string() + ":1: expected header 'y," + column_name(index) + "'");
  }
  ComponentTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ResultsError(path.string() + ":" + std::to_string(lineno) + ": expected 'y,value'");
    }
    const std::string_view view(line);
    table.nodes.push_back(parse_real(view.substr(0, comma), path, lineno));
    table.values.push_back(parse_real(view.substr(comma + 1), path, lineno));
  }
  if (table.nodes.empty()) throw ResultsError(path.string() + ": no data rows");
  return table;
}

std::vector<RidgeComponent> read_components(const fs::path& dir, const RSetDomain& dom) {
  std::vector<RidgeComponent> out;
  for (std::size_t i = 0; i < dom.r(); ++i) {
    const ComponentTable table = read_component(dir, i);
    const auto nodes = dom.nodes(i);
    if (table.nodes.size() != nodes.size()) {
      throw ResultsError(column_name(i) + ".csv has " + std::to_string(table.nodes.size()) +
                         " rows but the config implies " + std::to_string(nodes.size()));
    }
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (std::abs(table.nodes[k] - nodes[k]) > 1e-12 * (1.0 + std::abs(nodes[k]))) {
        throw ResultsError(column_name(i) + ".csv node " + std::to_string(k) +
                           " does not match the config's quadrature nodes");
      }
    }
    out.push_back({i, table.values});
  }
  return out;
}

}  // namespace ridge::cli
