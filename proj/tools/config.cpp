#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ridge/expr.hpp"
#include "ridge/geometry.hpp"

namespace ridge::cli {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

// Nested bracketed lists of reals.
struct ListValue {
  bool is_number = false;
  double number = 0.0;
  std::vector<ListValue> items;
};

class ListParser {
 public:
  ListParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  ListValue parse() {
    ListValue v = value();
    skip();
    if (pos_ != s_.size()) fail(line_, "trailing characters after list");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ListValue value() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      ListValue list;
      skip();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return list;
      }
      for (;;) {
        list.items.push_back(value());
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
        } else if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return list;
        } else {
          fail(line_, "expected ',' or ']' in list");
        }
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+')) {
      ++pos_;
    }
    const std::string text(s_.substr(start, pos_ - start));
    ListValue v;
    v.is_number = true;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v.number);
    if (text.empty() || res.ec != std::errc() || res.ptr != end) {
      fail(line_, "malformed number '" + text + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct Entry {
  std::string value;
  std::size_t line;
};

std::size_t as_count(const Entry& e, const char* key) {
  std::size_t v = 0;
  const char* end = e.value.data() + e.value.size();
  const auto res = std::from_chars(e.value.data(), end, v);
  if (e.value.empty() || res.ec != std::errc() || res.ptr != end) {
    fail(e.line, std::string(key) + " must be a nonnegative integer");
  }
  return v;
}

double as_real(const Entry& e, const char* key) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  const auto res = std::from_chars(e.value.data(), end, v);
  if (e.value.empty() || res.ec != std::errc() || res.ptr != end) {
    fail(e.line, std::string(key) + " must be a real number");
  }
  return v;
}

std::vector<Vector> as_matrix(const Entry& e, const char* key, std::size_t rows, std::size_t cols) {
  const ListValue v = ListParser(e.value, e.line).parse();
  if (v.is_number || v.items.size() != rows) {
    fail(e.line, std::string(key) + " must be a list of " + std::to_string(rows) + " rows");
  }
  std::vector<Vector> out;
  for (const auto& row : v.items) {
    if (row.is_number || row.items.size() != cols) {
      fail(e.line, std::string(key) + " rows must hold " + std::to_string(cols) + " numbers");
    }
    Vector r;
    for (const auto& x : row.items) {
      if (!x.is_number) fail(e.line, std::string(key) + " entries must be numbers");
      r.push_back(x.number);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Interval> as_intervals(const Entry& e, const char* key, std::size_t count) {
  std::vector<Interval> out;
  for (const auto& row : as_matrix(e, key, count, 2)) {
    if (!(row[1] > row[0])) fail(e.line, std::string(key) + " intervals need lo < hi");
    out.push_back({row[0], row[1]});
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string matrix_text(const std::vector<Vector>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      if (k) s += ", ";
      s += fmt(m[i][k]);
    }
    s += "]";
  }
  return s + "]";
}

std::string intervals_text(const std::vector<Interval>& iv) {
  std::vector<Vector> m;
  for (const auto& i : iv) m.push_back({i.lo, i.hi});
  return matrix_text(m);
}

enum class Space { X, Y, Constant };

Space space_of(const Expr& e, std::size_t n, const std::string& what) {
  const auto vars = e.free_variables();
  if (vars.empty()) return Space::Constant;
  const auto xs = variable_names("x", n);
  const auto ys = variable_names("y", n);
  bool all_x = true, all_y = true;
  for (const auto& v : vars) {
    all_x = all_x && std::find(xs.begin(), xs.end(), v) != xs.end();
    all_y = all_y && std::find(ys.begin(), ys.end(), v) != ys.end();
  }
  if (all_x) return Space::X;
  if (all_y) return Space::Y;
  throw ConfigError(what + " must use only x1..x" + std::to_string(n) + " or only y1..y" +
                    std::to_string(n));
}

}  // namespace

bool ProblemConfig::unit_weights() const {
  for (const auto& w : weights) {
    if (!parse(w).is_literal_one()) return false;
  }
  return true;
}

ProblemConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string content = trim(raw);
    if (content.empty() || content[0] == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    if (!entries.emplace(key, Entry{value, line}).second) fail(line, "duplicate key '" + key + "'");
  }

  auto take = [&](const std::string& key) -> std::optional<Entry> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    Entry e = it->second;
    entries.erase(it);
    return e;
  };
  auto need = [&](const std::string& key) {
    auto e = take(key);
    if (!e) throw ConfigError("config: missing required key '" + key + "'");
    return *e;
  };

  ProblemConfig cfg;
  const Entry n = need("n");
  cfg.n = as_count(n, "n");
  const Entry r = need("r");
  cfg.r = as_count(r, "r");
  if (cfg.n == 0) fail(n.line, "n must be positive");
  if (cfg.r == 0 || cfg.r > cfg.n) fail(r.line, "r must satisfy 1 <= r <= n");

  cfg.directions = as_matrix(need("directions"), "directions", cfg.r, cfg.n);
  if (auto e = take("completion")) cfg.completion = as_matrix(*e, "completion", cfg.n - cfg.r, cfg.n);
  cfg.intervals = as_intervals(need("intervals"), "intervals", cfg.r);
  if (auto e = take("box0")) {
    cfg.box0 = as_intervals(*e, "box0", cfg.n - cfg.r);
  } else if (cfg.n > cfg.r) {
    throw ConfigError("config: missing required key 'box0'");
  }

  auto f = take("f");
  auto f_star = take("f_star");
  if (static_cast<bool>(f) == static_cast<bool>(f_star)) {
    throw ConfigError("config: exactly one of 'f' and 'f_star' is required");
  }
  auto check_expr = [](const Entry& e) {
    try {
      parse(e.value);
    } catch (const ParseError& err) {
      fail(e.line, err.what());
    }
  };
  if (f) {
    check_expr(*f);
    cfg.f = f->value;
  } else {
    check_expr(*f_star);
    cfg.f_star = f_star->value;
  }

  for (std::size_t i = 1; i <= cfg.r; ++i) {
    if (auto w = take("w" + std::to_string(i))) {
      check_expr(*w);
      cfg.weights.push_back(w->value);
    } else {
      cfg.weights.push_back("1");
    }
  }

  if (auto e = take("q")) {
    cfg.q = as_count(*e, "q");
    if (cfg.q == 0) fail(e->line, "q must be positive");
  }
  if (auto e = take("tolerance")) cfg.solver.tolerance = as_real(*e, "tolerance");
  if (auto e = take("max_sweeps")) cfg.solver.max_sweeps = as_count(*e, "max_sweeps");
  if (auto e = take("damping")) cfg.solver.damping = as_real(*e, "damping");
  if (auto e = take("init")) {
    if (e->value == "zeros") {
      cfg.solver.init = InitMode::Zeros;
    } else if (e->value == "closed_form") {
      cfg.solver.init = InitMode::ClosedForm;
    } else {
      fail(e->line, "init must be 'zeros' or 'closed_form'");
    }
  }
  try {
    cfg.solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (!entries.empty()) {
    const auto& [key, e] = *entries.begin();
    fail(e.line, "unknown key '" + key + "'");
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const ProblemConfig& cfg) {
  std::string s;
  s += "n = " + std::to_string(cfg.n) + "\n";
  s += "r = " + std::to_string(cfg.r) + "\n";
  s += "directions = " + matrix_text(cfg.directions) + "\n";
  if (cfg.completion) s += "completion = " + matrix_text(*cfg.completion) + "\n";
  s += "intervals = " + intervals_text(cfg.intervals) + "\n";
  if (!cfg.box0.empty()) s += "box0 = " + intervals_text(cfg.box0) + "\n";
  if (!cfg.f.empty()) {
    s += "f = " + cfg.f + "\n";
  } else {
    s += "f_star = " + cfg.f_star + "\n";
  }
  for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
    s += "w" + std::to_string(i + 1) + " = " + cfg.weights[i] + "\n";
  }
  s += "q = " + std::to_string(cfg.q) + "\n";
  s += "tolerance = " + fmt(cfg.solver.tolerance) + "\n";
  s += "max_sweeps = " + std::to_string(cfg.solver.max_sweeps) + "\n";
  s += "damping = " + fmt(cfg.solver.damping) + "\n";
  s += std::string("init = ") +
       (cfg.solver.init == InitMode::Zeros ? "zeros" : "closed_form") + "\n";
  return s;
}

Instance build_instance(const ProblemConfig& cfg) {
  DirectionBasis basis = DirectionBasis::build(cfg.directions, cfg.completion);
  RSetDomain dom(cfg.intervals, cfg.box0, cfg.q);

  auto to_grid = [&](const std::string& text, const std::string& what, Space forced) {
    const Expr e = parse(text);
    Space space = space_of(e, cfg.n, what);
    if (space == Space::Constant) space = Space::Y;
    else if (forced != Space::Constant && space != forced) {
      throw ConfigError(what + " must use only " + (forced == Space::X ? "x" : "y") +
                        "-variables");
    }
    return sample(dom, space == Space::X ? pullback(basis, e) : y_function(e, cfg.n));
  };

  GridFunction f_star = cfg.f.empty() ? to_grid(cfg.f_star, "f_star", Space::Y)
                                      : to_grid(cfg.f, "f", Space::X);
  std::vector<GridFunction> weights;
  for (std::size_t i = 0; i < cfg.r; ++i) {
    weights.push_back(to_grid(cfg.weights[i], "w" + std::to_string(i + 1), Space::Constant));
  }
  WeightedProblem problem(std::move(f_star), std::move(weights), basis);
  return {std::move(basis), std::move(dom), std::move(problem), cfg.unit_weights()};
}

}  // namespace ridge::cli
