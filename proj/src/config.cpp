#include "contilearn/config.hpp"

#include "contilearn/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace contilearn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" +
                      std::string(text) + "'");
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ConfigError("config key '" + std::string(key) +
                      "': not a non-negative integer: '" + std::string(text) + "'");
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true or false");
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"iterations",
       [](RunConfig& c, auto k, auto v) {
         const auto n = to_unsigned(k, v);
         if (n > 64) throw ConfigError("config key 'iterations': must be <= 64");
         c.engine.iterations = static_cast<int>(n);
       }},
      {"replicates",
       [](RunConfig& c, auto k, auto v) {
         c.engine.bootstrap.replicates = static_cast<std::size_t>(to_unsigned(k, v));
       }},
      {"seed", [](RunConfig& c, auto k, auto v) { c.engine.bootstrap.seed = to_unsigned(k, v); }},
      {"rel_threshold", [](RunConfig& c, auto k, auto v) { c.engine.rel_threshold = to_double(k, v); }},
      {"k_max",
       [](RunConfig& c, auto k, auto v) { c.engine.k_max = static_cast<Index>(to_unsigned(k, v)); }},
      {"prior_grid",
       [](RunConfig& c, auto k, std::string_view v) {
         c.engine.prior_grid.clear();
         while (true) {
           const auto comma = v.find(',');
           c.engine.prior_grid.push_back(to_double(k, v.substr(0, comma)));
           if (comma == std::string_view::npos) break;
           v.remove_prefix(comma + 1);
         }
       }},
      {"grad_tol", [](RunConfig& c, auto k, auto v) { c.engine.solver.grad_tol = to_double(k, v); }},
      {"max_iters",
       [](RunConfig& c, auto k, auto v) {
         c.engine.solver.max_iters = static_cast<int>(to_unsigned(k, v));
       }},
      {"algebra_check", [](RunConfig& c, auto k, auto v) { c.engine.algebra_check = to_bool(k, v); }},
      {"closure_epsilon",
       [](RunConfig& c, auto k, auto v) { c.engine.closure_epsilon = to_double(k, v); }},
      {"has_header", [](RunConfig& c, auto k, auto v) { c.has_header = to_bool(k, v); }},
      {"data", [](RunConfig& c, auto, auto v) { c.data_path = std::string(trim(v)); }},
      {"out", [](RunConfig& c, auto, auto v) { c.out_path = std::string(trim(v)); }},
  };
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    if (!seen.emplace(key).second)
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    try {
      it->second(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    config.engine.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  const EngineConfig& e = config.engine;
  std::string grid;
  for (std::size_t i = 0; i < e.prior_grid.size(); ++i) {
    if (i) grid += ",";
    grid += format_double(e.prior_grid[i]);
  }
  return {
      {"iterations", std::to_string(e.iterations)},
      {"replicates", std::to_string(e.bootstrap.replicates)},
      {"seed", std::to_string(e.bootstrap.seed)},
      {"rel_threshold", format_double(e.rel_threshold)},
      {"k_max", std::to_string(e.k_max)},
      {"prior_grid", grid},
      {"grad_tol", format_double(e.solver.grad_tol)},
      {"max_iters", std::to_string(e.solver.max_iters)},
      {"algebra_check", e.algebra_check ? "true" : "false"},
      {"closure_epsilon", format_double(e.closure_epsilon)},
      {"has_header", config.has_header ? "true" : "false"},
  };
}

}  // namespace contilearn
