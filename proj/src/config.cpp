#include "dgama/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgama/errors.hpp"

namespace dgama {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

long long to_int(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ParseError(ctx + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ParseError(ctx + ": expected an integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ParseError(ctx + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size())
    throw ParseError(ctx + ": expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, const std::string& ctx) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ParseError(ctx + ": expected a boolean (0/1/true/false), got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& source_name) {
  ExperimentConfig cfg;
  bool have_p = false, have_n = false, have_T = false, have_seed = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string ctx = source_name + ":" + std::to_string(lineno);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(ctx + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ParseError(ctx + ": expected 'key = value'");
    ctx += " (" + key + ")";

    if (key == "p") {
      cfg.p = static_cast<int>(to_int(val, ctx));
      have_p = true;
    } else if (key == "n") {
      cfg.n = static_cast<int>(to_int(val, ctx));
      have_n = true;
    } else if (key == "T") {
      cfg.T = static_cast<int>(to_int(val, ctx));
      have_T = true;
    } else if (key == "seed") {
      long long s = to_int(val, ctx);
      if (s < 0) throw ParseError(ctx + ": seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
      have_seed = true;
    } else if (key == "K") {
      cfg.K = static_cast<int>(to_int(val, ctx));
    } else if (key == "W") {
      cfg.W = static_cast<int>(to_int(val, ctx));
    } else if (key == "t0") {
      cfg.t0 = static_cast<int>(to_int(val, ctx));
    } else if (key == "lambda") {
      cfg.lambda = to_real(val, ctx);
    } else if (key == "edge_prob") {
      cfg.edge_prob = to_real(val, ctx);
    } else if (key == "delta") {
      cfg.delta = to_real(val, ctx);
    } else if (key == "zeta_mode") {
      cfg.zeta_mode = val;
    } else if (key == "zeta_value") {
      cfg.zeta_value = to_real(val, ctx);
    } else if (key == "topology") {
      cfg.topology = val;
    } else if (key == "stream") {
      cfg.stream = val;
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "bounds") {
      cfg.bounds = val;
    } else if (key == "gamma_star_tol") {
      cfg.gamma_star_tol = to_real(val, ctx);
    } else if (key == "trace_rounds") {
      cfg.trace_rounds = to_bool(val, ctx);
    } else if (key == "plot_script") {
      cfg.plot_script = to_bool(val, ctx);
    } else {
      throw ParseError(ctx + ": unknown key");
    }
  }

  if (!have_p) throw ParseError(source_name + ": missing required key 'p'");
  if (!have_n) throw ParseError(source_name + ": missing required key 'n'");
  if (!have_T) throw ParseError(source_name + ": missing required key 'T'");
  if (!have_seed) throw ParseError(source_name + ": missing required key 'seed'");

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "p = " << cfg.p << "\n";
  out << "n = " << cfg.n << "\n";
  out << "T = " << cfg.T << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "K = " << cfg.K << "\n";
  out << "W = " << cfg.W << "\n";
  out << "t0 = " << cfg.t0 << "\n";
  out << "lambda = " << fmt(cfg.lambda) << "\n";
  out << "edge_prob = " << fmt(cfg.edge_prob) << "\n";
  out << "delta = " << fmt(cfg.delta) << "\n";
  out << "zeta_mode = " << cfg.zeta_mode << "\n";
  out << "zeta_value = " << fmt(cfg.zeta_value) << "\n";
  out << "topology = " << cfg.topology << "\n";
  out << "stream = " << cfg.stream << "\n";
  out << "out = " << cfg.out << "\n";
  out << "bounds = " << cfg.bounds << "\n";
  out << "gamma_star_tol = " << fmt(cfg.gamma_star_tol) << "\n";
  out << "trace_rounds = " << (cfg.trace_rounds ? 1 : 0) << "\n";
  out << "plot_script = " << (cfg.plot_script ? 1 : 0) << "\n";
  return out.str();
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.p < 2) throw ValidationError("config: p must be at least 2");
  if (cfg.n < 1) throw ValidationError("config: n must be at least 1");
  if (cfg.T < 1) throw ValidationError("config: T must be at least 1");
  if (cfg.K < 0) throw ValidationError("config: K must be nonnegative");
  if (cfg.W < 1) throw ValidationError("config: W must be at least 1");
  if (cfg.t0 < 1 || cfg.t0 >= cfg.T)
    throw ValidationError("config: t0 must satisfy 1 <= t0 < T");
  if (cfg.lambda < 0.0) throw ValidationError("config: lambda must be nonnegative");
  if (cfg.edge_prob < 0.0 || cfg.edge_prob > 1.0)
    throw ValidationError("config: edge_prob must lie in [0, 1]");
  if (cfg.delta <= 0.0 || cfg.delta >= 0.5)
    throw ValidationError("config: delta must lie in (0, 1/2)");
  if (cfg.zeta_mode != "adaptive" && cfg.zeta_mode != "constant")
    throw ValidationError("config: zeta_mode must be 'adaptive' or 'constant'");
  if (cfg.gamma_star_tol <= 0.0)
    throw ValidationError("config: gamma_star_tol must be positive");
  selected_bounds(cfg);
}

std::vector<std::string> selected_bounds(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.bounds == "none") return out;
  if (cfg.bounds == "auto") {
    if (cfg.zeta_mode == "constant") out.push_back("theorem1");
    out.push_back("eq18");
    return out;
  }
  std::istringstream in(cfg.bounds);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    if (name != "theorem1" && name != "eq18" && name != "corollary2")
      throw ValidationError("config: unknown bound '" + name + "'");
    if ((name == "theorem1" || name == "corollary2") && cfg.zeta_mode != "constant")
      throw ValidationError("config: bound '" + name +
                            "' requires zeta_mode = constant");
    out.push_back(name);
  }
  return out;
}

}  // namespace dgama
