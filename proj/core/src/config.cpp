#include "rdmood/config.hpp"

#include <fstream>
#include <sstream>

namespace rdmood {

DecConfig RunConfig::dec_config() const {
  DecConfig dec = dec_for_degree(order);
  if (subintervals) dec.subintervals = *subintervals;
  if (corrections) dec.corrections = *corrections;
  return dec;
}

DetectorConfig RunConfig::detector_config() const {
  DetectorConfig det;
  det.se = se;
  det.eps1 = eps1.value_or(1e-3);
  det.eps2 = eps2.value_or(0.0);
  det.variable = variable;
  det.cascade = {SchemeLevel::galerkin, SchemeLevel::rusanov_psi};
  if (full_cascade) det.cascade.push_back(SchemeLevel::rusanov);
  return det;
}

JumpParams RunConfig::jump_params(int dim) const {
  JumpParams jp;
  if (dim == 1)
    jp = (order == 3) ? JumpParams{3.0, 10.0} : JumpParams{1.0, 0.0};
  else
    jp = (order == 3) ? JumpParams{0.02, 0.0} : JumpParams{0.01, 0.0};
  if (theta1) jp.theta1 = *theta1;
  if (theta2) jp.theta2 = *theta2;
  return jp;
}

SolverOptions RunConfig::solver_options(int dim, double final_time) const {
  (void)dim;
  SolverOptions opts;
  opts.cfl = cfl;
  opts.final_time = final_time;
  opts.dec = dec_config();
  opts.detector = detector_config();
  opts.use_mood = use_mood;
  return opts;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size()) throw std::runtime_error("invalid number for key '" + key + "': " + value);
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  size_t pos = 0;
  long v;
  try {
    v = std::stol(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size()) throw std::runtime_error("invalid integer for key '" + key + "': " + value);
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw std::runtime_error("invalid boolean for key '" + key + "' (use on|off): " + value);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "case") {
    cfg.case_name = value;
  } else if (key == "order") {
    cfg.order = parse_int(key, value);
    if (cfg.order < 1 || cfg.order > 3)
      throw std::runtime_error("order must be 1, 2 or 3 (got " + value + ")");
  } else if (key == "M") {
    cfg.subintervals = parse_int(key, value);
    if (*cfg.subintervals < 1) throw std::runtime_error("M must be >= 1");
  } else if (key == "R") {
    cfg.corrections = parse_int(key, value);
    if (*cfg.corrections < 1) throw std::runtime_error("R must be >= 1");
  } else if (key == "cfl") {
    cfg.cfl = parse_double(key, value);
    if (!(cfg.cfl > 0.0)) throw std::runtime_error("cfl must be positive");
  } else if (key == "cells") {
    cfg.cells = parse_int(key, value);
    if (*cfg.cells < 1) throw std::runtime_error("cells must be >= 1");
    if (!cfg.mesh_file.empty())
      throw std::runtime_error("'cells' conflicts with 'mesh'; give only one");
  } else if (key == "mesh") {
    cfg.mesh_file = value;
    if (cfg.cells) throw std::runtime_error("'mesh' conflicts with 'cells'; give only one");
  } else if (key == "se") {
    if (value == "cse")
      cfg.se = SeVariant::cse;
    else if (value == "lse")
      cfg.se = SeVariant::lse;
    else if (value == "none")
      cfg.se = SeVariant::none;
    else
      throw std::runtime_error("invalid se '" + value + "' (valid: cse, lse, none)");
  } else if (key == "eps1") {
    cfg.eps1 = parse_double(key, value);
    if (*cfg.eps1 < 0.0) throw std::runtime_error("eps1 must be >= 0");
  } else if (key == "eps2") {
    cfg.eps2 = parse_double(key, value);
    if (*cfg.eps2 < 0.0) throw std::runtime_error("eps2 must be >= 0");
  } else if (key == "theta1") {
    cfg.theta1 = parse_double(key, value);
  } else if (key == "theta2") {
    cfg.theta2 = parse_double(key, value);
  } else if (key == "cascade") {
    if (value == "full")
      cfg.full_cascade = true;
    else if (value == "reduced")
      cfg.full_cascade = false;
    else
      throw std::runtime_error("invalid cascade '" + value + "' (valid: full, reduced)");
  } else if (key == "variable") {
    if (value == "density")
      cfg.variable = DetectionVariable::density;
    else if (value == "all")
      cfg.variable = DetectionVariable::all;
    else
      throw std::runtime_error("invalid variable '" + value + "' (valid: density, all)");
  } else if (key == "mood") {
    cfg.use_mood = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "every") {
    cfg.output_every = parse_int(key, value);
    if (cfg.output_every < 0) throw std::runtime_error("every must be >= 0");
  } else {
    throw std::runtime_error("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string config_to_string(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "case = " << cfg.case_name << "\n";
  os << "order = " << cfg.order << "\n";
  os << "M = " << cfg.dec_config().subintervals << "\n";
  os << "R = " << cfg.dec_config().corrections << "\n";
  os << "cfl = " << cfg.cfl << "\n";
  if (!cfg.mesh_file.empty())
    os << "mesh = " << cfg.mesh_file << "\n";
  else if (cfg.cells)
    os << "cells = " << *cfg.cells << "\n";
  os << "se = " << (cfg.se == SeVariant::cse ? "cse" : cfg.se == SeVariant::lse ? "lse" : "none")
     << "\n";
  const DetectorConfig det = cfg.detector_config();
  os << "eps1 = " << det.eps1 << "\n";
  os << "eps2 = " << det.eps2 << "\n";
  if (cfg.theta1) os << "theta1 = " << *cfg.theta1 << "\n";
  if (cfg.theta2) os << "theta2 = " << *cfg.theta2 << "\n";
  os << "cascade = " << (cfg.full_cascade ? "full" : "reduced") << "\n";
  os << "variable = " << (cfg.variable == DetectionVariable::all ? "all" : "density") << "\n";
  os << "mood = " << (cfg.use_mood ? "on" : "off") << "\n";
  if (!cfg.out_dir.empty()) os << "out = " << cfg.out_dir << "\n";
  os << "every = " << cfg.output_every << "\n";
  return os.str();
}

}  // namespace rdmood
