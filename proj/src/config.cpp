#include "bingham/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace bingham {

std::string to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::Ep: return "ep";
    case SolverMethod::Qp: return "qp";
    case SolverMethod::Ssn: return "ssn";
  }
  return "?";
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::Rotational: return "rotational";
    case Preset::Poiseuille: return "poiseuille";
    case Preset::Lid2d: return "lid2d";
    case Preset::Custom: return "custom";
  }
  return "?";
}

std::string to_string(TensorForm f) { return f == TensorForm::Sym ? "sym" : "grad"; }

SolverMethod method_from_string(const std::string& s) {
  if (s == "ep") return SolverMethod::Ep;
  if (s == "qp") return SolverMethod::Qp;
  if (s == "ssn") return SolverMethod::Ssn;
  throw ConfigError("unknown method: " + s);
}

namespace {

Preset preset_from_string(const std::string& s) {
  if (s == "rotational") return Preset::Rotational;
  if (s == "poiseuille") return Preset::Poiseuille;
  if (s == "lid2d") return Preset::Lid2d;
  if (s == "custom") return Preset::Custom;
  throw ConfigError("unknown preset: " + s);
}

TensorForm form_from_string(const std::string& s) {
  if (s == "sym") return TensorForm::Sym;
  if (s == "grad") return TensorForm::Grad;
  throw ConfigError("unknown form: " + s);
}

ForcingSpec::Kind forcing_kind_from_string(const std::string& s) {
  if (s == "zero") return ForcingSpec::Kind::Zero;
  if (s == "constant") return ForcingSpec::Kind::Constant;
  if (s == "rotational") return ForcingSpec::Kind::Rotational;
  throw ConfigError("unknown forcing: " + s);
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    entries.push_back(
        {section, trim(line.substr(0, eq)), unquote(trim(line.substr(eq + 1))), lineno});
  }
  return entries;
}

double to_double(const Entry& e) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(e.line) + ": bad number '" + e.value + "'");
  }
}

int to_int(const Entry& e) {
  const double v = to_double(e);
  if (v != std::floor(v)) throw ConfigError("line " + std::to_string(e.line) + ": expected integer");
  return static_cast<int>(v);
}

bool to_bool(const Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError("line " + std::to_string(e.line) + ": expected true/false");
}

void apply_entry(RunConfig& cfg, const Entry& e) {
  const std::string id = e.section + "." + e.key;
  if (id == "mesh.nx") cfg.mesh.nx = to_int(e);
  else if (id == "mesh.ny") cfg.mesh.ny = to_int(e);
  else if (id == "mesh.x0") cfg.mesh.rect.x0 = to_double(e);
  else if (id == "mesh.y0") cfg.mesh.rect.y0 = to_double(e);
  else if (id == "mesh.x1") cfg.mesh.rect.x1 = to_double(e);
  else if (id == "mesh.y1") cfg.mesh.rect.y1 = to_double(e);
  else if (id == "model.mu") cfg.model.mu = to_double(e);
  else if (id == "model.g") cfg.model.g = to_double(e);
  else if (id == "model.beta") cfg.model.beta = to_double(e);
  else if (id == "model.gamma") cfg.model.gamma = to_double(e);
  else if (id == "model.sigma") cfg.model.sigma = to_double(e);
  else if (id == "model.nu") cfg.model.nu = to_double(e);
  else if (id == "model.form") cfg.model.form = form_from_string(e.value);
  else if (id == "solver.method") cfg.method = method_from_string(e.value);
  else if (id == "solver.tol") cfg.solver.tol = to_double(e);
  else if (id == "solver.max_iter") cfg.solver.max_iter = to_int(e);
  else if (id == "solver.alpha0") cfg.solver.line_search.alpha0 = to_double(e);
  else if (id == "solver.c1") cfg.solver.line_search.c1 = to_double(e);
  else if (id == "solver.c_l") cfg.solver.line_search.c_l = to_double(e);
  else if (id == "solver.c_u") cfg.solver.line_search.c_u = to_double(e);
  else if (id == "solver.max_backtracks") cfg.solver.line_search.max_backtracks = to_int(e);
  else if (id == "solver.cg_tol") cfg.solver.cg_rel_tol = to_double(e);
  else if (id == "solver.cg_max_iter") cfg.solver.cg_max_iter = to_int(e);
  else if (id == "solver.rank_one_fallback") cfg.solver.rank_one_fallback = to_bool(e);
  else if (id == "solver.quad_degree") cfg.solver.quad_degree = to_int(e);
  else if (id == "experiment.preset") { /* consumed in a first pass */ }
  else if (id == "experiment.forcing") cfg.forcing.kind = forcing_kind_from_string(e.value);
  else if (id == "experiment.forcing_fx") cfg.forcing.fx = to_double(e);
  else if (id == "experiment.forcing_fy") cfg.forcing.fy = to_double(e);
  else if (id == "experiment.forcing_scale") cfg.forcing.scale = to_double(e);
  else if (id == "experiment.seed") cfg.seed = static_cast<unsigned>(to_int(e));
  else if (id == "output.dir") cfg.output.dir = e.value;
  else if (id == "output.write_csv") cfg.output.write_csv = to_bool(e);
  else if (id == "output.write_json") cfg.output.write_json = to_bool(e);
  else if (id == "output.write_vtk") cfg.output.write_vtk = to_bool(e);
  else if (id == "output.sigma0_exponent") cfg.sigma0_exponent = to_double(e);
  else if (id == "output.recover_multiplier") cfg.recover_multiplier_flag = to_bool(e);
  else throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + id + "'");
}

} // namespace

void apply_preset(RunConfig& cfg, Preset preset) {
  cfg.preset = preset;
  switch (preset) {
    case Preset::Rotational:
      cfg.model.mu = 1.0;
      cfg.model.g = 10.0 * std::sqrt(2.0);
      cfg.model.beta = 1e3;
      cfg.model.gamma = 1e9;
      cfg.model.sigma = 2000.0;
      cfg.model.nu = 1e6;
      cfg.model.form = TensorForm::Sym;
      cfg.forcing = {ForcingSpec::Kind::Rotational, 0.0, 0.0, 300.0};
      break;
    case Preset::Poiseuille:
      cfg.model.mu = 1.0;
      cfg.model.g = 0.3;
      cfg.model.beta = 1e3;
      cfg.model.gamma = 1e9;
      cfg.model.sigma = 30.0;
      cfg.model.nu = 1e4;
      cfg.model.form = TensorForm::Grad;
      cfg.forcing = {ForcingSpec::Kind::Constant, 1.0, 0.0, 1.0};
      break;
    case Preset::Lid2d:
      cfg.model.mu = 0.5;
      cfg.model.g = 2.0;
      cfg.model.beta = 1e3;
      cfg.model.gamma = 1e9;
      cfg.model.sigma = 1e4;
      cfg.model.nu = 1e4;
      cfg.model.form = TensorForm::Sym;
      cfg.forcing = {ForcingSpec::Kind::Zero, 0.0, 0.0, 1.0};
      break;
    case Preset::Custom:
      break;
  }
}

RunConfig run_config_from_text(const std::string& text) {
  const std::vector<Entry> entries = tokenize(text);
  RunConfig cfg;
  for (const auto& e : entries) {
    if (e.section == "experiment" && e.key == "preset") {
      apply_preset(cfg, preset_from_string(e.value));
    }
  }
  for (const auto& e : entries) {
    apply_entry(cfg, e);
  }
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_config_from_text(ss.str());
}

Forcing make_forcing(const ForcingSpec& spec, const Rect& domain) {
  switch (spec.kind) {
    case ForcingSpec::Kind::Zero:
      return zero_forcing();
    case ForcingSpec::Kind::Constant: {
      const Eigen::Vector2d f(spec.fx, spec.fy);
      return [f](const Eigen::Vector2d&) { return f; };
    }
    case ForcingSpec::Kind::Rotational: {
      const double cx = 0.5 * (domain.x0 + domain.x1);
      const double cy = 0.5 * (domain.y0 + domain.y1);
      const double s = spec.scale;
      return [cx, cy, s](const Eigen::Vector2d& x) {
        return Eigen::Vector2d(s * (x.y() - cy), s * (cx - x.x()));
      };
    }
  }
  return zero_forcing();
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["preset"] = to_string(cfg.preset);
  j["mesh"] = {{"nx", cfg.mesh.nx},
               {"ny", cfg.mesh.ny},
               {"x0", cfg.mesh.rect.x0},
               {"y0", cfg.mesh.rect.y0},
               {"x1", cfg.mesh.rect.x1},
               {"y1", cfg.mesh.rect.y1}};
  j["model"] = {{"mu", cfg.model.mu},     {"g", cfg.model.g},
                {"beta", cfg.model.beta}, {"gamma", cfg.model.gamma},
                {"sigma", cfg.model.sigma}, {"nu", cfg.model.nu},
                {"form", to_string(cfg.model.form)}};
  j["solver"] = {{"method", to_string(cfg.method)},
                 {"tol", cfg.solver.tol},
                 {"max_iter", cfg.solver.max_iter},
                 {"alpha0", cfg.solver.line_search.alpha0},
                 {"c1", cfg.solver.line_search.c1},
                 {"c_l", cfg.solver.line_search.c_l},
                 {"c_u", cfg.solver.line_search.c_u},
                 {"max_backtracks", cfg.solver.line_search.max_backtracks},
                 {"cg_tol", cfg.solver.cg_rel_tol},
                 {"cg_max_iter", cfg.solver.cg_max_iter},
                 {"rank_one_fallback", cfg.solver.rank_one_fallback},
                 {"quad_degree", cfg.solver.quad_degree}};
  const char* kind = cfg.forcing.kind == ForcingSpec::Kind::Zero       ? "zero"
                     : cfg.forcing.kind == ForcingSpec::Kind::Constant ? "constant"
                                                                       : "rotational";
  j["experiment"] = {{"forcing", kind},
                     {"forcing_fx", cfg.forcing.fx},
                     {"forcing_fy", cfg.forcing.fy},
                     {"forcing_scale", cfg.forcing.scale},
                     {"seed", cfg.seed}};
  j["output"] = {{"dir", cfg.output.dir},
                 {"write_csv", cfg.output.write_csv},
                 {"write_json", cfg.output.write_json},
                 {"write_vtk", cfg.output.write_vtk},
                 {"sigma0_exponent", cfg.sigma0_exponent},
                 {"recover_multiplier", cfg.recover_multiplier_flag}};
  return j.dump(2);
}

} // namespace bingham
