#pragma once

#include "bingham/solvers.hpp"

#include <string>

namespace bingham {

enum class SolverMethod { Ep, Qp, Ssn };
enum class Preset { Rotational, Poiseuille, Lid2d, Custom };

std::string to_string(SolverMethod m);
std::string to_string(Preset p);
std::string to_string(TensorForm f);
SolverMethod method_from_string(const std::string& s);

/// Forcing specification resolvable without code: zero, a constant vector, or
/// the rotational driving force scale*(y-cy, cx-x) about the domain center.
struct ForcingSpec {
  enum class Kind { Zero, Constant, Rotational } kind = Kind::Zero;
  double fx = 0.0;
  double fy = 0.0;
  double scale = 1.0;
};

struct MeshConfig {
  int nx = 32;
  int ny = 32;
  Rect rect;
};

struct OutputConfig {
  std::string dir = "out";
  bool write_csv = true;
  bool write_json = true;
  bool write_vtk = true;
};

/// Fully resolved run description. Presets fill defaults; explicit keys in
/// the config file override them.
struct RunConfig {
  Preset preset = Preset::Custom;
  MeshConfig mesh;
  ModelParams model;
  SolverMethod method = SolverMethod::Ep;
  SolverOptions solver;
  ForcingSpec forcing;
  OutputConfig output;
  double sigma0_exponent = -0.5;
  bool recover_multiplier_flag = true; // ep runs report a sigma_0 estimate
  unsigned seed = 20240501;            // gradcheck randomness
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the sectioned key = value format ([mesh], [model], [solver],
/// [experiment], [output]). Unknown sections or keys are errors.
RunConfig parse_run_config(const std::string& path);
RunConfig run_config_from_text(const std::string& text);

void apply_preset(RunConfig& cfg, Preset preset);

Forcing make_forcing(const ForcingSpec& spec, const Rect& domain);

/// JSON object of the fully resolved configuration (reproducibility record).
std::string config_to_json(const RunConfig& cfg);

} // namespace bingham
