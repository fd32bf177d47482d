#ifndef NESS_CONFIG_HPP
#define NESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ness/angular_kernel.hpp"
#include "ness/dsmc.hpp"
#include "ness/entropy.hpp"
#include "ness/spectral.hpp"

namespace ness {

struct KernelSpec {
  AngularKernel::Kind kind = AngularKernel::Kind::Isotropic;
  double a = 0.0;
  std::size_t nodes = 64;

  AngularKernel build() const { return make_kernel(kind, a, nodes); }
};

struct MixtureSpec {
  std::vector<double> weights{0.5, 0.5};
  std::vector<double> temps{0.2, 7.0 / 15.0};
};

struct OuSpec {
  std::vector<OuReservoir> reservoirs{{1.0, 0.2}, {1.0, 0.6}};
  bool internal_collisions = true;
};

struct JumpSpec {
  std::vector<JumpReservoir> reservoirs{{1.0, 0.2}, {1.0, 0.6}};
};

/// Fully validated run description; every module precondition named in the
/// schema is checked at parse time, unknown keys are rejected with their path.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  double gamma = 0.5;
  KernelSpec kernel;
  RadialGrid grid;
  std::optional<MixtureSpec> mixture;
  std::optional<OuSpec> ou;
  std::optional<JumpSpec> jump;

  struct Numerics {
    double dt = 0.02;
    double t_end = 40.0;
    double tol = 1e-8;
    std::size_t max_iter = 200;
    double record_interval = 0.2;
  } numerics;

  struct Dsmc {
    std::size_t n_particles = 100000;
    std::size_t replicas = 16;
    double init_temperature = 1.0 / 3.0;
    Vec3 init_shift = {0.0, 0.0, 0.0};
    std::vector<double> snapshot_times;
  } dsmc;

  struct Density {
    double v_max = 8.0;
    std::size_t m = 1024;
  } density;

  struct Evolve {
    std::string start = "reservoir";  // or "maxwellian"
    double start_temperature = 0.5;
  } evolve;

  struct Entropy {
    double hot_start_temperature = 2.0;
    double trajectory_t_end = 4.0;
  } entropy;

  std::filesystem::path out_dir = "out";

  /// Effective config (defaults filled) for provenance echo.
  nlohmann::json echo() const;
};

/// Parse and validate a config object. Throws ConfigError naming the key
/// path for unknown keys, type mismatches and constraint violations.
RunConfig parse_config(const nlohmann::json& j);

/// Load a config file (JSON) and parse it.
RunConfig load_config_file(const std::filesystem::path& path);

/// Apply a --set style dotted-path override onto a raw JSON object. The
/// value string is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& key_path,
                    const std::string& value);

}  // namespace ness

#endif
