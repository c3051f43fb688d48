#pragma once

#include "cicg/datagen.hpp"
#include "cicg/model.hpp"
#include "cicg/objectives.hpp"
#include "cicg/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cicg {

/// Everything one experiment needs. Defaults are the hard-regime settings:
/// alpha 1.2, delta 1e-12, gamma 0.55, sigma_k 0.8, sigma_eps 0.35,
/// lambda 0.35, ridge 1e-8, Cauchy marginals, R 15, eta 1e-3, M_p 10,
/// 70 iterations, 50 runs, nu 2.2, rho 0.85.
struct ExperimentConfig
{
  NoiseSpec noise;
  CicConfig cic;
  MarginalConfig marginal;
  MetricConfig metric;
  HuberLoss huber;
  StudentTLoss student;
  MccLoss mcc;
  CgConfig cg;
  MlpSpec mlp;
  DatasetSizes sizes;
  std::vector<std::string> methods{ "mse", "huber", "student_t", "mcc", "cic_cg" };
  std::size_t mc_runs = 50;
  std::uint64_t seed = 1;
  std::size_t workers = 0; //!< 0 = hardware concurrency
  std::filesystem::path output_dir = "results";

  static ExperimentConfig hard_regime_defaults();

  /// Sets one field by its config-file key. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  void validate() const;
  /// Key = value dump that load_config() reads back.
  std::string to_text() const;
};

/// Known method names: mse, huber, student_t, mcc, cic_cg, cic_gamma0, cic_pure.
const std::vector<std::string>& known_methods();
ObjectiveSpec method_objective(const ExperimentConfig& cfg, std::string_view method);

/// Parses `key = value` lines; '#' starts a comment.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path,
                             ExperimentConfig base = ExperimentConfig::hard_regime_defaults());

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CICG_OUTPUT_DIR";

} // namespace cicg
