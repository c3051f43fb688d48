#pragma once

#include "cicg/experiment.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cicg {

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail; //!< may span several lines
};

/// Analytic CIC gradient vs central differences with frozen marginals and
/// metric, over `draws` random (w, dataset, CicConfig). Max rel. error <= tol.
CheckResult check_gradient_oracle(std::size_t draws = 20, double tol = 1e-5, std::uint64_t seed = 11);

/// (1/N) sum kappa_n in (0, 1] and J in [-1, 0) on random evaluations.
CheckResult check_objective_bounds(std::size_t evaluations = 1000, std::uint64_t seed = 12);

/// gamma = 0 vs MCC, gamma = 1 without the marginal term, and
/// alpha = 2 / Sigma = I / delta = 0 vs exp(-|u - u0|^2), to 1e-12.
CheckResult check_limit_identities(std::size_t draws = 10, std::uint64_t seed = 13);

/// Per-iteration safeguards on recorded CG iterations: sufficient descent,
/// bounded direction, strong Wolfe at the accepted step, within-block
/// descent and the Zoutendijk summand bound.
CheckResult check_safeguards(const std::vector<IterationRecord>& records, const CgConfig& cfg);

/// |g| < 1e-8 within q + 5 iterations on a q-dimensional convex quadratic.
CheckResult check_quadratic_termination(std::size_t q = 101, std::uint64_t seed = 14);

/// Copula-transform KS uniformity, metric PD under rank-deficient input,
/// and the noise-sampler correlation, tail and Kendall-tau properties.
std::vector<CheckResult> check_statistical_suites(std::uint64_t seed = 15);

/// CIC-CG below every other method on mean RMSE, Q90 and Q95, and in at
/// least `min_fraction` of paired runs.
CheckResult check_hard_regime_ordering(const MonteCarloResult& mc, double min_fraction = 0.6);

/// At every rho, cic_cg mean Q95 <= each baseline's; at rho >= 0.75 the
/// gamma = 0 variant does not beat cic_cg.
CheckResult check_rho_sweep(const SweepResult& sweep);

/// Mean RMSE nonincreasing in nu within one pooled standard error for every
/// method, and the MSE - CIC-CG gap largest at the smallest nu.
CheckResult check_nu_sweep(const SweepResult& sweep);

/// The quick suites: gradient oracle, bounds, limits, quadratic, statistical,
/// and the safeguards on one short hard-regime run.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 1);

double kendall_tau(std::span<const double> x, std::span<const double> y);
double ks_uniform_statistic(std::vector<double> u);

} // namespace cicg
