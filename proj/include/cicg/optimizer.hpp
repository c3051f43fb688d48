#pragma once

#include "cicg/dense.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cicg {

struct Evaluation
{
  double value = 0.0;
  Vector gradient;
};

/// Smooth objective minimized by the CG engine. `refresh` re-estimates any
/// frozen estimator state from the current iterate; between two refreshes
/// the objective must be a fixed function of w.
class DifferentiableObjective
{
public:
  virtual ~DifferentiableObjective() = default;
  virtual std::size_t dimension() const = 0;
  virtual Evaluation evaluate(std::span<const double> w) = 0;
  virtual void refresh(std::span<const double> /*w*/) {}
};

struct CgConfig
{
  double eta = 1e-3;              //!< sufficient-descent restart threshold
  double c1 = 1e-4;               //!< Armijo constant
  double c2 = 0.1;                //!< strong Wolfe curvature constant
  double max_direction_ratio = 10.0; //!< M_p in |p| <= M_p |g|
  std::size_t refresh_period = 15;
  std::size_t max_iterations = 70;
  double gradient_tolerance = 1e-10;
  std::size_t max_line_search_evaluations = 40;
  /// One secant refinement of an accepted step, kept only when it also
  /// satisfies both Wolfe conditions with a lower value.
  bool polish_step = true;

  void validate() const;
};

/// max{0, g^T (g - g_prev) / |g_prev|^2}. Throws ZeroPreviousGradient.
double beta_prp_plus(std::span<const double> g, std::span<const double> g_prev);

struct Direction
{
  Vector p;
  bool restarted = false;   //!< descent test failed (or no previous direction)
  bool safeguarded = false; //!< |p| > M_p |g|
};

/// Candidate -g + beta p_prev, replaced by -g when g^T p >= -eta |g|^2 or
/// |p| > M_p |g|. An empty p_prev yields -g.
Direction direction(std::span<const double> g,
                    std::span<const double> p_prev,
                    double beta,
                    const CgConfig& cfg);

/// phi(alpha) and phi'(alpha) along the search ray.
struct LinePoint
{
  double value;
  double slope;
};
using LineFunction = std::function<LinePoint(double)>;

struct LineSearchResult
{
  double step = 0.0;
  LinePoint point{};
  std::size_t evaluations = 0;
  bool converged = false; //!< strong Wolfe satisfied at `step`
};

/// Bracket-and-zoom strong Wolfe search with cubic interpolation. On
/// failure returns the best sufficient-decrease point seen (step 0 if none)
/// with converged = false.
LineSearchResult wolfe_line_search(const LineFunction& phi,
                                   LinePoint at_zero,
                                   double initial_step,
                                   const CgConfig& cfg);

struct IterationRecord
{
  std::size_t k = 0;
  std::size_t block = 0;
  double value = 0.0;        //!< J(w_k)
  double grad_norm = 0.0;    //!< |g_k|
  double slope = 0.0;        //!< g_k^T p_k
  double direction_norm = 0.0;
  double step = 0.0;         //!< alpha_k
  double beta = 0.0;         //!< beta used to form p_k (0 on restarts)
  double next_value = 0.0;   //!< J(w_k + alpha_k p_k)
  double next_slope = 0.0;   //!< grad J(w_k + alpha_k p_k)^T p_k
  std::size_t evaluations = 0;
  bool restarted = false;
  bool safeguarded = false;
  bool refreshed = false;
  bool line_search_failed = false;
  double zoutendijk = 0.0;   //!< (g_k^T p_k)^2 / |p_k|^2
};

enum class RunStatus
{
  iteration_limit,
  gradient_tolerance,
  line_search_stalled,
  objective_error
};

std::string to_string(RunStatus s);

struct RunResult
{
  Vector w;
  std::vector<IterationRecord> records;
  std::vector<std::size_t> refresh_iterations;
  RunStatus status = RunStatus::iteration_limit;
  std::string error;
};

/// Called after every accepted iteration with the record and w_{k+1}.
using IterationObserver =
  std::function<void(const IterationRecord&, std::span<const double> w_next)>;

/// Safeguarded PRP+ CG with periodic estimator refresh:
/// refresh at start, then whenever k > 0 and k mod R == 0, restarting the
/// block with p = -g. Objective exceptions end the run with
/// RunStatus::objective_error instead of propagating.
RunResult run_cg(DifferentiableObjective& objective,
                 Vector w0,
                 const CgConfig& cfg,
                 const IterationObserver& observer = {});

} // namespace cicg
