// Flexible power iteration: adaptive-timestep imaginary-time evolution with
// residual-stagnation detection.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itrpower/evolve.hpp"
#include "itrpower/itr2.hpp"
#include "itrpower/models.hpp"
#include "itrpower/types.hpp"

namespace itrpower::driver {

struct RunConfig {
  models::ModelSpec model;
  Eigen::Index rank = 10;
  double t_init = 1e-1;
  double t_min = 1e-5;
  double t_shrink = 10.0;
  evolve::Variant variant = evolve::Variant::fast;
  long check_every = 0;       // 0 = auto: ceil(1/t), clamped to [10, 100000]
  int stagnation_window = 3;  // consecutive checks with frozen leading digits
  long max_iters = 1000000;
  unsigned long long seed = 0;
  double eig_tol = 1e-12;
  double solve_tol = 1e-8;
  bool adaptive = true;     // false: keep t fixed (no stagnation shrinking)
  bool theta_hat = false;   // compute the projected averaged eigenvalue per check
};

struct IterationRecord {
  long iter = 0;       // total iterations completed at this check
  double t = 0;        // timestep in effect
  double T_total = 0;  // accumulated imaginary time
  double theta = 0;
  double theta1 = 0;
  double theta2 = 0;
  double res_norm = 0;
  std::optional<double> err;  // |theta - reference| when a reference exists
  double sigma_min = 0;
  double omega_min = 0;
  double wallclock_s = 0;  // seconds since the run started
  std::optional<double> theta_hat;
};

struct ScheduleStat {
  double t = 0;
  long iters = 0;
  double seconds = 0;
};

struct RunResult {
  std::vector<IterationRecord> records;  // one per check
  std::vector<ScheduleStat> schedule;    // per timestep value, in run order
  itr2::ITR2State state;
  double theta = 0;
  double res_norm = 0;
  std::optional<double> err;
  std::optional<double> theta_hat;
  long total_iters = 0;
  std::string termination;  // "t_min" | "sigma_min" | "max_iters"
};

// Runs the adaptive power iteration from a seeded random canonical state
// (or the provided initial state). Each iteration applies the odd and even
// half-steps of exp(-M t); every check_every iterations the Rayleigh
// quotient and residual are recorded; when the residual norm stagnates the
// timestep is divided by t_shrink until t_min is reached.
RunResult flexible_power(const RunConfig& cfg);
RunResult flexible_power(const RunConfig& cfg, const itr2::ITR2State& init);

// True iff the leading 3 significant decimal digits of the last `window`
// values coincide, or the last value exceeds its predecessor.
bool detect_stagnation(const std::vector<double>& res_history, int window);

// Leading 3 significant decimal digits of |v| as an integer in [100, 999]
// (0 for v = 0); the freeze comparison key used by detect_stagnation.
long leading_digits(double v);

}  // namespace itrpower::driver
