#include "itrpower/driver.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace itrpower::driver {

namespace {

void validate_config(const RunConfig& cfg) {
  if (cfg.rank < 1) throw InvalidParam("flexible_power: rank must be positive");
  if (!(cfg.t_min > 0.0) || !(cfg.t_init >= cfg.t_min))
    throw InvalidParam("flexible_power: need t_init >= t_min > 0");
  if (!(cfg.t_shrink > 1.0)) throw InvalidParam("flexible_power: t_shrink must exceed 1");
  if (cfg.max_iters < 1) throw InvalidParam("flexible_power: max_iters must be positive");
  if (cfg.stagnation_window < 2) throw InvalidParam("flexible_power: stagnation window >= 2");
  if (cfg.check_every < 0) throw InvalidParam("flexible_power: check_every must be >= 0");
}

long auto_check_every(double t) {
  double c = std::ceil(1.0 / t);
  if (c < 10.0) return 10;
  if (c > 100000.0) return 100000;
  return static_cast<long>(c);
}

// uniform [-1, 1] from the top 53 bits, identical across toolchains
double unit_double(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
}

Core random_core(std::mt19937_64& eng, int d, Eigen::Index r) {
  std::vector<Matrix> slices(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Matrix m(r, r);
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index row = 0; row < r; ++row) m(row, c) = unit_double(eng);
    slices[static_cast<size_t>(i)] = std::move(m);
  }
  return Core(std::move(slices));
}

template <typename F>
auto with_iteration_context(long iter, F&& f) -> decltype(f()) {
  auto tag = [iter](const char* what) {
    return "iteration " + std::to_string(iter) + ": " + what;
  };
  try {
    return f();
  } catch (const ConvergenceFailure& e) {
    throw ConvergenceFailure(tag(e.what()));
  } catch (const DegenerateDominance& e) {
    throw DegenerateDominance(tag(e.what()));
  } catch (const IllConditioned& e) {
    throw IllConditioned(tag(e.what()));
  }
}

}  // namespace

long leading_digits(double v) {
  if (v == 0.0 || !std::isfinite(v)) return 0;
  v = std::abs(v);
  int e = static_cast<int>(std::floor(std::log10(v)));
  double scaled = v / std::pow(10.0, e - 2);
  while (scaled >= 1000.0) scaled /= 10.0;
  while (scaled < 100.0) scaled *= 10.0;
  return static_cast<long>(std::floor(scaled));
}

bool detect_stagnation(const std::vector<double>& res_history, int window) {
  if (window < 2) throw InvalidParam("detect_stagnation: window must be >= 2");
  const size_t n = res_history.size();
  if (n >= 2 && res_history[n - 1] > res_history[n - 2]) return true;
  if (n < static_cast<size_t>(window)) return false;
  long key = leading_digits(res_history[n - static_cast<size_t>(window)]);
  for (size_t i = n - static_cast<size_t>(window) + 1; i < n; ++i)
    if (leading_digits(res_history[i]) != key) return false;
  return true;
}

RunResult flexible_power(const RunConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 eng(cfg.seed);
  const int d = models::phys_dim(cfg.model.kind);
  Core x = random_core(eng, d, cfg.rank);
  Core y = random_core(eng, d, cfg.rank);
  itr2::ITR2State init = itr2::canonicalize2(x, y, cfg.eig_tol);
  return flexible_power(cfg, init);
}

RunResult flexible_power(const RunConfig& cfg, const itr2::ITR2State& init) {
  validate_config(cfg);
  if (init.rank() != cfg.rank)
    throw InvalidParam("flexible_power: initial state rank differs from config");
  const Matrix gate = models::build_gate(cfg.model);
  const std::optional<double> reference = models::exact_eigenvalue(cfg.model);

  RunResult out;
  out.state = init;

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  double t = cfg.t_init;
  Matrix exp_mt = linalg::expm_neg_sym(gate, t);
  long check_every = cfg.check_every > 0 ? cfg.check_every : auto_check_every(t);
  long stage_iters = 0;
  double stage_start_s = 0.0;
  std::vector<double> window;  // res_norm checks at the current t

  long iter = 0;
  double T_total = 0.0;

  auto close_stage = [&]() {
    double now = elapsed();
    if (stage_iters > 0) out.schedule.push_back({t, stage_iters, now - stage_start_s});
    stage_start_s = now;
    stage_iters = 0;
  };

  auto run_check = [&]() -> IterationRecord {
    double theta = itr2::rayleigh_quotient(out.state, gate).theta;
    itr2::ResidualReport rep = itr2::residual(out.state, gate, theta, cfg.solve_tol);
    IterationRecord rec;
    rec.iter = iter;
    rec.t = t;
    rec.T_total = T_total;
    rec.theta = rep.theta;
    rec.theta1 = rep.theta1;
    rec.theta2 = rep.theta2;
    rec.res_norm = rep.res_norm;
    rec.sigma_min = rep.sigma_min;
    rec.omega_min = rep.omega_min;
    if (reference) rec.err = std::abs(rec.theta - *reference);
    if (cfg.theta_hat) {
      // best-effort refinement: the estimate needs dominant transfer eigenpairs,
      // which can stall when the spectrum is nearly degenerate; leave the field
      // unset rather than abort the run
      try {
        rec.theta_hat =
            itr2::projected_avg_eigenvalue(out.state, gate, rec.theta, cfg.eig_tol, cfg.solve_tol);
      } catch (const ConvergenceFailure&) {
      }
    }
    rec.wallclock_s = elapsed();
    return rec;
  };

  int low_sigma_checks = 0;
  while (true) {
    if (iter >= cfg.max_iters) {
      out.termination = "max_iters";
      break;
    }
    with_iteration_context(iter + 1, [&]() {
      out.state =
          evolve::trotter_half_step(out.state, exp_mt, evolve::Parity::odd, cfg.variant,
                                    cfg.rank, cfg.eig_tol)
              .state;
      out.state =
          evolve::trotter_half_step(out.state, exp_mt, evolve::Parity::even, cfg.variant,
                                    cfg.rank, cfg.eig_tol)
              .state;
    });
    ++iter;
    ++stage_iters;
    T_total += t;

    if (stage_iters % check_every != 0) continue;

    IterationRecord rec = with_iteration_context(iter, run_check);
    out.records.push_back(rec);

    if (rec.sigma_min < 1e-12) {
      if (++low_sigma_checks >= 2) {
        out.termination = "sigma_min";
        break;
      }
    } else {
      low_sigma_checks = 0;
    }

    if (!cfg.adaptive) continue;
    window.push_back(rec.res_norm);
    if (!detect_stagnation(window, cfg.stagnation_window)) continue;
    if (t <= cfg.t_min * (1.0 + 1e-9)) {
      out.termination = "t_min";
      break;
    }
    close_stage();
    t /= cfg.t_shrink;
    exp_mt = linalg::expm_neg_sym(gate, t);
    if (cfg.check_every == 0) check_every = auto_check_every(t);
    window.clear();
  }
  close_stage();

  if (out.records.empty() || out.records.back().iter != iter)
    out.records.push_back(with_iteration_context(iter, run_check));

  const IterationRecord& last = out.records.back();
  out.theta = last.theta;
  out.res_norm = last.res_norm;
  out.err = last.err;
  out.theta_hat = last.theta_hat;
  out.total_iters = iter;
  return out;
}

}  // namespace itrpower::driver
