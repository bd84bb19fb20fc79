// itrpower command-line tool: run the flexible power iteration on a chosen
// model (run), print closed-form reference energies (exact), or exercise the
// oracle self-checks (verify).
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "itrpower/driver.hpp"
#include "itrpower/evolve.hpp"
#include "itrpower/io.hpp"
#include "itrpower/itr.hpp"
#include "itrpower/itr2.hpp"
#include "itrpower/linalg.hpp"
#include "itrpower/models.hpp"
#include "itrpower/oracle.hpp"
#include "itrpower/types.hpp"

namespace {

using namespace itrpower;

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

Core random_core(Eigen::Index r, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Matrix> slices(d);
  for (auto& m : slices) {
    m.resize(r, r);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = dist(rng);
  }
  return Core(std::move(slices));
}

struct CheckRunner {
  bool all_ok = true;

  void run(const char* name, const std::function<void()>& body) {
    try {
      body();
      std::printf("PASS %s\n", name);
    } catch (const std::exception& e) {
      std::printf("FAIL %s: %s\n", name, e.what());
      all_ok = false;
    }
  }
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

// Oracle self-check suite: cheap cross-validations of the numerical kernels
// against dense references and closed forms.
int cmd_verify() {
  CheckRunner c;
  std::mt19937_64 rng(20260814ull);

  c.run("transfer-dense-agreement", [&] {
    const Core x = random_core(3, 2, rng);
    const itr::TransferOp op(x, itr::TransferFlavor::plain);
    const Matrix dense = oracle::dense_transfer(x, itr::TransferFlavor::plain);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      Vector v(dense.cols());
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
      const double dr = (transfer_apply(op, v, linalg::Side::right) - dense * v).norm();
      const double dl =
          (transfer_apply(op, v, linalg::Side::left) - dense.transpose() * v).norm();
      require(dr < 1e-12 && dl < 1e-12, "matrix-free transfer deviates from dense");
    }
  });

  c.run("single-core-canonical-form", [&] {
    const Core x = random_core(4, 2, rng);
    const itr::CanonicalITR can = itr::canonicalize(x);
    const Eigen::Index r = can.q.r_left();
    Matrix gl = Matrix::Zero(r, r), gr = Matrix::Zero(r, r);
    for (const auto& qi : can.q.slices) {
      const Matrix lw = can.sigma.diag() * qi;
      const Matrix rw = qi * can.sigma.diag();
      gl += lw.transpose() * lw;
      gr += rw * rw.transpose();
    }
    const Matrix id = Matrix::Identity(r, r);
    require((gl - id).norm() < 1e-10 && (gr - id).norm() < 1e-10,
            "canonical Gram sums deviate from identity");
    require(std::abs(can.sigma.norm() - 1.0) < 1e-12, "weights not normalized");
  });

  c.run("two-core-canonical-form", [&] {
    const Core x = random_core(4, 2, rng);
    const Core y = random_core(4, 2, rng);
    const itr2::ITR2State s = itr2::canonicalize2(x, y);
    require(itr2::orthogonality_residuals(s).max() < 1e-8,
            "two-core orthogonality residual too large");
  });

  c.run("ising-quadrature-closed-form", [&] {
    models::ModelSpec spec;
    spec.g = 1.0;
    const double at_one = *models::exact_eigenvalue(spec);
    require(std::abs(at_one - (-4.0 / M_PI)) < 1e-13, "lambda0(1) != -4/pi");
    spec.g = 0.0;
    require(std::abs(*models::exact_eigenvalue(spec) + 1.0) < 1e-13, "lambda0(0) != -1");
  });

  c.run("finite-chain-ground", [&] {
    models::ModelSpec spec;
    spec.g = 0.0;
    const Matrix m = models::build_gate(spec);
    const auto ground = oracle::finite_chain_ground(m, 2, true);
    require(std::abs(ground.e0 + 2.0) < 1e-12, "L=2 classical ring energy != -2");
  });

  c.run("trotter-commuting-limit", [&] {
    models::ModelSpec spec;
    spec.g = 0.0;
    const Matrix m = models::build_gate(spec);
    const int L = 4;
    const double t = 0.01;
    const Matrix h = oracle::finite_chain_hamiltonian(m, L, true);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector x(h.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    const Vector exact = linalg::expm_neg_sym(h, t) * x;
    const Vector split = oracle::dense_trotter_ring(m, L, t, x);
    require((exact - split).norm() < 1e-12, "commuting-gate split not exact");
  });

  c.run("product-eigenstate-residual", [&] {
    models::ModelSpec spec;
    spec.g = 0.0;
    const Matrix m = models::build_gate(spec);
    Core up(std::vector<Matrix>{Matrix::Ones(1, 1), Matrix::Zero(1, 1)});
    itr2::ITR2State s;
    s.q = up;
    s.u = up;
    s.sigma = BondWeights(Vector::Ones(1));
    s.omega = BondWeights(Vector::Ones(1));
    s.canonical = true;
    const auto rq = itr2::rayleigh_quotient(s, m);
    require(std::abs(rq.theta + 1.0) < 1e-13, "product-state quotient != -1");
    const auto rep = itr2::residual(s, m, rq.theta);
    require(rep.res_norm < 1e-12, "exact eigenstate residual not ~0");
  });

  c.run("rayleigh-quotient-consistency", [&] {
    const Core x = random_core(3, 2, rng);
    const Core y = random_core(3, 2, rng);
    const itr2::ITR2State s = itr2::canonicalize2(x, y);
    models::ModelSpec spec;
    spec.g = 1.5;
    const Matrix m = models::build_gate(spec);
    const auto fast = itr2::rayleigh_quotient(s, m);
    // the general form sees the alternating chain of weighted cores
    std::vector<Matrix> xs, ys;
    for (const auto& mm : s.q.slices) xs.push_back(mm * s.sigma.diag());
    for (const auto& mm : s.u.slices) ys.push_back(mm * s.omega.diag());
    const auto general =
        itr2::rayleigh_quotient_general(Core(std::move(xs)), Core(std::move(ys)), m);
    require(std::abs(fast.theta - general.theta) < 1e-10,
            "canonical and general quotients disagree");
  });

  return c.all_ok ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 1;
  if (const char* env = std::getenv("ITRPOWER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096)
      threads = static_cast<int>(v);
    else
      std::fprintf(stderr, "warning: ignoring invalid ITRPOWER_THREADS=%s\n", env);
  }
  Eigen::setNbThreads(threads);

  CLI::App app{"smallest eigenvalue per site of infinite nearest-neighbor chains"};
  app.require_subcommand(1);

  std::string model = "ising";
  double g = 1.0;
  double delta = 1.0;

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--model", model, "ising | heisenberg-s1 | heisenberg-half")
        ->check(CLI::IsMember({"ising", "heisenberg-s1", "heisenberg-half"}));
    sub->add_option("--g", g, "transverse field (ising)");
    sub->add_option("--delta", delta, "anisotropy (heisenberg)");
  };

  auto* run_cmd = app.add_subcommand("run", "run the adaptive power iteration");
  long rank = 10;
  double t_init = 1e-1, t_min = 1e-5, t_shrink = 10.0;
  std::string variant = "fast";
  std::string check_every = "auto";
  long max_iters = 1000000;
  unsigned long long seed = 0;
  bool theta_hat = false;
  bool fixed_t = false;
  std::string out_path, summary_path;
  add_model_flags(run_cmd);
  run_cmd->add_option("--rank", rank, "bond dimension r")->check(CLI::PositiveNumber);
  run_cmd->add_option("--t-init", t_init, "initial timestep");
  run_cmd->add_option("--t-min", t_min, "final timestep");
  run_cmd->add_option("--t-shrink", t_shrink, "timestep division factor");
  run_cmd->add_option("--variant", variant, "canonical | fast")
      ->check(CLI::IsMember({"canonical", "fast"}));
  run_cmd->add_option("--check-every", check_every,
                      "iterations between checks, or 'auto' (ceil(1/t))");
  run_cmd->add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "RNG seed for the initial state");
  run_cmd->add_flag("--theta-hat", theta_hat,
                    "also compute the projected averaged eigenvalue at each check");
  run_cmd->add_flag("--fixed-t", fixed_t, "disable the adaptive shrinking schedule");
  run_cmd->add_option("--out", out_path, "CSV convergence log path");
  run_cmd->add_option("--summary", summary_path, "JSON summary path (default: stdout)");

  auto* exact_cmd = app.add_subcommand("exact", "print the reference energy per site");
  add_model_flags(exact_cmd);

  app.add_subcommand("verify", "run the oracle self-check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    models::ModelSpec spec;
    spec.kind = models::parse_model(model);
    spec.g = g;
    spec.delta = delta;

    if (app.got_subcommand("exact")) {
      const auto value = models::exact_eigenvalue(spec);
      if (!value) {
        std::fprintf(stderr, "no closed-form reference for %s with these parameters\n",
                     models::model_name(spec.kind).c_str());
        return kExitSolver;
      }
      std::printf("%.15f\n", *value);
      return 0;
    }

    if (app.got_subcommand("verify")) return cmd_verify();

    driver::RunConfig cfg;
    cfg.model = spec;
    cfg.rank = rank;
    cfg.t_init = t_init;
    cfg.t_min = t_min;
    cfg.t_shrink = t_shrink;
    cfg.variant =
        variant == "canonical" ? evolve::Variant::canonical : evolve::Variant::fast;
    if (check_every == "auto") {
      cfg.check_every = 0;
    } else {
      char* end = nullptr;
      const long v = std::strtol(check_every.c_str(), &end, 10);
      if (end == check_every.c_str() || *end != '\0' || v < 1) {
        std::fprintf(stderr, "usage error: --check-every expects 'auto' or a positive integer\n");
        return kExitUsage;
      }
      cfg.check_every = v;
    }
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.adaptive = !fixed_t;
    cfg.theta_hat = theta_hat;

    const driver::RunResult result = driver::flexible_power(cfg);

    if (!out_path.empty()) io::emit_csv(result.records, out_path);
    const std::string summary = io::summary_json(cfg, result);
    if (summary_path.empty()) {
      std::printf("%s\n", summary.c_str());
    } else {
      std::ofstream os(summary_path);
      if (!os) throw std::runtime_error("cannot open for writing: " + summary_path);
      os << summary << '\n';
    }
    return 0;
  } catch (const InvalidParam& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}
