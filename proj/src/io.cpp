// CSV convergence logs and JSON run summaries.
#include "itrpower/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "itrpower/types.hpp"

namespace itrpower::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void emit_csv(const std::vector<driver::IterationRecord>& history, std::ostream& os) {
  os << "iter,t,T_total,theta,theta1,theta2,res_norm,err,sigma_min,omega_min,wallclock_s\n";
  for (const auto& rec : history) {
    os << rec.iter << ',' << fmt(rec.t) << ',' << fmt(rec.T_total) << ','
       << fmt(rec.theta) << ',' << fmt(rec.theta1) << ',' << fmt(rec.theta2) << ','
       << fmt(rec.res_norm) << ',' << (rec.err ? fmt(*rec.err) : std::string())
       << ',' << fmt(rec.sigma_min) << ',' << fmt(rec.omega_min) << ','
       << fmt(rec.wallclock_s) << '\n';
  }
}

void emit_csv(const std::vector<driver::IterationRecord>& history, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(history, os);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string summary_json(const driver::RunConfig& cfg, const driver::RunResult& result) {
  nlohmann::json params = nlohmann::json::object();
  switch (cfg.model.kind) {
    case models::ModelKind::ising:
      params["g"] = cfg.model.g;
      break;
    case models::ModelKind::heisenberg_s1:
    case models::ModelKind::heisenberg_half:
      params["delta"] = cfg.model.delta;
      break;
  }

  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& stat : result.schedule)
    schedule.push_back({{"t", stat.t}, {"iters", stat.iters}, {"seconds", stat.seconds}});

  nlohmann::json j{
      {"model", models::model_name(cfg.model.kind)},
      {"params", params},
      {"rank", cfg.rank},
      {"variant", cfg.variant == evolve::Variant::canonical ? "canonical" : "fast"},
      {"schedule", schedule},
      {"theta", result.theta},
      {"res_norm", result.res_norm},
      {"seed", cfg.seed},
  };
  if (result.theta_hat) j["theta_hat"] = *result.theta_hat;
  if (result.err) j["err"] = *result.err;
  return j.dump(2);
}

}  // namespace itrpower::io
