// CSV convergence logs and JSON run summaries.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "itrpower/driver.hpp"

namespace itrpower::io {

// Writes `iter,t,T_total,theta,theta1,theta2,res_norm,err,sigma_min,
// omega_min,wallclock_s` plus one row per record; floats carry 17
// significant digits; an absent err becomes an empty field.
void emit_csv(const std::vector<driver::IterationRecord>& history, std::ostream& os);

// Same, to a file; I/O failures are reported with the path.
void emit_csv(const std::vector<driver::IterationRecord>& history, const std::string& path);

// JSON object with keys model, params, rank, variant, schedule (array of
// {t, iters, seconds}), theta, theta_hat (optional), res_norm, err
// (optional), seed.
std::string summary_json(const driver::RunConfig& cfg, const driver::RunResult& result);

}  // namespace itrpower::io
