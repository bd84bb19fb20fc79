// Unit tests for the CSV log writer and the JSON summary.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "itrpower/driver.hpp"
#include "itrpower/io.hpp"

using namespace itrpower;

namespace {

driver::IterationRecord make_record(long iter, double theta, bool with_err) {
  driver::IterationRecord rec;
  rec.iter = iter;
  rec.t = 0.1;
  rec.T_total = 0.1 * static_cast<double>(iter);
  rec.theta = theta;
  rec.theta1 = theta + 1e-3;
  rec.theta2 = theta - 1e-3;
  rec.res_norm = 0.01 / static_cast<double>(iter);
  if (with_err) rec.err = 1.5e-7;
  rec.sigma_min = 0.25;
  rec.omega_min = 0.125;
  rec.wallclock_s = 1.25;
  return rec;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("emit_csv writes the exact header and one row per record") {
  std::ostringstream os;
  io::emit_csv({make_record(10, -2.1, true)}, os);
  std::istringstream is(os.str());
  std::string header, row, extra;
  REQUIRE(std::getline(is, header));
  REQUIRE(std::getline(is, row));
  CHECK_FALSE(std::getline(is, extra));
  CHECK(header ==
        "iter,t,T_total,theta,theta1,theta2,res_norm,err,sigma_min,omega_min,wallclock_s");
  const auto fields = split_fields(row);
  REQUIRE(fields.size() == 11);
  CHECK(fields[0] == "10");
  CHECK(fields[1] == "0.10000000000000001");  // 17 significant digits
  CHECK(fields[7] == "1.4999999999999999e-07");
}

TEST_CASE("a missing reference leaves the err field empty") {
  std::ostringstream os;
  io::emit_csv({make_record(5, -1.0, false)}, os);
  std::string row = os.str().substr(os.str().find('\n') + 1);
  const auto fields = split_fields(row.substr(0, row.find('\n')));
  REQUIRE(fields.size() == 11);
  CHECK(fields[7].empty());
}

TEST_CASE("emitted doubles round-trip exactly through strtod") {
  std::vector<driver::IterationRecord> history{make_record(1, -2.127088819946730, true),
                                               make_record(2, -0.443147180559945, false)};
  history[0].res_norm = 1.0 / 3.0;
  history[1].theta2 = -4.0 / M_PI;
  std::ostringstream os;
  io::emit_csv(history, os);

  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);  // header
  for (const auto& rec : history) {
    REQUIRE(std::getline(is, line));
    const auto f = split_fields(line);
    CHECK(std::strtod(f[3].c_str(), nullptr) == rec.theta);
    CHECK(std::strtod(f[5].c_str(), nullptr) == rec.theta2);
    CHECK(std::strtod(f[6].c_str(), nullptr) == rec.res_norm);
    CHECK(std::strtod(f[10].c_str(), nullptr) == rec.wallclock_s);
  }
}

TEST_CASE("file variant reports unwritable paths") {
  try {
    io::emit_csv({make_record(1, 0.0, false)}, "/nonexistent-dir/out.csv");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("summary JSON carries the documented keys") {
  driver::RunConfig cfg;
  cfg.model.kind = models::ModelKind::ising;
  cfg.model.g = 2.0;
  cfg.rank = 10;
  cfg.variant = evolve::Variant::fast;
  cfg.seed = 42;

  driver::RunResult result;
  result.schedule = {{0.1, 13, 0.5}, {0.01, 150, 4.0}};
  result.theta = -2.12708;
  result.res_norm = 3e-7;
  result.err = 8e-4;
  result.total_iters = 163;
  result.termination = "t_min";

  const auto j = nlohmann::json::parse(io::summary_json(cfg, result));
  CHECK(j.at("model") == "ising");
  CHECK(j.at("params").at("g") == 2.0);
  CHECK(j.at("rank") == 10);
  CHECK(j.at("variant") == "fast");
  REQUIRE(j.at("schedule").size() == 2);
  CHECK(j.at("schedule")[0].at("t") == 0.1);
  CHECK(j.at("schedule")[0].at("iters") == 13);
  CHECK(j.at("schedule")[1].at("seconds") == 4.0);
  CHECK(j.at("theta") == -2.12708);
  CHECK(j.at("res_norm") == 3e-7);
  CHECK(j.at("err") == 8e-4);
  CHECK(j.at("seed") == 42);
  CHECK_FALSE(j.contains("theta_hat"));

  result.theta_hat = -2.1271;
  const auto j2 = nlohmann::json::parse(io::summary_json(cfg, result));
  CHECK(j2.at("theta_hat") == -2.1271);

  cfg.model.kind = models::ModelKind::heisenberg_s1;
  cfg.model.delta = 1.0;
  cfg.variant = evolve::Variant::canonical;
  const auto j3 = nlohmann::json::parse(io::summary_json(cfg, result));
  CHECK(j3.at("model") == "heisenberg-s1");
  CHECK(j3.at("params").at("delta") == 1.0);
  CHECK(j3.at("variant") == "canonical");
}
