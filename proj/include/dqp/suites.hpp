#pragma once
// Named verification suites: each one measures a security or correctness
// claim end to end and folds the result into a SecurityReport. The same
// suites back the acceptance test binary and the command-line `check` /
// `verify-all` commands, so a claim is always checked by exactly one piece
// of code.
//
// Every suite is deterministic given (trials, tol, seed): reruns reproduce
// all classical report fields bit-exactly. `epsilon` is the worst measured
// gap (for equality-style claims) or the worst bound violation clamped at
// zero (for inequality-style claims); `pass` compares the unclamped worst
// value against `tol`.

#include <cstdint>
#include <string>
#include <vector>

#include "dqp/harness.hpp"

namespace dqp {

struct SuiteSpec {
  std::string name;
  int default_trials = 1;
  double default_tol = 1e-9;
  std::string citation;
};

// All suites in the fixed order `verify-all` runs them.
const std::vector<SuiteSpec>& suite_specs();

bool is_suite(const std::string& name);

struct SuiteOptions {
  int trials = 0;          // <= 0: suite default
  double tol = 0.0;        // <= 0: suite default
  std::uint64_t seed = 0;  // always explicit in the report
  // Protocol size for the size-parameterized suites (correctness,
  // chain-equality, blindness); <= 0 keeps each suite's default grid.
  int n = 0;
  int m = 0;
};

SecurityReport run_suite(const std::string& name, const SuiteOptions& opt);

// Runs one suite. trials <= 0 or tol <= 0 select the suite's defaults.
SecurityReport run_suite(const std::string& name, int trials, double tol,
                         std::uint64_t seed);

// Every suite at default size, in suite_specs() order, all fed `seed`.
std::vector<SecurityReport> run_all(std::uint64_t seed);

}  // namespace dqp
