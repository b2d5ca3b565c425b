#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrac/harness.hpp"
#include "mrac/matching.hpp"

namespace mrac::app {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  int seeds = 20;
  std::ostream* progress = nullptr;  // per-run notes, optional
};

/// Shares the expensive Boeing runs between criteria.
class SuiteContext {
 public:
  explicit SuiteContext(SuiteOptions opts = {}) : opts_(opts) {}

  const RunRecord& case_i();
  const RunRecord& case_ii();
  double case_i_seconds() const { return case_i_seconds_; }
  double case_ii_seconds() const { return case_ii_seconds_; }
  const SuiteOptions& options() const { return opts_; }
  void note(const std::string& line) const;

 private:
  SuiteOptions opts_;
  std::optional<RunRecord> case_i_, case_ii_;
  double case_i_seconds_ = 0.0, case_ii_seconds_ = 0.0;
};

CriterionResult check_ac1(SuiteContext& ctx);
CriterionResult check_ac2(SuiteContext& ctx);
CriterionResult check_ac3(SuiteContext& ctx);
CriterionResult check_ac4(SuiteContext& ctx);
CriterionResult check_ac5(SuiteContext& ctx);
CriterionResult check_ac6(SuiteContext& ctx);
CriterionResult check_ac7(SuiteContext& ctx);
CriterionResult check_ac8(SuiteContext& ctx);
CriterionResult check_ac9(SuiteContext& ctx);
CriterionResult check_ac10(SuiteContext& ctx);

/// "AC1" .. "AC10"; nullopt for unknown ids.
std::optional<CriterionResult> run_criterion(std::string_view id, SuiteContext& ctx);

/// paper-repro (AC1-AC6), properties (AC7, AC8, AC10),
/// relative-degree-sweep (AC9), all (AC1-AC10). Throws on unknown names.
std::vector<std::string> suite_members(std::string_view suite);
std::vector<CriterionResult> run_suite(std::string_view suite, const SuiteOptions& opts);

/// One fixed-width line per criterion; returns true iff all passed.
bool print_results(std::ostream& os, const std::vector<CriterionResult>& results);
std::string format_result(const CriterionResult& r);

// Oracles used by the criteria and by unit tests.

/// Published Boeing gain table, laid out like MatchedGains::theta_star_full.
VectorXd published_boeing_gains();

/// Random coprime plant with n in {2..5}: real roots of P in [-3, 1],
/// Hurwitz Z with roots in [-3, -0.3] kept at least 0.1 away from those of P,
/// |kp| in [0.1, 5], Omega = (s+1)^{n-1}, Rm = (s+2)^{n*}.
MatchingProblem random_matching_problem(std::uint64_t seed);

/// 1e-8 times the largest coefficient magnitude among P, Z, kp, Omega, Rm.
double matching_tolerance(const MatchingProblem& mp);

/// sup_t of the swapping-identity residual for a random proper stable
/// G(s) = c (sI-A)^{-1} b + d and sinusoidal vector signals w(t), xi(t).
double swapping_residual(std::uint64_t seed, double dt, double t_final);

/// Ratio of max trajectory errors at steps dt and dt/2 for a forced damped
/// oscillator over [0, 5], both measured against a dt = 1e-5 reference.
/// Fourth order gives about 16.
double rk4_convergence_factor(double dt);

}  // namespace mrac::app
