// Acceptance criteria AC1-AC10. One PASS/FAIL line per criterion; exit 0 iff
// every selected criterion passed.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrac_app/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"MRAC acceptance criteria"};
  std::vector<std::string> only;
  int seeds = 20;
  bool verbose = false;
  app.add_option("--only", only, "criterion ids to run (default: all)");
  app.add_option("--seeds", seeds, "instances per relative degree for AC9")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "per-run progress on stderr");
  CLI11_PARSE(app, argc, argv);

  mrac::app::SuiteOptions opts;
  opts.seeds = seeds;
  opts.progress = verbose ? &std::cerr : nullptr;
  mrac::app::SuiteContext ctx(opts);

  const std::vector<std::string> ids = only.empty() ? mrac::app::suite_members("all") : only;
  std::vector<mrac::app::CriterionResult> results;
  for (const std::string& id : ids) {
    auto r = mrac::app::run_criterion(id, ctx);
    if (!r) {
      std::cerr << "unknown criterion '" << id << "'\n";
      return 1;
    }
    std::cout << mrac::app::format_result(*r) << std::endl;
    results.push_back(std::move(*r));
  }
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  return all ? 0 : 1;
}
