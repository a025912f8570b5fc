// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 on any FAIL.
#include <cstdio>
#include <exception>

#include "fracflow/config.hpp"
#include "fracflow/verify.hpp"

int main(int argc, char** argv) {
  using namespace fracflow;
  try {
    ExperimentConfig cfg = argc > 1 ? load_config(argv[1]) : ExperimentConfig{};
    const auto outcomes = run_verify(cfg, [](const CheckOutcome& o) {
      std::printf("%s criterion %2d %-28s %7.1fs%s\n", o.passed ? "PASS" : "FAIL", o.info.criterion,
                  o.info.name.c_str(), o.seconds, o.rerun ? " (rerun at 4x N)" : "");
      for (const auto& r : o.reports) {
        if (r.verdict == Verdict::Pass) continue;
        std::printf("    %-11s %s: estimate %.6g target %.6g", to_string(r.verdict).c_str(),
                    r.name.c_str(), r.estimate, r.target);
        if (r.standard_error) std::printf(" se %.3g", *r.standard_error);
        std::printf("\n");
      }
      if (!o.error.empty()) std::printf("    error: %s\n", o.error.c_str());
      if (o.info.time_limit > 0 && o.seconds > o.info.time_limit) {
        std::printf("    over the %.0fs budget\n", o.info.time_limit);
      }
      std::fflush(stdout);
    });
    return suite_passed(outcomes) ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
}
