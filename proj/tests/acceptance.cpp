// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <cstdio>
#include <string>

#include "cli.hpp"
#include "qprop/validation.hpp"

using namespace qprop;

namespace {

void print_line(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("criterion %2d %s  %-40s %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string summary(const validation::CriterionResult& c) {
  const validation::Check* worst = nullptr;
  double worst_ratio = -1.0;
  std::string failed;
  for (const auto& k : c.checks) {
    const double ratio = k.threshold > 0 ? k.measured / k.threshold : (k.measured > 0 ? 1e300 : 0.0);
    if (ratio > worst_ratio) worst_ratio = ratio, worst = &k;
    if (!k.pass) failed += (failed.empty() ? "" : "; ") + k.label + " = " + cli::fmt(k.measured);
  }
  if (!worst) return "no checks ran";
  char buf[200];
  std::snprintf(buf, sizeof buf, "worst %s: %.3e (limit %.3e)", worst->label.c_str(), worst->measured, worst->threshold);
  return failed.empty() ? buf : std::string(buf) + " | failing: " + failed;
}

}  // namespace

int main() {
  validation::Options opt;
  bool all = true;
  const auto first = validation::run_suite(opt, [&](const validation::CriterionResult& c) {
    print_line(c.id, c.pass, c.title, summary(c));
    all = all && c.pass;
  });
  const std::string a = cli::report_to_json(first).dump(2);
  const std::string b = cli::report_to_json(validation::run_suite(opt)).dump(2);
  const bool same = a == b;
  print_line(12, same, validation::criterion_titles()[12],
             same ? "two runs, seed " + std::to_string(opt.seed) + ": " + std::to_string(a.size()) + " identical bytes"
                  : "report JSON differs between runs");
  all = all && same;
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
