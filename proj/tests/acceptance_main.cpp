#include <iostream>

#include "moo/acceptance.hpp"

int main(int argc, char** argv) {
  moo::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) options.only.push_back(argv[i]);
  int failed = 0;
  moo::run_acceptance(options, [&](const moo::CriterionResult& r) {
    failed += !r.passed;
    std::cout << moo::format_result(r) << std::endl;
  });
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
