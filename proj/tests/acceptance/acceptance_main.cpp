#include <iostream>

#include "acceptance/suite.hpp"

int main() {
  int failed = 0;
  exptest::acceptance::run_all([&](const exptest::acceptance::CriterionResult& r) {
    std::cout << exptest::acceptance::format_result(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
