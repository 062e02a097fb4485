#pragma once

#include <functional>
#include <string>
#include <vector>

namespace exptest::acceptance {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  double seconds;
  double time_limit;  // 0 when the criterion sets no limit
  std::string detail;
};

/// One line: PASS/FAIL, id, name, runtime and the measured quantities.
std::string format_result(const CriterionResult& result);

/// Runs every criterion in order, reporting each as soon as it finishes.
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

CriterionResult example_one_reproduction();
CriterionResult null_menu_threshold();
CriterionResult screening_pipeline();
CriterionResult envelope_oracle_agreement();
CriterionResult kink_avoidance();
CriterionResult generalized_contracts();
CriterionResult xi_screening();
CriterionResult maximin_closed_form();
CriterionResult figure_ordering();

}  // namespace exptest::acceptance
