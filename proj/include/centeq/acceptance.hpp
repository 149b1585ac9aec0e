#ifndef CENTEQ_ACCEPTANCE_HPP
#define CENTEQ_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace centeq::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// runs the full acceptance battery, printing one pass/fail line per
// criterion to `log`; tolerances are pinned inside
std::vector<CriterionResult> run_all(std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace centeq::acceptance

#endif
