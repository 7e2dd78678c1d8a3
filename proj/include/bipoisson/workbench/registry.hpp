#pragma once

#include <string>
#include <vector>

namespace bipoisson::workbench {

enum class Comparison { at_most, above };  // pass iff value <= tol, or value > tol
enum class CheckKind { positive, negative_control };

struct CheckInfo {
  std::string name;
  std::string stage;
  std::string anchor;  // the mathematical claim being certified
  double tolerance;
  Comparison comparison;
  CheckKind kind;
};

/// Every check in report order.
const std::vector<CheckInfo>& check_registry();
/// nullptr for unknown names.
const CheckInfo* find_check(const std::string& name);

std::string to_string(Comparison c);
Comparison comparison_from_string(const std::string& s);

}  // namespace bipoisson::workbench
