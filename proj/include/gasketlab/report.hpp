#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gasketlab {

/// One violated rule together with the witness that exhibits it.
struct Finding {
  std::string rule;
  std::string detail;
};

/// Result of a validation pass or an exhaustive audit.
///
/// Violations are counted exactly; only the first kMaxFindings witnesses are
/// kept. Merging reports in a fixed order gives the same stored witnesses
/// regardless of how the work was partitioned.
struct Report {
  static constexpr std::size_t kMaxFindings = 16;

  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::vector<Finding> findings;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> notes;

  Report() = default;
  explicit Report(std::string report_name) : name(std::move(report_name)) {}

  bool ok() const { return violations == 0; }

  void fail(std::string rule, std::string detail) {
    ++violations;
    if (findings.size() < kMaxFindings) {
      findings.push_back({std::move(rule), std::move(detail)});
    }
  }

  /// Appends `other` after this report's findings; metrics are left to the caller.
  void absorb(const Report& other) {
    checked += other.checked;
    violations += other.violations;
    for (const auto& f : other.findings) {
      if (findings.size() >= kMaxFindings) break;
      findings.push_back(f);
    }
  }

  bool has_rule(const std::string& rule) const {
    for (const auto& f : findings) {
      if (f.rule == rule) return true;
    }
    return false;
  }
};

/// Raised when an input lies outside the class of gaskets the theory covers
/// (for instance a gasket that is not in the top-isolated αβ family).
class OutOfScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for unreadable or malformed input documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gasketlab
