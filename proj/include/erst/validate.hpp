#pragma once

#include <string>
#include <vector>

#include "erst/model.hpp"

namespace erst {

enum class Severity { Error, Warning };

struct Violation {
  std::string code;      // stable kebab-case rule code
  Severity severity = Severity::Error;
  std::vector<NodeId> nodes;  // offending node/edge ids, sorted
  std::string message;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

struct ValidationPolicy {
  /// Constraint on secondary edges requiring at least one supporting signal.
  /// Downgrade to Warning for partially annotated corpora.
  Severity secedge_signal = Severity::Error;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const {
    for (const auto& v : violations)
      if (v.severity == Severity::Error) return false;
    return true;
  }
  std::vector<std::string> error_codes() const {
    std::vector<std::string> out;
    for (const auto& v : violations)
      if (v.severity == Severity::Error) out.push_back(v.code);
    return out;
  }
  bool has_code(const std::string& code) const {
    for (const auto& v : violations)
      if (v.code == code) return true;
    return false;
  }
};

/// Checks every structural constraint of the formalism and returns the
/// complete, order-normalized list of violations. Unresolvable references
/// are reported as violations, never thrown.
///
/// Rule codes:
///   token-index-mismatch, empty-token-form, duplicate-node-id,
///   edu-span-invalid, token-coverage-gap, token-coverage-overlap,
///   unresolved-reference, multiple-parents, no-root, multiple-roots,
///   primary-cycle, disconnected-node, non-projective, edu-with-children,
///   no-empty-hierarchy, satellite-tie, missing-nucleus, multiple-nuclei,
///   role-parent-mismatch, relation-kind-mismatch, unknown-relation-label,
///   secondary-self-loop, duplicate-secondary-path,
///   secondary-dangling-endpoint, unsignaled-secondary-edge,
///   dangling-signal-edge, signal-token-out-of-range, unknown-signal-type
ValidationReport validate(const DocumentGraph& graph, const ValidationPolicy& policy = {});

class InvalidGraphError : public Error {
 public:
  InvalidGraphError(const std::string& message, ValidationReport report)
      : Error(message + ": " + summarize(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string summarize(const ValidationReport& report);
  ValidationReport report_;
};

/// Convenience used by operations with a validity precondition.
void require_valid(const DocumentGraph& graph, const std::string& context,
                   const ValidationPolicy& policy = {});

}  // namespace erst
