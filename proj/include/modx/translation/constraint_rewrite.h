#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modx/core/doc_value.h"
#include "modx/translation/doc_path.h"

namespace modx::translation {

/// Concrete realization of an abstract constraint against an agent
/// interface: either inject a parameter into the request ("directFlights"
/// -> "maxConnections": 0) or filter returned results on a field. Exactly
/// one of the two is set per rewrite.
struct ConstraintRewrite {
  std::string constraint;
  struct Injection {
    DocPath path;
    core::DocValue value;
  };
  struct Filter {
    DocPath field;
    core::DocValue equals;
  };
  std::optional<Injection> injection;
  std::optional<Filter> filter;
};

/// Per-constraint rewrite forms; a constraint may declare one injection form
/// and one filter form.
class ConstraintRewriteTable {
 public:
  static ConstraintRewriteTable from_doc(const core::DocValue& doc);
  static ConstraintRewriteTable load(const std::string& path);

  void add(ConstraintRewrite rewrite);
  const ConstraintRewrite* injection_for(const std::string& constraint) const;
  const ConstraintRewrite* filter_for(const std::string& constraint) const;

 private:
  std::map<std::string, ConstraintRewrite> injections_;
  std::map<std::string, ConstraintRewrite> filters_;
};

/// Injection mode: returns the request with the parameter added. Throws
/// PathConflict when the target already holds a different value.
core::DocValue rewrite_for_constraint(const core::DocValue& request,
                                      const ConstraintRewrite& rewrite);

/// Filter mode: keeps the results whose filter field equals the expected
/// value (missing fields drop the element).
core::DocArray filter_results(const core::DocArray& results, const ConstraintRewrite& rewrite);

}  // namespace modx::translation
