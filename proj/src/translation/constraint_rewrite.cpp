#include "modx/translation/constraint_rewrite.h"

#include "modx/core/errors.h"
#include "modx/core/json_io.h"

namespace modx::translation {

using core::DocValue;
using core::Error;
using core::ErrorCode;

ConstraintRewriteTable ConstraintRewriteTable::from_doc(const DocValue& doc) {
  ConstraintRewriteTable table;
  const DocValue* rewrites = doc.find("rewrites");
  if (!rewrites || !rewrites->is_array()) return table;
  for (const DocValue& r : rewrites->as_array()) {
    ConstraintRewrite rw;
    rw.constraint = r.string_or("constraint", "");
    if (rw.constraint.empty()) {
      throw Error(ErrorCode::ParseError, "rewrite without constraint name");
    }
    if (const DocValue* inj = r.find("injection"); inj && inj->is_map()) {
      ConstraintRewrite::Injection injection;
      injection.path = parse_path(inj->string_or("path", ""));
      if (const DocValue* v = inj->find("value")) injection.value = *v;
      rw.injection = std::move(injection);
    }
    if (const DocValue* f = r.find("filter"); f && f->is_map()) {
      ConstraintRewrite::Filter filter;
      filter.field = parse_path(f->string_or("field", ""));
      if (const DocValue* v = f->find("equals")) filter.equals = *v;
      rw.filter = std::move(filter);
    }
    if (rw.injection.has_value() == rw.filter.has_value()) {
      throw Error(ErrorCode::ParseError,
                  "rewrite \"" + rw.constraint + "\" must set exactly one of injection/filter");
    }
    table.add(std::move(rw));
  }
  return table;
}

ConstraintRewriteTable ConstraintRewriteTable::load(const std::string& path) {
  return from_doc(core::load_doc(path));
}

void ConstraintRewriteTable::add(ConstraintRewrite rewrite) {
  if (rewrite.injection) {
    injections_[rewrite.constraint] = std::move(rewrite);
  } else if (rewrite.filter) {
    filters_[rewrite.constraint] = std::move(rewrite);
  }
}

const ConstraintRewrite* ConstraintRewriteTable::injection_for(
    const std::string& constraint) const {
  auto it = injections_.find(constraint);
  return it == injections_.end() ? nullptr : &it->second;
}

const ConstraintRewrite* ConstraintRewriteTable::filter_for(const std::string& constraint) const {
  auto it = filters_.find(constraint);
  return it == filters_.end() ? nullptr : &it->second;
}

DocValue rewrite_for_constraint(const DocValue& request, const ConstraintRewrite& rewrite) {
  if (!rewrite.injection) {
    throw Error(ErrorCode::ParseError,
                "rewrite \"" + rewrite.constraint + "\" has no injection form");
  }
  DocValue out = request;
  set_path(out, rewrite.injection->path, {}, rewrite.injection->value);
  return out;
}

core::DocArray filter_results(const core::DocArray& results, const ConstraintRewrite& rewrite) {
  if (!rewrite.filter) {
    throw Error(ErrorCode::ParseError,
                "rewrite \"" + rewrite.constraint + "\" has no filter form");
  }
  core::DocArray kept;
  for (const DocValue& item : results) {
    const DocValue* field = get_path(item, rewrite.filter->field);
    if (field && *field == rewrite.filter->equals) kept.push_back(item);
  }
  return kept;
}

}  // namespace modx::translation
