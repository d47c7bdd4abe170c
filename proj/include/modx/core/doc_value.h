#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace modx::core {

class DocValue;
using DocArray = std::vector<DocValue>;
using DocMap = std::map<std::string, DocValue>;

/// JSON-shaped document tree shared by every module: payloads, capability
/// records, ledger bodies and translation inputs all live in this type.
/// Numbers are finite doubles; map keys are unique and held in code-point
/// order, which is also the canonical serialization order.
class DocValue {
 public:
  DocValue() : v_(nullptr) {}
  DocValue(std::nullptr_t) : v_(nullptr) {}
  DocValue(bool b) : v_(b) {}
  DocValue(double d) : v_(d) {}
  DocValue(int i) : v_(static_cast<double>(i)) {}
  DocValue(std::int64_t i) : v_(static_cast<double>(i)) {}
  DocValue(std::uint64_t i) : v_(static_cast<double>(i)) {}
  DocValue(const char* s) : v_(std::string(s)) {}
  DocValue(std::string s) : v_(std::move(s)) {}
  DocValue(DocArray a) : v_(std::move(a)) {}
  DocValue(DocMap m) : v_(std::move(m)) {}

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<DocArray>(v_); }
  bool is_map() const { return std::holds_alternative<DocMap>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  double as_number() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const DocArray& as_array() const { return std::get<DocArray>(v_); }
  const DocMap& as_map() const { return std::get<DocMap>(v_); }
  DocArray& as_array() { return std::get<DocArray>(v_); }
  DocMap& as_map() { return std::get<DocMap>(v_); }

  /// Map lookup; nullptr when this is not a map or the key is absent.
  const DocValue* find(const std::string& key) const {
    if (!is_map()) return nullptr;
    auto it = as_map().find(key);
    return it == as_map().end() ? nullptr : &it->second;
  }

  /// Convenience accessors with defaults, for loosely validated inputs.
  std::string string_or(const std::string& key, const std::string& dflt) const {
    const DocValue* v = find(key);
    return v && v->is_string() ? v->as_string() : dflt;
  }
  double number_or(const std::string& key, double dflt) const {
    const DocValue* v = find(key);
    return v && v->is_number() ? v->as_number() : dflt;
  }
  bool bool_or(const std::string& key, bool dflt) const {
    const DocValue* v = find(key);
    return v && v->is_bool() ? v->as_bool() : dflt;
  }

  friend bool operator==(const DocValue& a, const DocValue& b) { return a.v_ == b.v_; }
  friend bool operator!=(const DocValue& a, const DocValue& b) { return !(a == b); }

 private:
  std::variant<std::nullptr_t, bool, double, std::string, DocArray, DocMap> v_;
};

}  // namespace modx::core
