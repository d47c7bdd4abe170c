#include "modx/core/json_io.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "modx/core/errors.h"

namespace modx::core {

namespace {

DocValue from_json(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return DocValue(nullptr);
    case nlohmann::json::value_t::boolean: return DocValue(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return DocValue(static_cast<double>(j.get<std::int64_t>()));
    case nlohmann::json::value_t::number_unsigned:
      return DocValue(static_cast<double>(j.get<std::uint64_t>()));
    case nlohmann::json::value_t::number_float: return DocValue(j.get<double>());
    case nlohmann::json::value_t::string: return DocValue(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      DocArray arr;
      arr.reserve(j.size());
      for (const auto& item : j) arr.push_back(from_json(item));
      return DocValue(std::move(arr));
    }
    case nlohmann::json::value_t::object: {
      DocMap map;
      for (auto it = j.begin(); it != j.end(); ++it) map[it.key()] = from_json(it.value());
      return DocValue(std::move(map));
    }
    default:
      throw Error(ErrorCode::ParseError, "unsupported JSON value type");
  }
}

nlohmann::json to_json(const DocValue& doc) {
  if (doc.is_null()) return nullptr;
  if (doc.is_bool()) return doc.as_bool();
  if (doc.is_number()) {
    double d = doc.as_number();
    // Integral values render without a trailing ".0", matching canonical form.
    if (d == static_cast<double>(static_cast<std::int64_t>(d)) && std::abs(d) < 9.0e15) {
      return static_cast<std::int64_t>(d);
    }
    return d;
  }
  if (doc.is_string()) return doc.as_string();
  if (doc.is_array()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DocValue& item : doc.as_array()) arr.push_back(to_json(item));
    return arr;
  }
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [k, v] : doc.as_map()) obj[k] = to_json(v);
  return obj;
}

}  // namespace

DocValue parse_doc(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::ParseError, "invalid JSON");
  }
  return from_json(j);
}

DocValue load_doc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_doc(buf.str());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::string pretty_print(const DocValue& doc) { return to_json(doc).dump(2); }

void save_doc(const std::string& path, const DocValue& doc, bool pretty) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot write " + path);
  }
  out << (pretty ? pretty_print(doc) : to_json(doc).dump()) << "\n";
}

}  // namespace modx::core
