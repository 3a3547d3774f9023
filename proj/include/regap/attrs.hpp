#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

namespace regap {

using json = nlohmann::json;

// Raised when an input file is structurally broken (bad JSON shape, unknown
// enum value, dangling edge endpoint, ...).  Callers map this to exit 65.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Attribute values are scalars only.  The variant order is load-bearing for
// nothing; kind checks go through the helpers below.
using AttrValue = std::variant<bool, std::int64_t, double, std::string>;
using AttrMap = std::map<std::string, AttrValue>;

inline bool is_bool(const AttrValue& v) { return std::holds_alternative<bool>(v); }
inline bool is_string(const AttrValue& v) { return std::holds_alternative<std::string>(v); }
inline bool is_number(const AttrValue& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

inline AttrValue attr_from_json(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return static_cast<std::int64_t>(j.get<std::int64_t>());
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError("attribute value must be a bool, number, or string, got: " + j.dump());
}

inline json attr_to_json(const AttrValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

inline AttrMap attrs_from_json(const json& j) {
  AttrMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ParseError("\"attrs\" must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) out.emplace(it.key(), attr_from_json(it.value()));
  return out;
}

inline json attrs_to_json(const AttrMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = attr_to_json(v);
  return j;
}

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// Total comparison semantics:
//   numbers compare numerically (int and float mix freely),
//   strings compare lexicographically,
//   bools support only Eq/Ne,
//   anything cross-kind evaluates to false, every operator.
inline bool compare_values(CmpOp op, const AttrValue& a, const AttrValue& b) {
  auto decide = [op](int cmp) {
    switch (op) {
      case CmpOp::Eq: return cmp == 0;
      case CmpOp::Ne: return cmp != 0;
      case CmpOp::Lt: return cmp < 0;
      case CmpOp::Le: return cmp <= 0;
      case CmpOp::Gt: return cmp > 0;
      case CmpOp::Ge: return cmp >= 0;
    }
    return false;
  };
  if (is_bool(a) && is_bool(b)) {
    if (op != CmpOp::Eq && op != CmpOp::Ne) return false;
    return decide(std::get<bool>(a) == std::get<bool>(b) ? 0 : 1);
  }
  if (is_string(a) && is_string(b)) {
    return decide(std::get<std::string>(a).compare(std::get<std::string>(b)));
  }
  if (is_number(a) && is_number(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
      auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
      return decide(x < y ? -1 : (x > y ? 1 : 0));
    }
    double x = std::holds_alternative<double>(a) ? std::get<double>(a)
                                                 : static_cast<double>(std::get<std::int64_t>(a));
    double y = std::holds_alternative<double>(b) ? std::get<double>(b)
                                                 : static_cast<double>(std::get<std::int64_t>(b));
    return decide(x < y ? -1 : (x > y ? 1 : 0));
  }
  return false;
}

}  // namespace regap
