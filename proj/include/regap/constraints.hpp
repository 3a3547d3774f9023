#pragma once

#include <string>
#include <vector>

#include "regap/attrs.hpp"

namespace regap {

// Node / edge constraint over a single attribute map.  Evaluation is total:
// a missing attribute or a kind mismatch makes the enclosing comparison false.
struct Constraint {
  enum class Kind { True, Has, Cmp, And, Or, Not };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;     // Cmp only
  std::string attr;         // Has, Cmp
  AttrValue value = false;  // Cmp only
  std::vector<Constraint> args;  // And, Or (n-ary), Not (exactly one)

  bool eval(const AttrMap& a) const {
    switch (kind) {
      case Kind::True: return true;
      case Kind::Has: return a.count(attr) != 0;
      case Kind::Cmp: {
        auto it = a.find(attr);
        if (it == a.end()) return false;
        return compare_values(op, it->second, value);
      }
      case Kind::And:
        for (const auto& c : args)
          if (!c.eval(a)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : args)
          if (c.eval(a)) return true;
        return false;
      case Kind::Not: return !args.front().eval(a);
    }
    return false;
  }

  bool is_true() const { return kind == Kind::True; }

  static Constraint make_true() { return Constraint{}; }

  static Constraint conjunction(std::vector<Constraint> parts) {
    std::erase_if(parts, [](const Constraint& c) { return c.is_true(); });
    if (parts.empty()) return make_true();
    if (parts.size() == 1) return std::move(parts.front());
    Constraint c;
    c.kind = Kind::And;
    c.args = std::move(parts);
    return c;
  }

  static Constraint parse(const json& j);
  json to_json() const;
};

namespace detail {

inline const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "eq";
    case CmpOp::Ne: return "ne";
    case CmpOp::Lt: return "lt";
    case CmpOp::Le: return "le";
    case CmpOp::Gt: return "gt";
    case CmpOp::Ge: return "ge";
  }
  return "eq";
}

inline CmpOp cmp_from_name(const std::string& s, bool& ok) {
  ok = true;
  if (s == "eq") return CmpOp::Eq;
  if (s == "ne") return CmpOp::Ne;
  if (s == "lt") return CmpOp::Lt;
  if (s == "le") return CmpOp::Le;
  if (s == "gt") return CmpOp::Gt;
  if (s == "ge") return CmpOp::Ge;
  ok = false;
  return CmpOp::Eq;
}

}  // namespace detail

inline Constraint Constraint::parse(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string())
    throw ParseError("constraint must be an object with a string \"op\"");
  const std::string op = j.at("op").get<std::string>();
  Constraint c;
  if (op == "true") {
    c.kind = Kind::True;
    return c;
  }
  if (op == "has") {
    if (!j.contains("attr") || !j.at("attr").is_string())
      throw ParseError("\"has\" constraint needs a string \"attr\"");
    c.kind = Kind::Has;
    c.attr = j.at("attr").get<std::string>();
    return c;
  }
  bool is_cmp = false;
  CmpOp cmp = detail::cmp_from_name(op, is_cmp);
  if (is_cmp) {
    if (!j.contains("attr") || !j.at("attr").is_string() || !j.contains("value"))
      throw ParseError("\"" + op + "\" constraint needs \"attr\" and \"value\"");
    c.kind = Kind::Cmp;
    c.op = cmp;
    c.attr = j.at("attr").get<std::string>();
    c.value = attr_from_json(j.at("value"));
    return c;
  }
  if (op == "and" || op == "or") {
    if (!j.contains("args") || !j.at("args").is_array())
      throw ParseError("\"" + op + "\" constraint needs an \"args\" array");
    c.kind = op == "and" ? Kind::And : Kind::Or;
    for (const auto& a : j.at("args")) c.args.push_back(parse(a));
    return c;
  }
  if (op == "not") {
    if (!j.contains("arg")) throw ParseError("\"not\" constraint needs \"arg\"");
    c.kind = Kind::Not;
    c.args.push_back(parse(j.at("arg")));
    return c;
  }
  throw ParseError("unknown constraint op \"" + op + "\"");
}

inline json Constraint::to_json() const {
  switch (kind) {
    case Kind::True: return json{{"op", "true"}};
    case Kind::Has: return json{{"op", "has"}, {"attr", attr}};
    case Kind::Cmp:
      return json{{"op", detail::cmp_name(op)}, {"attr", attr}, {"value", attr_to_json(value)}};
    case Kind::And:
    case Kind::Or: {
      json a = json::array();
      for (const auto& c : args) a.push_back(c.to_json());
      return json{{"op", kind == Kind::And ? "and" : "or"}, {"args", a}};
    }
    case Kind::Not: return json{{"op", "not"}, {"arg", args.front().to_json()}};
  }
  return json{{"op", "true"}};
}

// One side of a pair comparison: an attribute of endpoint u, of endpoint v,
// or a literal value.
struct PairSide {
  enum class Which { U, V, Lit } which = Which::Lit;
  std::string attr;         // U, V
  AttrValue value = false;  // Lit

  // Missing attribute surfaces as "no value": comparisons involving it are false.
  const AttrValue* resolve(const AttrMap& ua, const AttrMap& va) const {
    switch (which) {
      case Which::U: {
        auto it = ua.find(attr);
        return it == ua.end() ? nullptr : &it->second;
      }
      case Which::V: {
        auto it = va.find(attr);
        return it == va.end() ? nullptr : &it->second;
      }
      case Which::Lit: return &value;
    }
    return nullptr;
  }
};

// Constraint over an ordered pair of nodes, used by "pair_constraints".
struct PairConstraint {
  enum class Kind { True, Has, Cmp, And, Or, Not };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  PairSide lhs, rhs;  // Cmp; Has uses lhs (must be U or V)
  std::vector<PairConstraint> args;

  bool eval(const AttrMap& ua, const AttrMap& va) const {
    switch (kind) {
      case Kind::True: return true;
      case Kind::Has: return lhs.resolve(ua, va) != nullptr;
      case Kind::Cmp: {
        const AttrValue* a = lhs.resolve(ua, va);
        const AttrValue* b = rhs.resolve(ua, va);
        if (!a || !b) return false;
        return compare_values(op, *a, *b);
      }
      case Kind::And:
        for (const auto& c : args)
          if (!c.eval(ua, va)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : args)
          if (c.eval(ua, va)) return true;
        return false;
      case Kind::Not: return !args.front().eval(ua, va);
    }
    return false;
  }

  static PairConstraint parse(const json& j, const std::string& u_id, const std::string& v_id);
  json to_json(const std::string& u_id, const std::string& v_id) const;
};

namespace detail {

inline PairSide pair_side(const json& j, const std::string& u_id, const std::string& v_id) {
  if (!j.is_object()) throw ParseError("pair constraint side must be an object");
  PairSide s;
  if (j.contains("value")) {
    s.which = PairSide::Which::Lit;
    s.value = attr_from_json(j.at("value"));
    return s;
  }
  if (!j.contains("node") || !j.at("node").is_string() || !j.contains("attr") ||
      !j.at("attr").is_string())
    throw ParseError("pair constraint side needs {\"node\",\"attr\"} or {\"value\"}");
  const std::string node = j.at("node").get<std::string>();
  if (node == u_id)
    s.which = PairSide::Which::U;
  else if (node == v_id)
    s.which = PairSide::Which::V;
  else
    throw ParseError("pair constraint side references \"" + node +
                     "\" which is neither endpoint of the pair");
  s.attr = j.at("attr").get<std::string>();
  return s;
}

}  // namespace detail

inline PairConstraint PairConstraint::parse(const json& j, const std::string& u_id,
                                            const std::string& v_id) {
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string())
    throw ParseError("pair constraint must be an object with a string \"op\"");
  const std::string op = j.at("op").get<std::string>();
  PairConstraint c;
  if (op == "true") return c;
  if (op == "has") {
    if (!j.contains("node") || !j.contains("attr"))
      throw ParseError("pair \"has\" needs \"node\" and \"attr\"");
    c.kind = Kind::Has;
    json side = {{"node", j.at("node")}, {"attr", j.at("attr")}};
    c.lhs = detail::pair_side(side, u_id, v_id);
    return c;
  }
  bool is_cmp = false;
  CmpOp cmp = detail::cmp_from_name(op, is_cmp);
  if (is_cmp) {
    if (!j.contains("lhs") || !j.contains("rhs"))
      throw ParseError("pair \"" + op + "\" needs \"lhs\" and \"rhs\"");
    c.kind = Kind::Cmp;
    c.op = cmp;
    c.lhs = detail::pair_side(j.at("lhs"), u_id, v_id);
    c.rhs = detail::pair_side(j.at("rhs"), u_id, v_id);
    return c;
  }
  if (op == "and" || op == "or") {
    if (!j.contains("args") || !j.at("args").is_array())
      throw ParseError("pair \"" + op + "\" needs an \"args\" array");
    c.kind = op == "and" ? Kind::And : Kind::Or;
    for (const auto& a : j.at("args")) c.args.push_back(parse(a, u_id, v_id));
    return c;
  }
  if (op == "not") {
    if (!j.contains("arg")) throw ParseError("pair \"not\" needs \"arg\"");
    c.kind = Kind::Not;
    c.args.push_back(parse(j.at("arg"), u_id, v_id));
    return c;
  }
  throw ParseError("unknown pair constraint op \"" + op + "\"");
}

namespace detail {

inline json pair_side_json(const PairSide& s, const std::string& u_id, const std::string& v_id) {
  switch (s.which) {
    case PairSide::Which::U: return json{{"node", u_id}, {"attr", s.attr}};
    case PairSide::Which::V: return json{{"node", v_id}, {"attr", s.attr}};
    case PairSide::Which::Lit: return json{{"value", attr_to_json(s.value)}};
  }
  return json::object();
}

}  // namespace detail

inline json PairConstraint::to_json(const std::string& u_id, const std::string& v_id) const {
  switch (kind) {
    case Kind::True: return json{{"op", "true"}};
    case Kind::Has: {
      json side = detail::pair_side_json(lhs, u_id, v_id);
      return json{{"op", "has"}, {"node", side.at("node")}, {"attr", side.at("attr")}};
    }
    case Kind::Cmp:
      return json{{"op", detail::cmp_name(op)},
                  {"lhs", detail::pair_side_json(lhs, u_id, v_id)},
                  {"rhs", detail::pair_side_json(rhs, u_id, v_id)}};
    case Kind::And:
    case Kind::Or: {
      json a = json::array();
      for (const auto& c : args) a.push_back(c.to_json(u_id, v_id));
      return json{{"op", kind == Kind::And ? "and" : "or"}, {"args", a}};
    }
    case Kind::Not: return json{{"op", "not"}, {"arg", args.front().to_json(u_id, v_id)}};
  }
  return json{{"op", "true"}};
}

}  // namespace regap
