#include "schema_check.hpp"

#include <stdexcept>

namespace actionraid::cli {

namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  throw std::logic_error("schema uses unsupported type '" + type + "'");
}

const json& resolve(const json& node, const json& root) {
  if (!node.contains("$ref")) return node;
  const std::string ref = node.at("$ref").get<std::string>();
  if (ref.rfind("#/", 0) != 0) throw std::logic_error("schema uses non-local $ref " + ref);
  return root.at(json::json_pointer(ref.substr(1)));
}

void check(const json& v, const json& node, const json& root, const std::string& where,
           std::vector<std::string>& errors) {
  const json& s = resolve(node, root);
  auto fail = [&](const std::string& msg) { errors.push_back((where.empty() ? "/" : where) + ": " + msg); };

  if (s.contains("const") && v != s.at("const")) {
    fail("must equal " + s.at("const").dump());
    return;
  }
  if (s.contains("type") && !has_type(v, s.at("type").get<std::string>())) {
    fail("expected " + s.at("type").get<std::string>());
    return;
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& option : s.at("enum")) found = found || option == v;
    if (!found) fail("must be one of " + s.at("enum").dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s.at("minimum").get<double>()) {
      fail("must be >= " + s.at("minimum").dump());
    }
    if (s.contains("maximum") && x > s.at("maximum").get<double>()) {
      fail("must be <= " + s.at("maximum").dump());
    }
    if (s.contains("exclusiveMinimum") && x <= s.at("exclusiveMinimum").get<double>()) {
      fail("must be > " + s.at("exclusiveMinimum").dump());
    }
  }
  if (v.is_string() && s.contains("minLength") &&
      v.get<std::string>().size() < s.at("minLength").get<std::size_t>()) {
    fail("string too short");
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>()) {
      fail("needs at least " + s.at("minItems").dump() + " items");
    }
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        check(v[i], s.at("items"), root, where + "/" + std::to_string(i), errors);
      }
    }
  }
  if (v.is_object()) {
    static const json kEmpty = json::object();
    const json& props = s.contains("properties") ? s.at("properties") : kEmpty;
    if (s.contains("required")) {
      for (const auto& key : s.at("required")) {
        if (!v.contains(key.get<std::string>())) fail("missing required key '" + key.get<std::string>() + "'");
      }
    }
    const bool closed = s.contains("additionalProperties") && !s.at("additionalProperties").get<bool>();
    for (const auto& [key, value] : v.items()) {
      if (props.contains(key)) {
        check(value, props.at(key), root, where + "/" + key, errors);
      } else if (closed) {
        fail("unknown key '" + key + "'");
      }
    }
  }
}

}  // namespace

std::vector<std::string> check_schema(const nlohmann::json& instance, const nlohmann::json& schema) {
  std::vector<std::string> errors;
  check(instance, schema, schema, "", errors);
  return errors;
}

}  // namespace actionraid::cli
