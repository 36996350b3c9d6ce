#include "schema.hpp"

#include <cmath>

#include "schema_text.hpp"

namespace fraclap::cli {

namespace {

bool has_type(const nlohmann::json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  if (type == "number") return doc.is_number();
  if (type == "integer") {
    if (doc.is_number_integer()) return true;
    return doc.is_number_float() && std::floor(doc.get<double>()) == doc.get<double>();
  }
  throw SchemaError("schema uses unknown type '" + type + "'");
}

const nlohmann::json& resolve(const nlohmann::json& root, const std::string& ref) {
  const std::string prefix = "#/";
  if (ref.rfind(prefix, 0) != 0) throw SchemaError("only local references are supported: " + ref);
  return root.at(nlohmann::json::json_pointer(ref.substr(1)));
}

std::string at(const std::string& where) { return where.empty() ? "/" : where; }

}  // namespace

const std::string& config_schema_text() {
  static const std::string text = generated::kConfigSchema;
  return text;
}

const nlohmann::json& config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(config_schema_text());
  return schema;
}

void validate(const nlohmann::json& schema, const nlohmann::json& root, const nlohmann::json& doc,
              const std::string& where) {
  if (schema.contains("$ref")) {
    validate(resolve(root, schema["$ref"].get<std::string>()), root, doc, where);
    return;
  }
  if (schema.contains("oneOf")) {
    int matches = 0;
    std::string last;
    for (const auto& option : schema["oneOf"]) {
      try {
        validate(option, root, doc, where);
        ++matches;
      } catch (const SchemaError& e) {
        last = e.what();
      }
    }
    if (matches != 1) {
      throw SchemaError(at(where) + ": must match exactly one alternative" +
                        (matches == 0 ? " (" + last + ")" : ""));
    }
  }
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(doc, t.get<std::string>());
    } else {
      for (const auto& one : t) ok = ok || has_type(doc, one.get<std::string>());
    }
    if (!ok) throw SchemaError(at(where) + ": expected type " + t.dump());
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& v : schema["enum"]) found = found || v == doc;
    if (!found) throw SchemaError(at(where) + ": value " + doc.dump() + " is not one of " + schema["enum"].dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>()) {
      throw SchemaError(at(where) + ": below minimum " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && v > schema["maximum"].get<double>()) {
      throw SchemaError(at(where) + ": above maximum " + schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && !(v > schema["exclusiveMinimum"].get<double>())) {
      throw SchemaError(at(where) + ": must exceed " + schema["exclusiveMinimum"].dump());
    }
    if (schema.contains("exclusiveMaximum") && !(v < schema["exclusiveMaximum"].get<double>())) {
      throw SchemaError(at(where) + ": must be below " + schema["exclusiveMaximum"].dump());
    }
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) {
      throw SchemaError(at(where) + ": needs at least " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>()) {
      throw SchemaError(at(where) + ": allows at most " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        validate(schema["items"], root, doc[i], where + "/" + std::to_string(i));
      }
    }
  }
  if (doc.is_object()) {
    const nlohmann::json empty = nlohmann::json::object();
    const auto& props = schema.contains("properties") ? schema["properties"] : empty;
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!doc.contains(key.get<std::string>())) {
          throw SchemaError(at(where) + ": missing required key '" + key.get<std::string>() + "'");
        }
      }
    }
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        validate(props[key], root, value, where + "/" + key);
      } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
        throw SchemaError(at(where) + ": unknown key '" + key + "'");
      }
    }
  }
}

void validate_config(const std::string& name, const nlohmann::json& doc) {
  const auto& schema = config_schema();
  if (!schema["definitions"].contains(name)) throw SchemaError("no schema for subcommand '" + name + "'");
  validate(schema["definitions"][name], schema, doc);
}

}  // namespace fraclap::cli
