#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace fraclap::cli {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The published configuration schema, compiled into the binary.
const nlohmann::json& config_schema();
const std::string& config_schema_text();

/// Validates `doc` against definitions/<name> of the configuration schema.
/// Supports the keywords the schema uses: $ref (local), type, enum,
/// properties, required, additionalProperties, items, minItems, maxItems,
/// minimum, maximum, exclusiveMinimum, exclusiveMaximum and oneOf.
/// Throws SchemaError naming the offending JSON pointer.
void validate_config(const std::string& name, const nlohmann::json& doc);

/// Same, against an arbitrary schema whose $refs resolve inside `root`.
void validate(const nlohmann::json& schema, const nlohmann::json& root, const nlohmann::json& doc,
              const std::string& where = "");

}  // namespace fraclap::cli
