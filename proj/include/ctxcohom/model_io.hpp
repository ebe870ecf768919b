#pragma once

// Model documents: the on-disk JSON form of a scenario plus its possibility
// table, with outcome tuples written as strings in context order ("01").

#include <string>
#include <string_view>
#include <vector>

#include "ctxcohom/empirical.hpp"

namespace ctxcohom {

struct ModelDocument {
  int format_version = 1;
  std::string name;
  std::string description;
  /// Support obtained by a rule rather than transcribed from a table.
  bool derived = false;
  std::string notes;
  std::vector<std::string> measurements;
  std::vector<std::vector<std::string>> contexts;
  std::vector<std::string> outcomes;
  /// Per context, the possible sections as outcome strings.
  std::vector<std::vector<std::string>> support;

  bool operator==(const ModelDocument&) const = default;
};

/// Throws Error(ParseError) with a line/column or field location.
ModelDocument parse_document(std::string_view text, const std::string& origin = "<input>");
/// Canonical form: fixed key order, two-space indent, trailing newline.
std::string serialize_document(const ModelDocument& doc);

/// Builds and validates the model. Entries that do not fit the scenario are
/// reported as ParseError naming the context and the entry.
EmpiricalModel to_model(const ModelDocument& doc, const LoadOptions& options = {});
Scenario to_scenario(const ModelDocument& doc);
ModelDocument from_model(const EmpiricalModel& model, const std::string& name, const std::string& description = "");

/// Reads a file. A path "corpus/NAME" that does not exist on disk resolves
/// to the built-in fixture NAME.
ModelDocument load_document(const std::string& path);

/// Hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace ctxcohom
