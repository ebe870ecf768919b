#include "ctxcohom/model_io.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctxcohom/corpus.hpp"
#include "ctxcohom/errors.hpp"

namespace ctxcohom {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, origin + ": " + where + ": " + what);
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const ojson& require(const ojson& obj, const char* key, const std::string& origin, const std::string& where) {
  if (!obj.is_object()) parse_fail(origin, where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(origin, where, std::string("missing field '") + key + "'");
  return *it;
}

std::string as_string(const ojson& v, const std::string& origin, const std::string& where) {
  if (!v.is_string()) parse_fail(origin, where, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> as_strings(const ojson& v, const std::string& origin, const std::string& where) {
  if (!v.is_array()) parse_fail(origin, where, "expected a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], origin, where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

ModelDocument parse_document(std::string_view text, const std::string& origin) {
  ojson j;
  try {
    j = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(origin, line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  ModelDocument d;
  const ojson& version = require(j, "format_version", origin, "document");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    parse_fail(origin, "format_version", "unsupported version (expected 1)");
  }
  d.format_version = 1;
  d.name = as_string(require(j, "name", origin, "document"), origin, "name");
  if (auto it = j.find("description"); it != j.end()) d.description = as_string(*it, origin, "description");
  if (auto it = j.find("derived"); it != j.end()) {
    if (!it->is_boolean()) parse_fail(origin, "derived", "expected true or false");
    d.derived = it->get<bool>();
  }
  if (auto it = j.find("notes"); it != j.end()) d.notes = as_string(*it, origin, "notes");

  const ojson& sc = require(j, "scenario", origin, "document");
  d.measurements = as_strings(require(sc, "measurements", origin, "scenario"), origin, "scenario.measurements");
  const ojson& ctxs = require(sc, "contexts", origin, "scenario");
  if (!ctxs.is_array()) parse_fail(origin, "scenario.contexts", "expected a list of lists");
  for (std::size_t i = 0; i < ctxs.size(); ++i) {
    d.contexts.push_back(as_strings(ctxs[i], origin, "scenario.contexts[" + std::to_string(i) + "]"));
  }
  d.outcomes = as_strings(require(sc, "outcomes", origin, "scenario"), origin, "scenario.outcomes");

  const ojson& sup = require(j, "support", origin, "document");
  if (!sup.is_array()) parse_fail(origin, "support", "expected a list");
  if (sup.size() != d.contexts.size()) {
    parse_fail(origin, "support", "expected " + std::to_string(d.contexts.size()) + " entries, one per context");
  }
  for (std::size_t i = 0; i < sup.size(); ++i) {
    const std::string where = "support[" + std::to_string(i) + "]";
    auto members = as_strings(require(sup[i], "context", origin, where), origin, where + ".context");
    if (members != d.contexts[i]) parse_fail(origin, where, "context does not match scenario.contexts[" + std::to_string(i) + "]");
    d.support.push_back(as_strings(require(sup[i], "sections", origin, where), origin, where + ".sections"));
  }
  return d;
}

std::string serialize_document(const ModelDocument& d) {
  ojson j;
  j["format_version"] = d.format_version;
  j["name"] = d.name;
  j["description"] = d.description;
  j["derived"] = d.derived;
  j["notes"] = d.notes;
  j["scenario"]["measurements"] = d.measurements;
  j["scenario"]["contexts"] = d.contexts;
  j["scenario"]["outcomes"] = d.outcomes;
  j["support"] = ojson::array();
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    ojson entry;
    entry["context"] = i < d.contexts.size() ? ojson(d.contexts[i]) : ojson::array();
    entry["sections"] = d.support[i];
    j["support"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

Scenario to_scenario(const ModelDocument& d) {
  for (std::size_t k = 0; k < d.outcomes.size(); ++k) {
    if (d.outcomes[k].size() != 1) {
      throw Error(ErrorCode::ParseError, "scenario.outcomes[" + std::to_string(k) + "]: outcome labels must be single characters");
    }
  }
  return Scenario::build(d.measurements, d.contexts, d.outcomes);
}

EmpiricalModel to_model(const ModelDocument& d, const LoadOptions& options) {
  Scenario sc = to_scenario(d);
  if (d.support.size() != sc.num_contexts()) {
    throw Error(ErrorCode::ParseError, "support: expected one entry per context");
  }
  std::vector<std::vector<Section>> table(sc.num_contexts());
  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    const auto& ctx = sc.context(c);
    for (const auto& entry : d.support[c]) {
      if (entry.size() != ctx.members.size()) {
        throw Error(ErrorCode::ParseError, "context " + sc.context_name(c) + ": entry \"" + entry + "\" needs " +
                                               std::to_string(ctx.members.size()) + " outcomes");
      }
      std::vector<int> outcomes;
      for (char ch : entry) {
        auto k = sc.outcome_index(std::string(1, ch));
        if (!k) {
          throw Error(ErrorCode::OutcomeOutOfRange,
                      "context " + sc.context_name(c) + ": entry \"" + entry + "\" uses unknown outcome '" + ch + "'");
        }
        outcomes.push_back(static_cast<int>(*k));
      }
      table[c].push_back(make_section(sc, c, outcomes));
    }
  }
  return load_model(std::move(sc), std::move(table), options);
}

ModelDocument from_model(const EmpiricalModel& model, const std::string& name, const std::string& description) {
  const Scenario& sc = model.scenario();
  ModelDocument d;
  d.name = name;
  d.description = description;
  d.measurements = sc.measurements();
  for (const auto& ctx : sc.contexts()) {
    std::vector<std::string> labels;
    for (auto m : ctx.members) labels.push_back(sc.measurements()[m]);
    d.contexts.push_back(std::move(labels));
  }
  d.outcomes = sc.outcomes();
  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    std::vector<std::string> row;
    for (const auto& s : model.support(c)) row.push_back(section_string(sc, s, sc.context(c).members));
    d.support.push_back(std::move(row));
  }
  return d;
}

ModelDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    const std::string prefix = "corpus/";
    if (path.rfind(prefix, 0) == 0) {
      std::string name = path.substr(prefix.size());
      if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
      if (auto d = corpus_document(name)) return *d;
    }
    throw Error(ErrorCode::ParseError, path + ": cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace ctxcohom
