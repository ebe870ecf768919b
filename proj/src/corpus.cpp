#include "ctxcohom/corpus.hpp"

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

namespace {

using Strings = std::vector<std::string>;

ModelDocument bell(std::string name, std::string description, Strings outcomes, std::vector<Strings> support) {
  ModelDocument d;
  d.name = std::move(name);
  d.description = std::move(description);
  d.measurements = {"a1", "b1", "a2", "b2"};
  d.contexts = {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"}};
  d.outcomes = std::move(outcomes);
  d.support = std::move(support);
  return d;
}

// Possibility table with one 0/1 flag per column.
std::vector<Strings> from_flags(const Strings& columns, const std::vector<Strings>& rows) {
  std::vector<Strings> out;
  for (const auto& row : rows) {
    Strings sections;
    for (std::size_t k = 0; k < columns.size(); ++k)
      if (row[k] == "1") sections.push_back(columns[k]);
    out.push_back(std::move(sections));
  }
  return out;
}

ModelDocument hardy() {
  const Strings cols = {"00", "10", "01", "11"};
  return bell("hardy", "Hardy model on the (2,2,2) Bell scenario", {"0", "1"},
              from_flags(cols, {{"1", "1", "1", "1"},
                                {"0", "1", "1", "1"},
                                {"0", "1", "1", "1"},
                                {"1", "1", "1", "0"}}));
}

ModelDocument prbox() {
  const Strings cols = {"00", "10", "01", "11"};
  return bell("prbox", "Popescu-Rohrlich box on the (2,2,2) Bell scenario", {"0", "1"},
              from_flags(cols, {{"1", "0", "0", "1"},
                                {"1", "0", "0", "1"},
                                {"1", "0", "0", "1"},
                                {"0", "1", "1", "0"}}));
}

ModelDocument sc_not_clc() {
  const Strings cols = {"00", "01", "10", "02", "20", "03", "30", "11",
                        "12", "21", "13", "31", "22", "23", "32", "33"};
  return bell("sc-not-clc-224", "Strongly contextual model on a (2,2,4) scenario with no cohomological obstruction",
              {"0", "1", "2", "3"},
              from_flags(cols, {{"1", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1", "0", "0", "1"},
                                {"1", "0", "1", "0", "0", "0", "0", "1", "0", "1", "0", "0", "1", "0", "1", "1"},
                                {"1", "0", "1", "0", "0", "0", "0", "1", "0", "1", "0", "0", "1", "0", "1", "1"},
                                {"0", "1", "0", "0", "0", "0", "1", "0", "1", "0", "0", "0", "0", "1", "0", "0"}}));
}

ModelDocument ks7() {
  ModelDocument d;
  d.name = "ks-7";
  d.description = "Kochen-Specker model on a seven-measurement cover";
  d.derived = true;
  d.notes = "support: in every context exactly one measurement has outcome 1";
  d.measurements = {"A", "B", "C", "D", "E", "F", "G"};
  d.contexts = {{"A", "B", "C"}, {"B", "D", "E"}, {"C", "D", "E"}, {"A", "D", "F"}, {"A", "E", "G"}};
  d.outcomes = {"0", "1"};
  d.support.assign(d.contexts.size(), {"001", "010", "100"});
  return d;
}

}  // namespace

const std::vector<ModelDocument>& corpus() {
  static const std::vector<ModelDocument> docs = {hardy(), prbox(), sc_not_clc(), ks7()};
  return docs;
}

std::optional<ModelDocument> corpus_document(std::string_view name) {
  for (const auto& d : corpus())
    if (d.name == name) return d;
  return std::nullopt;
}

EmpiricalModel corpus_model(std::string_view name) {
  auto d = corpus_document(name);
  if (!d) throw Error(ErrorCode::InvalidArgument, "unknown corpus model " + std::string(name));
  return to_model(*d);
}

}  // namespace ctxcohom
