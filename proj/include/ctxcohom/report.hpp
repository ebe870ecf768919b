#pragma once

// Analysis reports: an exact, order-stable record of one classification run,
// serialized as JSON (structured) or as a terminal summary (text).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxcohom/model_io.hpp"
#include "ctxcohom/obstruction.hpp"

namespace ctxcohom {

struct GroupSummary {
  std::size_t degree = 0;
  std::size_t free_rank = 0;
  std::vector<std::string> torsion;  // decimal invariant factors
  bool operator==(const GroupSummary&) const = default;
};

struct ObstructionEntry {
  std::string context;
  std::size_t section_index = 0;
  std::string section;
  std::size_t level = 0;
  bool vanishes = false;
  bool rational_only = false;
  /// "family" (a solution in C^{2q}(F)) or "cocycle" (in Z^{2q+1}(F_~C0)).
  std::string witness_kind;
  std::size_t witness_dimension = 0;
  /// Nonzero coordinates as (index, decimal value).
  std::vector<std::pair<std::size_t, std::string>> witness;
  bool operator==(const ObstructionEntry&) const = default;
};

struct ContextEntry {
  std::string context;
  std::size_t sections = 0;
  bool gamma_injective = false;
  bool gamma_separates_sections = false;
  std::size_t gamma_kernel_rank = 0;
  std::vector<GroupSummary> relative;  // F|_{C0}
  std::vector<GroupSummary> kernel;    // F_{~C0}
  bool operator==(const ContextEntry&) const = default;
};

struct AnalysisReport {
  int version = 1;
  std::string model;
  std::string content_hash;
  std::size_t q_max = 0;
  std::optional<std::string> filter_context;
  std::optional<std::size_t> filter_section;
  bool lc = false;
  bool sc = false;
  std::vector<std::string> lc_sections;
  std::vector<std::string> global_sections;
  std::vector<bool> clc;
  std::vector<bool> csc;
  bool all_gamma_injective = false;
  std::vector<GroupSummary> cohomology;  // F
  std::vector<ContextEntry> contexts;
  std::vector<ObstructionEntry> obstructions;
  std::optional<double> seconds;
  bool operator==(const AnalysisReport&) const = default;
};

struct ReportOptions {
  std::optional<std::size_t> context;
  std::optional<std::size_t> section;
  std::optional<double> seconds;
};

AnalysisReport make_report(const ModelDocument& doc, const Analyzer& analyzer, const ClassificationReport& result,
                           const ReportOptions& options = {});

GroupSummary summarize(const CohomologyGroup& g);

std::string dump_report(const AnalysisReport& report);
/// Throws Error(ParseError) on malformed input.
AnalysisReport parse_report(const std::string& text);
std::string render_text(const AnalysisReport& report);

/// Broken internal consistency rules; empty when the report is coherent.
std::vector<std::string> report_problems(const AnalysisReport& report);

}  // namespace ctxcohom
