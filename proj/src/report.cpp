#include "ctxcohom/report.hpp"

#include <sstream>

#include <json.hpp>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

using ojson = nlohmann::ordered_json;

GroupSummary summarize(const CohomologyGroup& g) {
  GroupSummary s;
  s.degree = g.degree;
  s.free_rank = g.free_rank;
  for (const auto& t : g.torsion) s.torsion.push_back(t.get_str());
  return s;
}

namespace {

std::vector<GroupSummary> groups(const CechComplex& c, std::size_t q_max) {
  std::vector<GroupSummary> out;
  for (std::size_t q = 0; q <= q_max; ++q) out.push_back(summarize(cohomology(c.presheaf(), c.nerve(), q)));
  return out;
}

std::vector<std::pair<std::size_t, std::string>> sparse(const IntVector& v) {
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) out.emplace_back(i, v[i].get_str());
  return out;
}

}  // namespace

AnalysisReport make_report(const ModelDocument& doc, const Analyzer& analyzer, const ClassificationReport& result,
                           const ReportOptions& options) {
  const EmpiricalModel& model = analyzer.model();
  const Scenario& sc = model.scenario();
  AnalysisReport r;
  r.model = doc.name;
  r.content_hash = sha256_hex(serialize_document(doc));
  r.q_max = result.q_max;
  if (options.context) r.filter_context = sc.context_name(*options.context);
  r.filter_section = options.section;
  r.lc = result.is_lc();
  r.sc = result.is_sc();
  for (const auto& ref : result.logical.lc_sections) {
    r.lc_sections.push_back(section_label(sc, model.support(ref.context)[ref.index]));
  }
  for (const auto& g : result.logical.global_sections) r.global_sections.push_back(section_label(sc, g));
  r.clc = result.clc;
  r.csc = result.csc;
  r.all_gamma_injective = result.all_gamma_injective;
  r.cohomology = groups(analyzer.complex(), result.q_max);

  for (const auto& cs : result.contexts) {
    if (options.context && cs.context != *options.context) continue;
    const auto& ca = analyzer.context(cs.context);
    ContextEntry e;
    e.context = sc.context_name(cs.context);
    e.sections = model.support(cs.context).size();
    e.gamma_injective = cs.gamma_injective;
    e.gamma_separates_sections = cs.gamma_separates_sections;
    e.gamma_kernel_rank = cs.gamma_kernel.cols();
    e.relative = groups(ca.relative(), result.q_max);
    e.kernel = groups(ca.kernel(), result.q_max);
    r.contexts.push_back(std::move(e));
  }

  for (const auto& o : result.table) {
    if (options.context && o.context != *options.context) continue;
    if (options.section && o.section != *options.section) continue;
    ObstructionEntry e;
    e.context = sc.context_name(o.context);
    e.section_index = *o.section;
    e.section = section_label(sc, model.support(o.context)[*o.section]);
    e.level = o.level;
    e.vanishes = o.vanishes;
    e.rational_only = o.rational_only;
    e.witness_kind = o.vanishes ? "family" : "cocycle";
    e.witness_dimension = o.witness.size();
    e.witness = sparse(o.witness);
    r.obstructions.push_back(std::move(e));
  }
  r.seconds = options.seconds;
  return r;
}

namespace {

ojson group_json(const std::vector<GroupSummary>& gs) {
  ojson out = ojson::array();
  for (const auto& g : gs) {
    ojson j;
    j["degree"] = g.degree;
    j["free_rank"] = g.free_rank;
    j["torsion"] = g.torsion;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<GroupSummary> group_from(const ojson& a) {
  std::vector<GroupSummary> out;
  for (const auto& j : a) {
    GroupSummary g;
    g.degree = j.at("degree").get<std::size_t>();
    g.free_rank = j.at("free_rank").get<std::size_t>();
    g.torsion = j.at("torsion").get<std::vector<std::string>>();
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::string dump_report(const AnalysisReport& r) {
  ojson j;
  j["report_version"] = r.version;
  j["model"]["name"] = r.model;
  j["model"]["content_hash"] = r.content_hash;
  j["q_max"] = r.q_max;
  if (r.filter_context || r.filter_section) {
    j["filter"]["context"] = r.filter_context ? ojson(*r.filter_context) : ojson(nullptr);
    j["filter"]["section"] = r.filter_section ? ojson(*r.filter_section) : ojson(nullptr);
  }
  j["logical"]["lc"] = r.lc;
  j["logical"]["sc"] = r.sc;
  j["logical"]["lc_sections"] = r.lc_sections;
  j["logical"]["global_sections"] = r.global_sections;
  j["cohomological"]["clc"] = r.clc;
  j["cohomological"]["csc"] = r.csc;
  j["cohomological"]["all_gamma_injective"] = r.all_gamma_injective;
  j["cohomology"] = group_json(r.cohomology);
  j["contexts"] = ojson::array();
  for (const auto& c : r.contexts) {
    ojson e;
    e["context"] = c.context;
    e["sections"] = c.sections;
    e["gamma_injective"] = c.gamma_injective;
    e["gamma_separates_sections"] = c.gamma_separates_sections;
    e["gamma_kernel_rank"] = c.gamma_kernel_rank;
    e["relative_cohomology"] = group_json(c.relative);
    e["kernel_cohomology"] = group_json(c.kernel);
    j["contexts"].push_back(std::move(e));
  }
  j["obstructions"] = ojson::array();
  for (const auto& o : r.obstructions) {
    ojson e;
    e["context"] = o.context;
    e["section_index"] = o.section_index;
    e["section"] = o.section;
    e["level"] = o.level;
    e["vanishes"] = o.vanishes;
    e["rational_only"] = o.rational_only;
    e["witness"]["kind"] = o.witness_kind;
    e["witness"]["dimension"] = o.witness_dimension;
    e["witness"]["entries"] = ojson::array();
    for (const auto& [i, v] : o.witness) e["witness"]["entries"].push_back(ojson::array({i, v}));
    j["obstructions"].push_back(std::move(e));
  }
  if (r.seconds) j["timing"]["seconds"] = *r.seconds;
  return j.dump(2) + "\n";
}

AnalysisReport parse_report(const std::string& text) {
  AnalysisReport r;
  try {
    ojson j = ojson::parse(text);
    r.version = j.at("report_version").get<int>();
    r.model = j.at("model").at("name").get<std::string>();
    r.content_hash = j.at("model").at("content_hash").get<std::string>();
    r.q_max = j.at("q_max").get<std::size_t>();
    if (auto it = j.find("filter"); it != j.end()) {
      if (!it->at("context").is_null()) r.filter_context = it->at("context").get<std::string>();
      if (!it->at("section").is_null()) r.filter_section = it->at("section").get<std::size_t>();
    }
    const auto& lg = j.at("logical");
    r.lc = lg.at("lc").get<bool>();
    r.sc = lg.at("sc").get<bool>();
    r.lc_sections = lg.at("lc_sections").get<std::vector<std::string>>();
    r.global_sections = lg.at("global_sections").get<std::vector<std::string>>();
    const auto& co = j.at("cohomological");
    r.clc = co.at("clc").get<std::vector<bool>>();
    r.csc = co.at("csc").get<std::vector<bool>>();
    r.all_gamma_injective = co.at("all_gamma_injective").get<bool>();
    r.cohomology = group_from(j.at("cohomology"));
    for (const auto& e : j.at("contexts")) {
      ContextEntry c;
      c.context = e.at("context").get<std::string>();
      c.sections = e.at("sections").get<std::size_t>();
      c.gamma_injective = e.at("gamma_injective").get<bool>();
      c.gamma_separates_sections = e.at("gamma_separates_sections").get<bool>();
      c.gamma_kernel_rank = e.at("gamma_kernel_rank").get<std::size_t>();
      c.relative = group_from(e.at("relative_cohomology"));
      c.kernel = group_from(e.at("kernel_cohomology"));
      r.contexts.push_back(std::move(c));
    }
    for (const auto& e : j.at("obstructions")) {
      ObstructionEntry o;
      o.context = e.at("context").get<std::string>();
      o.section_index = e.at("section_index").get<std::size_t>();
      o.section = e.at("section").get<std::string>();
      o.level = e.at("level").get<std::size_t>();
      o.vanishes = e.at("vanishes").get<bool>();
      o.rational_only = e.at("rational_only").get<bool>();
      o.witness_kind = e.at("witness").at("kind").get<std::string>();
      o.witness_dimension = e.at("witness").at("dimension").get<std::size_t>();
      for (const auto& p : e.at("witness").at("entries")) {
        o.witness.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::string>());
      }
      r.obstructions.push_back(std::move(o));
    }
    if (auto it = j.find("timing"); it != j.end()) r.seconds = it->at("seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return r;
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string group_text(const GroupSummary& g) {
  if (g.free_rank == 0 && g.torsion.empty()) return "0";
  std::string out;
  if (g.free_rank > 0) out = "Z^" + std::to_string(g.free_rank);
  for (const auto& t : g.torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t;
  return out;
}

}  // namespace

std::string render_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "model: " << r.model << "\n";
  out << "sha256: " << r.content_hash << "\n";
  out << "q_max: " << r.q_max << "\n";
  out << "LC: " << yes_no(r.lc) << "  SC: " << yes_no(r.sc) << "\n";
  for (std::size_t q = 0; q < r.clc.size(); ++q) {
    const std::string sfx = q == 0 ? "" : "^" + std::to_string(q);
    out << "CLC" << sfx << ": " << yes_no(r.clc[q]) << "  CSC" << sfx << ": " << yes_no(r.csc[q]) << "\n";
  }
  out << "all gamma injective: " << yes_no(r.all_gamma_injective) << "\n";
  out << "logically contextual sections:" << (r.lc_sections.empty() ? " none" : "") << "\n";
  for (const auto& s : r.lc_sections) out << "  " << s << "\n";
  out << "global sections:" << (r.global_sections.empty() ? " none" : "") << "\n";
  for (const auto& s : r.global_sections) out << "  " << s << "\n";
  out << "cohomology of F:";
  for (const auto& g : r.cohomology) out << "  H^" << g.degree << " = " << group_text(g);
  out << "\n";
  for (const auto& c : r.contexts) {
    out << "context " << c.context << ": gamma kernel rank " << c.gamma_kernel_rank
        << ", injective " << yes_no(c.gamma_injective) << ", separates sections " << yes_no(c.gamma_separates_sections)
        << "\n";
    out << "  F_rel:";
    for (const auto& g : c.relative) out << "  H^" << g.degree << " = " << group_text(g);
    out << "\n  F_ker:";
    for (const auto& g : c.kernel) out << "  H^" << g.degree << " = " << group_text(g);
    out << "\n";
  }
  out << "obstructions:\n";
  for (const auto& o : r.obstructions) {
    out << "  q=" << o.level << "  " << o.section << "  " << (o.vanishes ? "vanishes" : "NONZERO")
        << (o.rational_only ? " (vanishes over Q only)" : "") << "\n";
  }
  if (r.seconds) out << "time: " << *r.seconds << " s\n";
  return out.str();
}

std::vector<std::string> report_problems(const AnalysisReport& r) {
  std::vector<std::string> out;
  if (r.clc.size() != r.q_max + 1 || r.csc.size() != r.q_max + 1) out.push_back("flag arrays do not span 0..q_max");
  if (r.lc != !r.lc_sections.empty()) out.push_back("LC disagrees with the contextual section list");
  if (r.sc != r.global_sections.empty()) out.push_back("SC disagrees with the global section list");
  if (!r.clc.empty() && r.clc[0] && !r.lc) out.push_back("CLC without LC");
  if (!r.csc.empty() && r.csc[0] && !r.sc) out.push_back("CSC without SC");
  for (const auto& o : r.obstructions) {
    if ((o.witness_kind == "family") != o.vanishes) out.push_back("witness kind does not match verdict");
    if (o.rational_only && o.vanishes) out.push_back("rational-only flag on a vanishing class");
  }
  const bool filtered = r.filter_context || r.filter_section;
  if (!filtered) {
    for (std::size_t q = 0; q < r.clc.size() && q < r.csc.size(); ++q) {
      bool any = false, all = true;
      for (const auto& o : r.obstructions) {
        if (o.level != q) continue;
        any = any || !o.vanishes;
        all = all && !o.vanishes;
      }
      if (any != r.clc[q]) out.push_back("CLC flag at level " + std::to_string(q) + " disagrees with the table");
      if (all != r.csc[q]) out.push_back("CSC flag at level " + std::to_string(q) + " disagrees with the table");
    }
    bool inj = true;
    for (const auto& c : r.contexts) inj = inj && c.gamma_injective;
    if (inj != r.all_gamma_injective) out.push_back("injectivity summary disagrees with the contexts");
  }
  for (std::size_t i = 0; i + 1 < r.obstructions.size(); ++i) {
    const auto& lo = r.obstructions[i];
    const auto& hi = r.obstructions[i + 1];
    if (lo.context == hi.context && lo.section_index == hi.section_index && hi.level == lo.level + 1 && lo.vanishes &&
        !hi.vanishes) {
      out.push_back("level hierarchy broken at " + lo.section);
    }
  }
  return out;
}

}  // namespace ctxcohom
