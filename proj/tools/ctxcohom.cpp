#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctxcohom/corpus.hpp"
#include "ctxcohom/errors.hpp"
#include "ctxcohom/model_io.hpp"
#include "ctxcohom/obstruction.hpp"
#include "ctxcohom/render.hpp"
#include "ctxcohom/report.hpp"
#include "ctxcohom/torsor.hpp"

using namespace ctxcohom;
using ojson = nlohmann::ordered_json;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 2;
    case ErrorCode::InternalAssertion: return 3;
    default: return 1;
  }
}

std::size_t resolve_qmax(std::optional<std::size_t> flag, bool deep) {
  std::size_t q = 1;
  if (const char* env = std::getenv("CTXCOHOM_QMAX"); env && *env) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw Error(ErrorCode::InvalidArgument, "CTXCOHOM_QMAX must be a non-negative integer");
    q = v;
  }
  if (flag) q = *flag;
  if (q > 1 && !deep) throw Error(ErrorCode::InvalidArgument, "q_max above 1 needs --deep (cochain spaces grow fast)");
  return q;
}

std::size_t resolve_context(const Scenario& sc, const std::string& name) {
  auto c = sc.find_context(name);
  if (!c) throw Error(ErrorCode::UnknownContext, "no context named " + name);
  return *c;
}

std::string vector_text(const IntVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) == 0) continue;
    out += (out.empty() ? "" : " ") + std::to_string(i) + ":" + v[i].get_str();
  }
  return out.empty() ? "0" : out;
}

int cmd_validate(const std::string& path, bool strict) {
  auto doc = load_document(path);
  auto model = to_model(doc, LoadOptions{strict});
  std::cout << "valid: " << doc.name << " (" << model.scenario().num_contexts() << " contexts, "
            << model.total_sections() << " possible sections)\n";
  return 0;
}

struct ClassifyArgs {
  std::string path;
  std::optional<std::size_t> qmax;
  bool deep = false;
  std::string context;
  std::optional<std::size_t> section;
  std::string format = "text";
  bool timing = false;
};

int cmd_classify(const ClassifyArgs& a) {
  auto doc = load_document(a.path);
  auto model = to_model(doc);
  const std::size_t q_max = resolve_qmax(a.qmax, a.deep);
  ReportOptions opts;
  if (!a.context.empty()) opts.context = resolve_context(model.scenario(), a.context);
  if (a.section) {
    if (!opts.context) throw Error(ErrorCode::InvalidArgument, "--section needs --context");
    if (*a.section >= model.support(*opts.context).size()) {
      throw Error(ErrorCode::SectionIndexOutOfRange, "context " + a.context + " has " +
                                                         std::to_string(model.support(*opts.context).size()) +
                                                         " possible sections");
    }
    opts.section = a.section;
  }
  auto t0 = std::chrono::steady_clock::now();
  Analyzer analyzer(model, q_max);
  auto result = classify(analyzer);
  if (a.timing) opts.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto report = make_report(doc, analyzer, result, opts);
  std::cout << (a.format == "structured" ? dump_report(report) : render_text(report));
  return 0;
}

struct CohomologyArgs {
  std::string path;
  std::string presheaf = "F";
  std::string context;
  std::size_t q = 0;
  bool representatives = false;
  std::string format = "text";
};

int cmd_cohomology(const CohomologyArgs& a) {
  auto doc = load_document(a.path);
  auto model = to_model(doc);
  auto f = free_presheaf(model);
  PresheafPtr target = f;
  if (a.presheaf != "F") {
    if (a.context.empty()) throw Error(ErrorCode::InvalidArgument, "--presheaf " + a.presheaf + " needs --context");
    const std::size_t c0 = resolve_context(model.scenario(), a.context);
    if (a.presheaf == "F_rel") {
      target = restrict_presheaf(*f, c0);
    } else {
      target = kernel_presheaf(*f, projection_morphism(*f, c0), c0).presheaf;
    }
  }
  Nerve nerve(model.scenario(), a.q + 1);
  auto g = cohomology(*target, nerve, a.q);
  if (a.format == "structured") {
    ojson j;
    j["presheaf"] = target->name();
    j["degree"] = g.degree;
    j["free_rank"] = g.free_rank;
    j["torsion"] = ojson::array();
    for (const auto& t : g.torsion) j["torsion"].push_back(t.get_str());
    if (a.representatives) {
      j["representatives"] = ojson::array();
      for (std::size_t k = 0; k < g.generators.cols(); ++k) {
        ojson r;
        r["order"] = g.orders[k].get_str();
        r["cocycle"] = vector_text(g.generators.column(k));
        j["representatives"].push_back(std::move(r));
      }
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "H^" << g.degree << "(M, " << target->name() << "): free rank " << g.free_rank << ", torsion [";
  for (std::size_t i = 0; i < g.torsion.size(); ++i) std::cout << (i ? ", " : "") << g.torsion[i].get_str();
  std::cout << "]\n";
  if (a.representatives) {
    for (std::size_t k = 0; k < g.generators.cols(); ++k) {
      std::cout << "  generator " << k << " (order " << (sgn(g.orders[k]) == 0 ? std::string("inf") : g.orders[k].get_str())
                << "): " << vector_text(g.generators.column(k)) << "\n";
    }
  }
  return 0;
}

int cmd_torsor(const std::string& path, const std::string& context, bool roundtrip) {
  auto doc = load_document(path);
  auto model = to_model(doc);
  Analyzer analyzer(model, 0);
  const Scenario& sc = model.scenario();
  std::vector<std::size_t> targets;
  if (context.empty()) {
    for (std::size_t c = 0; c < sc.num_contexts(); ++c) targets.push_back(c);
  } else {
    targets.push_back(resolve_context(sc, context));
  }
  bool all_ok = true;
  for (std::size_t c0 : targets) {
    const auto& ca = analyzer.context(c0);
    auto h1 = cohomology(ca.kernel().presheaf(), ca.kernel().nerve(), 1);
    std::cout << "context " << sc.context_name(c0) << ": H^1(M, F_ker) has " << h1.generators.cols()
              << " basis class(es)\n";
    CocycleTorsor zero(ca.kernel_ptr(), IntVector(ca.kernel().space(1).dimension()));
    std::cout << "  class 0 (zero): trivial " << (is_trivial(zero) ? "yes" : "no") << "\n";
    for (std::size_t k = 0; k < h1.generators.cols(); ++k) {
      IntVector z = h1.generators.column(k);
      CocycleTorsor t(ca.kernel_ptr(), z);
      bool transitive = true;
      for (auto u : t.opens()) transitive = transitive && t.simply_transitive_at(u);
      std::cout << "  class " << k + 1 << " (order "
                << (sgn(h1.orders[k]) == 0 ? std::string("inf") : h1.orders[k].get_str()) << "): trivial "
                << (is_trivial(t) ? "yes" : "no") << ", simply transitive " << (transitive ? "yes" : "no");
      all_ok = all_ok && transitive && !is_trivial(t);
      if (roundtrip) {
        IntVector back = torsor_class(t);
        const bool ok = ca.kernel().class_is_zero(1, back - z);
        std::cout << ", roundtrip " << (ok ? "pass" : "FAIL");
        all_ok = all_ok && ok;
      }
      std::cout << "\n";
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_render(const std::string& path, const std::string& out) {
  auto doc = load_document(path);
  auto model = to_model(doc);
  std::string svg = render_svg(model, doc.name);
  if (out.empty() || out == "-") {
    std::cout << svg;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out);
    f << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality analysis of possibilistic empirical models by Cech cohomology"};
  app.require_subcommand(1);

  std::string path;
  bool strict = false;
  auto* validate = app.add_subcommand("validate", "Check a model file against the model conditions");
  validate->add_option("path", path, "Model file or corpus/NAME")->required();
  validate->add_flag("--strict", strict, "Check no-signalling on every subset beneath the cover");

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Logical and cohomological classification");
  classify_cmd->add_option("path", ca.path, "Model file or corpus/NAME")->required();
  classify_cmd->add_option("--qmax", ca.qmax, "Highest obstruction level (default 1, or CTXCOHOM_QMAX)");
  classify_cmd->add_flag("--deep", ca.deep, "Allow q_max above 1");
  classify_cmd->add_option("--context", ca.context, "Restrict the report to one context, e.g. a1,b1");
  classify_cmd->add_option("--section", ca.section, "Restrict to one possible section (index within the context)");
  classify_cmd->add_option("--format", ca.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  classify_cmd->add_flag("--timing", ca.timing, "Include wall time in the report");

  CohomologyArgs co;
  auto* cohom = app.add_subcommand("cohomology", "Cech cohomology of F, F_rel or F_ker");
  cohom->add_option("path", co.path, "Model file or corpus/NAME")->required();
  cohom->add_option("--presheaf", co.presheaf, "F, F_rel or F_ker")->check(CLI::IsMember({"F", "F_rel", "F_ker"}));
  cohom->add_option("--context", co.context, "Context C0 for F_rel and F_ker");
  cohom->add_option("--q", co.q, "Degree")->required();
  cohom->add_flag("--representatives", co.representatives, "Print cocycle representatives");
  cohom->add_option("--format", co.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  std::string torsor_context;
  bool roundtrip = false;
  auto* torsor = app.add_subcommand("torsor", "Torsors for the basis classes of H^1(M, F_ker)");
  torsor->add_option("path", path, "Model file or corpus/NAME")->required();
  torsor->add_option("--context", torsor_context, "Context C0 (default: every context)");
  torsor->add_flag("--roundtrip", roundtrip, "Recover each class from its torsor");

  std::string out;
  auto* render = app.add_subcommand("render", "Bundle diagram as SVG (cyclic covers of two-element contexts)");
  render->add_option("path", path, "Model file or corpus/NAME")->required();
  render->add_option("--out", out, "Output file (default: stdout)");

  auto* corpus_cmd = app.add_subcommand("corpus", "Built-in fixtures");
  corpus_cmd->require_subcommand(1);
  auto* corpus_list = corpus_cmd->add_subcommand("list", "List fixture names");
  std::string show_name;
  auto* corpus_show = corpus_cmd->add_subcommand("show", "Print a fixture in canonical form");
  corpus_show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(path, strict);
    if (*classify_cmd) return cmd_classify(ca);
    if (*cohom) return cmd_cohomology(co);
    if (*torsor) return cmd_torsor(path, torsor_context, roundtrip);
    if (*render) return cmd_render(path, out);
    if (*corpus_list) {
      for (const auto& d : corpus()) {
        std::cout << d.name << (d.derived ? "  [derived support]" : "") << "  " << d.description << "\n";
      }
      return 0;
    }
    if (*corpus_show) {
      auto d = corpus_document(show_name);
      if (!d) throw Error(ErrorCode::InvalidArgument, "unknown corpus model " + show_name);
      std::cout << serialize_document(*d);
      return 0;
    }
  } catch (const SignallingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
