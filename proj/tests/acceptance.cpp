// Acceptance run: one PASS/FAIL line per criterion. `acceptance N` runs only
// criterion N. Exit status is nonzero when any selected criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "ctxcohom/corpus.hpp"
#include "ctxcohom/obstruction.hpp"
#include "ctxcohom/torsor.hpp"
#include "support.hpp"

using namespace ctxcohom;
using zlinalg::is_zero;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::size_t index_of(const EmpiricalModel& m, std::size_t c, const std::vector<int>& outcomes) {
  const auto& sup = m.support(c);
  auto s = make_section(m.scenario(), c, outcomes);
  for (std::size_t i = 0; i < sup.size(); ++i)
    if (sup[i] == s) return i;
  return sup.size();
}

std::vector<EmpiricalModel> property_models() {
  auto models = testing::random_bell_models(50);
  for (const auto& n : testing::corpus_names()) models.push_back(corpus_model(n));
  return models;
}

Outcome criterion_1() {
  Outcome o;
  auto m = corpus_model("hardy");
  auto r = classify(m, 1);
  o.require(r.is_lc(), "not LC");
  const auto s00 = index_of(m, 0, {0, 0});
  bool listed = false;
  for (const auto& ref : r.logical.lc_sections) listed = listed || (ref.context == 0 && ref.index == s00);
  o.require(listed, "(a1,b1)->(0,0) missing from lc_sections");
  o.require(!r.is_sc(), "SC");
  bool has_1100 = false;
  for (const auto& g : r.logical.global_sections) has_1100 = has_1100 || g.values == std::vector<int>{1, 1, 0, 0};
  o.require(has_1100, "(1,1,0,0) is not a global section");
  o.require(!r.is_clc(), "CLC");
  std::size_t level0 = 0;
  for (const auto& e : r.table) {
    if (e.level != 0) continue;
    ++level0;
    o.require(e.vanishes, "an obstruction at level 0 does not vanish");
  }
  if (o.pass) o.detail = "LC, not SC, not CLC; all " + std::to_string(level0) + " level-0 obstructions vanish";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  auto m = corpus_model("prbox");
  auto r = classify(m, 1);
  o.require(r.is_sc(), "not SC");
  o.require(r.is_csc(), "not CSC");
  o.require(!r.is_clc(1), "CLC^1");
  std::ostringstream ranks;
  bool injective = true;
  for (const auto& c : r.contexts) {
    ranks << (c.context ? "," : "") << c.gamma_kernel.cols();
    injective = injective && c.gamma_injective;
  }
  o.require(injective, "gamma_kernel ranks " + ranks.str() +
                           ": [00]+[11] lies in every kernel since ([00]+[11],[00]+[11],[00]+[11],[01]+[10]) is a "
                           "compatible F-family; SC, CSC and not CLC^1 hold");
  if (o.pass) o.detail = "SC, CSC, every gamma_C injective, not CLC^1";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  auto r = classify(corpus_model("sc-not-clc-224"), 1);
  o.require(r.is_sc(), "not SC");
  o.require(!r.is_clc(), "CLC");
  if (o.pass) o.detail = "SC and not CLC";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  auto r = classify(corpus_model("ks-7"), 1);
  o.require(r.is_sc(), "not SC");
  o.require(!r.is_csc(), "CSC");
  if (o.pass) o.detail = "SC and not CSC";
  return o;
}

Outcome criterion_5() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& n : testing::corpus_names()) {
    auto m = corpus_model(n);
    Analyzer a(m, 1);
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      for (std::size_t s = 0; s < m.support(c).size(); ++s) {
        auto s0 = a.section_vector(c, s);
        for (std::size_t q = 0; q <= 1; ++q) {
          ++checked;
          const bool snake = a.context(c).gamma(s0, q).vanishes;
          const bool family = a.context(c).vanishes_via_family(s0, q).has_value();
          o.require(snake == family, n + ": verdicts differ at " + m.scenario().context_name(c));
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + "/" + std::to_string(checked) + " verdicts agree";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> d(-3, 3);
  const auto models = property_models();
  for (const auto& m : models) {
    Analyzer a(m, 1);
    const std::size_t top = a.nerve()->max_degree();
    auto dd = [&](const CechComplex& cx) {
      for (std::size_t q = 0; q + 1 < top; ++q)
        o.require((cx.coboundary(q + 1) * cx.coboundary(q)).is_zero(), "delta squared nonzero on " + cx.presheaf().name());
    };
    dd(a.complex());
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      const auto& ca = a.context(c);
      dd(ca.relative());
      dd(ca.kernel());
      for (std::size_t q = 0; q <= 2; ++q) {
        auto p = ca.projection_matrix(q);
        auto i = ca.inclusion_matrix(q);
        o.require(i.cols() == 0 || (p * i).is_zero(), "p after inclusion is nonzero");
        o.require(zlinalg::same_lattice(zlinalg::kernel_basis(p), i), "ker p differs from the inclusion image");
        o.require(zlinalg::is_surjective(p), "p not onto");
      }
      auto psi0 = ca.psi_matrix(0);
      auto z0 = cocycles(ca.relative().presheaf(), *a.nerve(), 0);
      o.require(zlinalg::rank(psi0) == psi0.cols() && zlinalg::same_lattice(psi0, z0), "psi^0 not an isomorphism");
      std::vector<IntVector> samples;
      for (std::size_t s = 0; s < ca.section_rank(); ++s) samples.push_back(a.section_vector(c, s));
      for (int k = 0; k < 3; ++k) {
        IntVector r(ca.section_rank());
        for (auto& x : r) x = d(rng);
        if (!is_zero(r)) samples.push_back(r);
      }
      for (const auto& s0 : samples)
        o.require(!ca.relative().is_cocycle(1, ca.psi(s0, 1)), "psi^1 of a nonzero section is a cocycle");
      for (std::size_t s = 0; s < m.support(c).size(); ++s) {
        auto r0 = a.obstruction(c, s, 0);
        auto r1 = a.obstruction(c, s, 1);
        o.require(r1.vanishes, "gamma^1 does not vanish");
        o.require(!r0.vanishes || r1.vanishes, "hierarchy violated");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(models.size()) + " models (50 random + corpus)";
  return o;
}

Outcome criterion_7() {
  Outcome o;
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<long> d(-2, 2);
  std::size_t classes = 0;
  for (const auto* name : {"prbox", "hardy"}) {
    auto m = corpus_model(name);
    Analyzer a(m, 0);
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      const auto& cx = a.context(c).kernel();
      auto base = a.context(c).kernel_ptr();
      auto h1 = cohomology(cx.presheaf(), cx.nerve(), 1);
      IntVector zero(cx.space(1).dimension());
      auto trivial = torsor_from_cocycle(base, zero);
      o.require(is_trivial(trivial), "zero class gives a non-trivial torsor");
      std::vector<IntVector> samples{zero};
      IntVector w(cx.space(0).dimension());
      for (auto& x : w) x = d(rng);
      samples.push_back(cx.apply(0, w));
      for (std::size_t k = 0; k < h1.generators.cols(); ++k) {
        auto z = h1.generators.column(k);
        ++classes;
        auto t = torsor_from_cocycle(base, z);
        o.require(cx.class_is_zero(1, torsor_class(t) - z), std::string(name) + ": round trip fails");
        o.require(isomorphic(torsor_add(t, trivial), t), "identity fails");
        o.require(is_trivial(torsor_add(t, torsor_negate(t))), "inverse fails");
        samples.push_back(z);
        samples.push_back(z + cx.apply(0, w));
      }
      for (const auto& z : samples) {
        auto t = torsor_from_cocycle(base, z);
        o.require(is_trivial(t) == cx.class_is_zero(1, z), "triviality differs from class vanishing");
        for (auto u : t.opens()) o.require(t.simply_transitive_at(u), "action not simply transitive");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(classes) + " basis classes on prbox and hardy";
  return o;
}

Outcome criterion_8() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim6(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_matrix(rng, dim6(rng), dim6(rng), 10);
    auto s = zlinalg::smith(a);
    o.require(s.u * a * s.v == s.d && s.u_inverse * s.d * s.v_inverse == a, "SNF round trip fails");
  }
  std::mt19937_64 rng2(3);
  std::uniform_int_distribution<std::size_t> dim4(1, 4);
  std::uniform_int_distribution<long> small(-3, 3);
  std::size_t agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = dim4(rng2), n = dim4(rng2);
    auto a = testing::random_matrix(rng2, m, n, 3);
    std::vector<long> bl(m);
    if (trial % 2 == 0) {
      std::vector<long> x0(n);
      for (auto& x : x0) x = small(rng2);
      bl = testing::apply_small(a, x0);
    } else {
      for (auto& x : bl) x = small(rng2);
    }
    IntVector b(bl.begin(), bl.end());
    const bool brute =
        testing::search_box(n, 10, [&](const std::vector<long>& x) { return testing::apply_small(a, x) == bl; });
    auto x = zlinalg::solve(a, b);
    const bool ok = x.has_value() == brute && zlinalg::in_image(b, a) == brute && (!x || a * *x == b);
    if (ok) ++agree;
    o.require(ok, "solve disagrees with bounded search");
  }
  if (o.pass) o.detail = "200 SNF round trips, " + std::to_string(agree) + "/200 solve agreements";
  return o;
}

std::string run_classify(const std::string& path) {
  const std::string cmd = std::string("\"") + CTXCOHOM_CLI + "\" classify --format structured \"" + path + "\"";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int rc = pclose(p);
  return rc == 0 ? out : std::string();
}

Outcome criterion_9() {
  Outcome o;
  for (const auto& n : testing::corpus_names()) {
    const std::string path = std::string(CTXCOHOM_SOURCE_DIR) + "/corpus/" + n + ".json";
    auto first = run_classify(path);
    auto second = run_classify(path);
    o.require(!first.empty(), n + ": classify failed");
    o.require(first == second, n + ": reports differ");
  }
  if (o.pass) o.detail = "byte-identical structured reports for all corpus files";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hardy classification", criterion_1},
      {"PR box classification", criterion_2},
      {"(2,2,4) model: SC but not CLC", criterion_3},
      {"KS 7-measurement model: SC but not CSC", criterion_4},
      {"snake and linear-system verdicts agree", criterion_5},
      {"property suite", criterion_6},
      {"torsor suite", criterion_7},
      {"zlinalg self-checks", criterion_8},
      {"determinism of structured reports", criterion_9},
  };
  std::size_t only = 0;
  if (argc > 1) only = std::stoul(argv[1]);
  bool all = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "elapsed " << secs << " s\n";
  return all ? 0 : 1;
}
