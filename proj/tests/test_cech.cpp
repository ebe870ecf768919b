#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ctxcohom/cech.hpp"
#include "ctxcohom/corpus.hpp"
#include "ctxcohom/obstruction.hpp"
#include "support.hpp"

using namespace ctxcohom;
using zlinalg::is_zero;

namespace {

// Degree-0 cochain with the given coefficients on possible sections, written
// (context, outcomes in member order, coefficient).
IntVector family(const EmpiricalModel& m, const CochainSpace& c0,
                 const std::vector<std::tuple<std::size_t, std::vector<int>, long>>& terms) {
  IntVector v(c0.dimension());
  for (const auto& [ctx, outcomes, coeff] : terms) {
    auto s = make_section(m.scenario(), ctx, outcomes);
    const auto& sup = m.support(ctx);
    auto it = std::find(sup.begin(), sup.end(), s);
    REQUIRE(it != sup.end());
    v[c0.offset(ctx) + static_cast<std::size_t>(it - sup.begin())] += coeff;
  }
  return v;
}

void check_dd_zero(const CechComplex& cx, std::size_t top) {
  for (std::size_t q = 0; q + 1 < top; ++q) {
    INFO(cx.presheaf().name() << " degree " << q);
    REQUIRE((cx.coboundary(q + 1) * cx.coboundary(q)).is_zero());
  }
}

}  // namespace

TEST_CASE("cochain space dimensions", "[cech]") {
  auto m = corpus_model("hardy");
  auto f = free_presheaf(m);
  Nerve n(m.scenario(), 2);
  for (std::size_t q = 0; q <= 2; ++q) {
    CochainSpace space(*f, n, q);
    std::size_t dim = 0;
    for (const auto& s : n.level(q)) dim += f->rank(s.open);
    CHECK(space.dimension() == dim);
    CHECK(space.num_simplices() == n.level(q).size());
  }
  CochainSpace c0(*f, n, 0);
  CHECK(c0.dimension() == 13);
}

TEST_CASE("degenerate simplices carry zero coboundary", "[cech]") {
  auto m = corpus_model("hardy");
  auto f = free_presheaf(m);
  Nerve n(m.scenario(), 1);
  auto d0 = coboundary(*f, n, 0);
  CochainSpace c1(*f, n, 1);
  for (std::size_t i = 0; i < n.level(1).size(); ++i) {
    const auto& s = n.level(1)[i];
    if (s.contexts[0] != s.contexts[1]) continue;
    for (std::size_t r = c1.offset(i); r < c1.offset(i) + c1.block_size(i); ++r)
      for (std::size_t c = 0; c < d0.cols(); ++c) REQUIRE(d0(r, c) == 0);
  }
}

TEST_CASE("single-context cover", "[cech]") {
  auto sc = Scenario::build({"a", "b"}, {{"a", "b"}}, {"0", "1"});
  auto m = load_model(sc, {{make_section(sc, 0, {0, 1}), make_section(sc, 0, {1, 1})}});
  auto f = free_presheaf(m);
  Nerve n(sc, 1);
  CHECK(coboundary(*f, n, 0).is_zero());
  CHECK(cocycles(*f, n, 0).cols() == CochainSpace(*f, n, 0).dimension());
}

TEST_CASE("coboundary squares to zero on every complex", "[cech][property]") {
  std::vector<EmpiricalModel> models = testing::random_bell_models();
  for (const auto& n : testing::corpus_names()) models.push_back(corpus_model(n));
  for (const auto& m : models) {
    Analyzer a(m, 0);  // nerve of depth 2 gives δ⁰, δ¹
    check_dd_zero(a.complex(), a.nerve()->max_degree());
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      check_dd_zero(a.context(c).relative(), a.nerve()->max_degree());
      check_dd_zero(a.context(c).kernel(), a.nerve()->max_degree());
    }
  }
}

TEST_CASE("coboundary squares to zero in the degrees used by level one", "[cech][property]") {
  for (const auto& n : testing::corpus_names()) {
    Analyzer a(corpus_model(n), 1);
    check_dd_zero(a.complex(), a.nerve()->max_degree());
    for (std::size_t c = 0; c < a.model().scenario().num_contexts(); ++c) {
      check_dd_zero(a.context(c).relative(), a.nerve()->max_degree());
      check_dd_zero(a.context(c).kernel(), a.nerve()->max_degree());
    }
  }
}

TEST_CASE("short exact sequence of cochain groups", "[cech][property]") {
  std::vector<EmpiricalModel> models = testing::random_bell_models(20);
  for (const auto& n : testing::corpus_names()) models.push_back(corpus_model(n));
  for (const auto& m : models) {
    Analyzer a(m, 1);
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      const auto& ca = a.context(c);
      for (std::size_t q = 0; q <= 2; ++q) {
        auto p = ca.projection_matrix(q);
        auto i = ca.inclusion_matrix(q);
        REQUIRE(p == cochain_map(ca.projection(), ca.full().presheaf(), ca.relative().presheaf(), *a.nerve(), q));
        if (i.cols() > 0) REQUIRE((p * i).is_zero());
        REQUIRE(zlinalg::same_lattice(zlinalg::kernel_basis(p), i));
        REQUIRE(zlinalg::is_surjective(p));
        // chain maps commute with δ
        REQUIRE(ca.relative().coboundary(q) * p == ca.projection_matrix(q + 1) * ca.full().coboundary(q));
        REQUIRE(ca.full().coboundary(q) * i == ca.inclusion_matrix(q + 1) * ca.kernel().coboundary(q));
      }
    }
  }
}

TEST_CASE("apply_coboundary matches the matrix", "[cech]") {
  auto m = corpus_model("sc-not-clc-224");
  auto f = free_presheaf(m);
  Nerve n(m.scenario(), 2);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(-3, 3);
  for (std::size_t q = 0; q < 2; ++q) {
    auto mat = coboundary(*f, n, q);
    IntVector w(mat.cols());
    for (auto& x : w) x = d(rng);
    CHECK(apply_coboundary(*f, n, q, w) == mat * w);
  }
}

TEST_CASE("the Hardy family is a 0-cocycle", "[cech]") {
  auto m = corpus_model("hardy");
  auto f = free_presheaf(m);
  Nerve n(m.scenario(), 1);
  CochainSpace c0(*f, n, 0);
  // contexts: 0 (a1,b1), 1 (a1,b2), 2 (a2,b1), 3 (a2,b2)
  auto v = family(m, c0, {{0, {0, 0}, 1}, {2, {1, 0}, 1}, {3, {1, 0}, 1}, {1, {1, 0}, 1}, {1, {1, 1}, -1}, {1, {0, 1}, 1}});
  CHECK(is_zero(coboundary(*f, n, 0) * v));
  CHECK(zlinalg::in_image(v, cocycles(*f, n, 0)));
}

TEST_CASE("indicator families of global sections are 0-cocycles", "[cech][property]") {
  std::vector<EmpiricalModel> models = testing::random_bell_models(20);
  models.push_back(corpus_model("hardy"));
  for (const auto& m : models) {
    const auto& sc = m.scenario();
    auto f = free_presheaf(m);
    Nerve n(sc, 1);
    CochainSpace c0(*f, n, 0);
    auto z0 = cocycles(*f, n, 0);
    for (const auto& g : global_sections(m)) {
      IntVector v(c0.dimension());
      for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
        auto r = g.restrict_to(sc.context(c).set);
        const auto& sup = m.support(c);
        v[c0.offset(c) + static_cast<std::size_t>(std::find(sup.begin(), sup.end(), r) - sup.begin())] = 1;
      }
      REQUIRE(zlinalg::in_image(v, z0));
    }
  }
}

TEST_CASE("cohomology groups", "[cech]") {
  auto hardy = corpus_model("hardy");
  Analyzer h(hardy, 0);
  auto rel0 = cohomology(h.context(0).relative().presheaf(), *h.nerve(), 0);
  CHECK(rel0.free_rank == 4);
  CHECK(rel0.torsion.empty());

  auto pr = corpus_model("prbox");
  Analyzer p(pr, 0);
  auto k1 = cohomology(p.context(0).kernel().presheaf(), *p.nerve(), 1);
  CHECK_FALSE(k1.is_zero());
  auto b1 = zlinalg::kernel_basis(p.context(0).kernel().coboundary(1));
  CHECK(k1.cocycle_basis.cols() == b1.cols());

  // one section per context, consistent: families are multiples of one
  auto sc = testing::bell_222();
  std::vector<std::vector<Section>> t;
  for (std::size_t c = 0; c < 4; ++c) t.push_back({make_section(sc, c, {0, 1})});
  auto det = load_model(sc, t);
  Analyzer d(det, 0);
  CHECK(cohomology(*d.presheaf(), *d.nerve(), 0).free_rank == 1);
}

TEST_CASE("class_is_zero", "[cech]") {
  auto pr = corpus_model("prbox");
  Analyzer a(pr, 0);
  const auto& k = a.context(0).kernel();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(-2, 2);
  IntVector w(k.space(0).dimension());
  for (auto& x : w) x = d(rng);
  CHECK(k.class_is_zero(1, k.apply(0, w)));
  CHECK(k.class_is_zero(1, IntVector(k.space(1).dimension())));

  auto obs = a.obstruction(0, 0, 0);
  REQUIRE_FALSE(obs.vanishes);
  CHECK(k.is_cocycle(1, obs.witness));
  CHECK_FALSE(k.class_is_zero(1, obs.witness));

  IntVector bad(k.space(1).dimension());
  bool thrown = false;
  for (std::size_t i = 0; i < bad.size() && !thrown; ++i) {
    bad.assign(bad.size(), 0);
    bad[i] = 1;
    if (k.is_cocycle(1, bad)) continue;
    try {
      k.class_is_zero(1, bad);
    } catch (const Error& e) {
      thrown = e.code() == ErrorCode::NotACocycle;
    }
  }
  CHECK(thrown);
}

TEST_CASE("psi zero is an isomorphism onto the relative 0-cocycles", "[cech][property]") {
  std::vector<EmpiricalModel> models = testing::random_bell_models();
  for (const auto& n : testing::corpus_names()) models.push_back(corpus_model(n));
  for (const auto& m : models) {
    Analyzer a(m, 0);
    for (std::size_t c = 0; c < m.scenario().num_contexts(); ++c) {
      const auto& ca = a.context(c);
      auto psi = ca.psi_matrix(0);
      auto z0 = cocycles(ca.relative().presheaf(), *a.nerve(), 0);
      REQUIRE(psi.cols() == ca.section_rank());
      REQUIRE(zlinalg::rank(psi) == psi.cols());
      REQUIRE(z0.cols() == psi.cols());
      REQUIRE(zlinalg::same_lattice(psi, z0));
    }
  }
}
