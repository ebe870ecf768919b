#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ctxcohom/errors.hpp"
#include "ctxcohom/zlinalg.hpp"
#include "support.hpp"

using namespace ctxcohom::zlinalg;
using testing::vec;

namespace {

bool is_diagonal_chain(const SmithDecomposition& s) {
  for (std::size_t r = 0; r < s.d.rows(); ++r)
    for (std::size_t c = 0; c < s.d.cols(); ++c)
      if (r != c && s.d(r, c) != 0) return false;
  auto f = s.invariant_factors();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= 0) return false;
    if (i + 1 < f.size() && f[i + 1] % f[i] != 0) return false;
  }
  for (std::size_t i = s.rank; i < std::min(s.d.rows(), s.d.cols()); ++i)
    if (s.d(i, i) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("smith of small fixed matrices", "[zlinalg]") {
  auto s = smith(IntMatrix{{2, 4}, {6, 8}});
  CHECK(s.invariant_factors() == vec({2, 4}));
  CHECK(s.u * IntMatrix{{2, 4}, {6, 8}} * s.v == s.d);

  auto id = smith(IntMatrix::identity(3));
  CHECK(id.d == IntMatrix::identity(3));

  auto z = smith(IntMatrix(3, 2));
  CHECK(z.rank == 0);
  CHECK(z.d.is_zero());

  CHECK(smith(IntMatrix{{2, 0}, {0, 3}}).invariant_factors() == vec({1, 6}));
}

TEST_CASE("smith round trip on random matrices", "[zlinalg][property]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_matrix(rng, dim(rng), dim(rng), 10);
    auto s = smith(a);
    REQUIRE(s.u * a * s.v == s.d);
    REQUIRE(s.u_inverse * s.d * s.v_inverse == a);
    REQUIRE(s.u * s.u_inverse == IntMatrix::identity(a.rows()));
    REQUIRE(s.v * s.v_inverse == IntMatrix::identity(a.cols()));
    REQUIRE(is_diagonal_chain(s));
  }
}

TEST_CASE("invariant factors match determinantal divisors", "[zlinalg][oracle]") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = testing::random_matrix(rng, dim(rng), dim(rng), 6);
    auto f = smith(a).invariant_factors();
    Integer prod = 1;
    for (std::size_t k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
      Integer dk = testing::determinantal_divisor(a, k);
      if (k <= f.size()) {
        prod *= f[k - 1];
        REQUIRE(dk == prod);
      } else {
        REQUIRE(dk == 0);
      }
    }
  }
}

TEST_CASE("solve small cases", "[zlinalg]") {
  CHECK_FALSE(solve(IntMatrix{{2}}, vec({3})).has_value());
  REQUIRE(solve(IntMatrix{{2}}, vec({4})).has_value());
  CHECK(*solve(IntMatrix{{2}}, vec({4})) == vec({2}));
  CHECK(in_image(vec({0, 0}), IntMatrix{{1, 2}, {3, 4}}));
  CHECK_FALSE(in_image(vec({1}), IntMatrix{{2}}));
  IntMatrix b{{1, 2, 0}, {3, 4, 5}};
  for (std::size_t c = 0; c < b.cols(); ++c) CHECK(in_image(b.column(c), b));
}

TEST_CASE("solve and in_image agree with bounded search", "[zlinalg][oracle]") {
  // Right-hand sides are either images of small vectors or small random
  // vectors. For this seed the smallest integer solution of every solvable
  // system has max-norm at most 8, so the box below decides each case.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<long> small(-3, 3);
  constexpr long box = 10;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng);
    auto a = testing::random_matrix(rng, m, n, 3);
    IntVector b(m);
    if (trial % 2 == 0) {
      std::vector<long> x0(n);
      for (auto& x : x0) x = small(rng);
      auto y = testing::apply_small(a, x0);
      for (std::size_t i = 0; i < m; ++i) b[i] = y[i];
    } else {
      for (auto& x : b) x = small(rng);
    }
    std::vector<long> bl(m);
    for (std::size_t i = 0; i < m; ++i) bl[i] = b[i].get_si();
    const bool brute = testing::search_box(n, box, [&](const std::vector<long>& x) {
      return testing::apply_small(a, x) == bl;
    });
    auto x = solve(a, b);
    INFO("trial " << trial << "\n" << a.to_string());
    REQUIRE(x.has_value() == brute);
    REQUIRE(in_image(b, a) == brute);
    if (x) REQUIRE(a * *x == b);
  }
}

TEST_CASE("solve is deterministic", "[zlinalg]") {
  IntMatrix a{{1, 1, 1}, {0, 2, 4}};
  auto b = vec({3, 6});
  CHECK(solve(a, b) == solve(a, b));
  ColumnEchelon e(a);
  CHECK(e.solve(b) == solve(a, b));
}

TEST_CASE("kernel basis", "[zlinalg]") {
  auto k = kernel_basis(IntMatrix{{1, 1}});
  REQUIRE(k.cols() == 1);
  CHECK((k.column(0) == vec({1, -1}) || k.column(0) == vec({-1, 1})));
  CHECK(kernel_basis(IntMatrix::identity(3)).cols() == 0);
}

TEST_CASE("kernel basis is complete", "[zlinalg][oracle]") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 80; ++trial) {
    auto a = testing::random_matrix(rng, dim(rng), dim(rng) + 1, 3);
    auto k = kernel_basis(a);
    REQUIRE(k.cols() + rank(a) == a.cols());
    if (k.cols() > 0) REQUIRE((a * k).is_zero());
    std::vector<long> zero(a.rows(), 0);
    testing::search_box(a.cols(), 3, [&](const std::vector<long>& x) {
      if (testing::apply_small(a, x) == zero) {
        IntVector v(x.begin(), x.end());
        REQUIRE(in_image(v, k));
      }
      return false;
    });
  }
}

TEST_CASE("image basis spans the column lattice", "[zlinalg]") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = testing::random_matrix(rng, 3, 5, 4);
    auto im = image_basis(a);
    CHECK(im.cols() == rank(a));
    CHECK(same_lattice(a, im));
  }
}

TEST_CASE("quotient invariants", "[zlinalg]") {
  auto z2 = IntMatrix::identity(2);
  CHECK(quotient_invariants(z2, IntMatrix(2, 0)) == QuotientInvariants{2, {}});
  CHECK(quotient_invariants(IntMatrix{{1}}, IntMatrix{{2}}) == QuotientInvariants{0, {2}});
  CHECK(quotient_invariants(z2, IntMatrix{{2, 0}, {0, 3}}) == QuotientInvariants{0, {6}});
  CHECK_THROWS_MATCHES(quotient_invariants(IntMatrix{{2}}, IntMatrix{{1}}), ctxcohom::Error,
                       Catch::Matchers::Predicate<ctxcohom::Error>(
                           [](const ctxcohom::Error& e) { return e.code() == ctxcohom::ErrorCode::NotASublattice; }));
}

TEST_CASE("quotient presentation generators have the stated orders", "[zlinalg]") {
  IntMatrix z{{1, 0}, {0, 1}, {1, 1}};
  IntMatrix b{{2, 0}, {0, 0}, {2, 0}};
  auto p = quotient_presentation(z, b);
  CHECK(p.invariants == QuotientInvariants{1, {2}});
  REQUIRE(p.generators.cols() == 2);
  for (std::size_t k = 0; k < p.generators.cols(); ++k) {
    auto g = p.generators.column(k);
    CHECK(in_image(g, z));
    CHECK_FALSE(in_image(g, b));
    if (p.orders[k] != 0) CHECK(in_image(scaled(g, p.orders[k]), b));
  }
}

TEST_CASE("rational versus integral solvability", "[zlinalg]") {
  CHECK(rationally_solvable(IntMatrix{{2}}, vec({1})));
  CHECK_FALSE(solve(IntMatrix{{2}}, vec({1})).has_value());
  CHECK_FALSE(rationally_solvable(IntMatrix{{1}, {1}}, vec({1, 0})));
  CHECK(is_surjective(IntMatrix{{1, 1, 0}, {0, 1, 1}}));
  CHECK_FALSE(is_surjective(IntMatrix{{2, 0}, {0, 1}}));
}

TEST_CASE("parallel and serial echelon forms coincide", "[zlinalg][parallel]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = testing::random_matrix(rng, 12, 9, 5);
    ColumnEchelon p(a, true);
    auto s = serial::column_echelon(a);
    CHECK(p.reduced() == s.reduced());
    CHECK(p.transform() == s.transform());
    CHECK(a * p.transform() == p.reduced());
  }
}
