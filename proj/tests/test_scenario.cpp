#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "ctxcohom/errors.hpp"
#include "ctxcohom/scenario.hpp"
#include "support.hpp"

using namespace ctxcohom;

namespace {

auto has_code(ErrorCode code) {
  return Catch::Matchers::Predicate<Error>([code](const Error& e) { return e.code() == code; },
                                           std::string("error code ") + std::string(to_string(code)));
}

// Every tuple of |M|^{q+1} with nonempty intersection, in lexicographic order.
std::vector<std::vector<std::size_t>> brute_nerve(const Scenario& sc, std::size_t q) {
  const std::size_t n = sc.num_contexts();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(q + 1, 0);
  while (true) {
    MeasurementSet u = sc.all();
    for (auto c : t) u = u & sc.context(c).set;
    if (!u.empty()) out.push_back(t);
    std::size_t i = q + 1;
    while (i > 0 && t[i - 1] == n - 1) t[--i] = 0;
    if (i == 0) return out;
    ++t[i - 1];
  }
}

Scenario ks7() { return corpus_model("ks-7").scenario(); }

}  // namespace

TEST_CASE("scenario validation", "[scenario]") {
  CHECK_THROWS_MATCHES(Scenario::build({"a", "b"}, {{"a"}}, {"0"}), Error, has_code(ErrorCode::NotACover));
  CHECK_THROWS_MATCHES(Scenario::build({"a", "b"}, {{"a"}, {"a", "b"}}, {"0"}), Error,
                       has_code(ErrorCode::NotAnAntichain));
  CHECK_THROWS_MATCHES(Scenario::build({"a", "b"}, {{"a"}, {"b"}}, {"0"}), Error,
                       has_code(ErrorCode::DisconnectedCover));
  CHECK_THROWS_MATCHES(Scenario::build({"a", "a"}, {{"a"}}, {"0"}), Error, has_code(ErrorCode::DuplicateLabel));
  CHECK_THROWS_MATCHES(Scenario::build({"a", "b"}, {{"a", "c"}}, {"0"}), Error, has_code(ErrorCode::UnknownLabel));
  CHECK_NOTHROW(testing::bell_222());
}

TEST_CASE("context lookup", "[scenario]") {
  auto sc = testing::bell_222();
  CHECK(sc.find_context("a1,b1") == 0u);
  CHECK(sc.find_context("(b2,a1)") == 1u);
  CHECK(sc.find_context("b1, a2") == 2u);
  CHECK_FALSE(sc.find_context("a1,a2").has_value());
  CHECK(sc.context_name(2) == "(a2,b1)");
}

TEST_CASE("open_of", "[scenario]") {
  auto sc = testing::bell_222();
  CHECK(open_of(sc, {0, 1}) == MeasurementSet::singleton(0));
  CHECK(open_of(sc, {3, 3}) == sc.context(3).set);
  CHECK(open_of(sc, {0, 3}).empty());
  auto k = ks7();
  CHECK(open_of(k, {0, 1}) == MeasurementSet::singleton(*k.measurement_index("B")));
}

TEST_CASE("nerve sizes agree with brute force", "[scenario][oracle]") {
  auto sc = testing::bell_222();
  CHECK(nerve(sc, 0).size() == 4);
  CHECK(nerve(sc, 1).size() == 12);
  for (std::size_t q = 0; q <= 4; ++q) {
    auto lib = nerve(sc, q);
    auto brute = brute_nerve(sc, q);
    REQUIRE(lib.size() == brute.size());
    for (std::size_t i = 0; i < lib.size(); ++i) REQUIRE(lib[i].contexts == brute[i]);
  }
  auto k = ks7();
  for (std::size_t q = 0; q <= 3; ++q) CHECK(nerve(k, q).size() == brute_nerve(k, q).size());
}

TEST_CASE("nerve listing is deterministic", "[scenario]") {
  auto sc = testing::bell_222();
  CHECK(nerve(sc, 3) == nerve(sc, 3));
  Nerve n(sc, 3);
  CHECK(n.level(3) == nerve(sc, 3));
}

TEST_CASE("faces", "[scenario]") {
  auto sc = testing::bell_222();
  Simplex s{{0, 1}, open_of(sc, {0, 1})};
  CHECK(face(sc, s, 0).contexts == std::vector<std::size_t>{1});
  Simplex ccc{{2, 2, 2}, sc.context(2).set};
  CHECK(face(sc, ccc, 1).contexts == std::vector<std::size_t>{2, 2});
  CHECK_THROWS_MATCHES(face(sc, s, 2), Error, has_code(ErrorCode::IndexOutOfRange));
}

TEST_CASE("faces of simplices are simplices and opens grow", "[scenario][property]") {
  for (const auto& sc : {testing::bell_222(), ks7()}) {
    Nerve n(sc, 3);
    for (std::size_t q = 1; q <= 3; ++q) {
      for (std::size_t i = 0; i < n.level(q).size(); ++i) {
        const auto& s = n.level(q)[i];
        for (std::size_t j = 0; j <= q; ++j) {
          auto f = face(sc, s, j);
          REQUIRE(n.index_of(f.contexts).has_value());
          REQUIRE(n.level(q - 1)[n.face_index(q, i, j)] == f);
          REQUIRE(s.open.subset_of(f.open));
        }
      }
    }
  }
}

TEST_CASE("simplicial identity", "[scenario][property]") {
  auto sc = testing::bell_222();
  for (const auto& s : nerve(sc, 3)) {
    for (std::size_t j = 1; j <= 3; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        auto lhs = face(sc, face(sc, s, j), i);
        auto rhs = face(sc, face(sc, s, i), j - 1);
        REQUIRE(lhs.contexts == rhs.contexts);
      }
    }
  }
}

TEST_CASE("relevant opens", "[scenario]") {
  auto sc = testing::bell_222();
  auto opens = sc.relevant_opens();
  // empty, four singletons, four contexts, X
  CHECK(opens.size() == 10);
  CHECK(opens.front().empty());
  CHECK(opens.back() == sc.all());
  Nerve n(sc, 3);
  for (std::size_t q = 0; q <= 3; ++q)
    for (const auto& s : n.level(q)) CHECK(std::find(opens.begin(), opens.end(), s.open) != opens.end());
}
