#pragma once

// Shared fixtures and brute-force oracles for the test suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ctxcohom/corpus.hpp"
#include "ctxcohom/empirical.hpp"
#include "ctxcohom/scenario.hpp"
#include "ctxcohom/zlinalg.hpp"

namespace testing {

using ctxcohom::zlinalg::Integer;
using ctxcohom::zlinalg::IntMatrix;
using ctxcohom::zlinalg::IntVector;

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"hardy", "prbox", "sc-not-clc-224", "ks-7"};
  return names;
}

inline ctxcohom::Scenario bell_222() {
  return ctxcohom::Scenario::build({"a1", "b1", "a2", "b2"}, {{"a1", "b1"}, {"a1", "b2"}, {"a2", "b1"}, {"a2", "b2"}},
                                   {"0", "1"});
}

/// The fifty seeded random models on the (2,2,2) cover used by the property suites.
inline std::vector<ctxcohom::EmpiricalModel> random_bell_models(std::size_t count = 50) {
  std::vector<ctxcohom::EmpiricalModel> out;
  const auto sc = bell_222();
  for (std::size_t i = 0; i < count; ++i) out.push_back(ctxcohom::random_model(sc, 1000 + i));
  return out;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  IntMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = dist(rng);
  return a;
}

inline IntVector vec(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

/// Calls f(x) for every x in [-bound, bound]^n until it returns true.
template <class F>
bool search_box(std::size_t n, long bound, F&& f) {
  std::vector<long> x(n, -bound);
  while (true) {
    if (f(x)) return true;
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) return false;
    ++x[i];
  }
}

inline std::vector<long> apply_small(const IntMatrix& a, const std::vector<long>& x) {
  std::vector<long> y(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) y[r] += a(r, c).get_si() * x[c];
  return y;
}

/// Determinant by cofactor expansion; only for tiny matrices.
inline Integer det_small(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix m(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) m(r - 1, cc++) = a(r, c);
    Integer t = a(0, j) * det_small(m);
    d += (j % 2 == 0) ? t : Integer(-t);
  }
  return d;
}

inline void choose(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    choose(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// gcd of all k x k minors (the k-th determinantal divisor).
inline Integer determinantal_divisor(const IntMatrix& a, std::size_t k) {
  std::vector<std::vector<std::size_t>> rows, cols;
  std::vector<std::size_t> cur;
  choose(a.rows(), k, 0, cur, rows);
  choose(a.cols(), k, 0, cur, cols);
  Integer g = 0;
  for (const auto& rs : rows) {
    for (const auto& cs : cols) {
      IntMatrix m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = a(rs[i], cs[j]);
      Integer d = det_small(m);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    }
  }
  return g;
}

}  // namespace testing
