#pragma once

// Exact integer linear algebra over Z: dense matrices of GMP integers, column
// echelon forms, Smith normal form, lattice kernels and quotient invariants.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace ctxcohom::zlinalg {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns);
  static IntMatrix column_vector(const IntVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;
  std::vector<IntVector> columns() const;

  bool is_zero() const;
  IntMatrix transpose() const;

  /// Copies `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& block);
  /// Adds sign * block at (r0, c0).
  void add_block(std::size_t r0, std::size_t c0, const IntMatrix& block, int sign = 1);
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;

  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

  bool operator==(const IntMatrix& o) const = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& x);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntVector operator+(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a);
IntVector scaled(const IntVector& a, const Integer& k);
bool is_zero(const IntVector& v);
IntVector zeros(std::size_t n);
IntVector unit_vector(std::size_t n, std::size_t i);

/// Column echelon form A * V = H with V unimodular. The first `rank` columns
/// of H are nonzero and their pivot rows strictly increase; the remaining
/// columns are zero, so the trailing columns of V are a lattice basis of
/// ker A. Built once, reused for many right-hand sides.
class ColumnEchelon {
 public:
  explicit ColumnEchelon(const IntMatrix& a, bool parallel = true);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }

  /// Integer solution of A x = b with all free coordinates zero, or nothing.
  std::optional<IntVector> solve(const IntVector& b) const;
  bool in_image(const IntVector& b) const { return solve(b).has_value(); }

  /// Columns form a basis of the integer kernel lattice.
  IntMatrix kernel_basis() const;
  /// Columns form a basis of the lattice spanned by the columns of A.
  IntMatrix image_basis() const;
  /// H = A V.
  IntMatrix reduced() const;
  /// V.
  IntMatrix transform() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  // Column j of H and of V stored as rows (transposed layout).
  std::vector<IntVector> h_;
  std::vector<IntVector> v_;
  std::vector<std::size_t> pivots_;
};

namespace serial {
/// Same elimination without the OpenMP row loop; reference for tests.
ColumnEchelon column_echelon(const IntMatrix& a);
}  // namespace serial

/// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ... .
struct SmithDecomposition {
  IntMatrix u;
  IntMatrix u_inverse;
  IntMatrix v;
  IntMatrix v_inverse;
  IntMatrix d;
  std::size_t rank = 0;

  /// Diagonal entries d_1..d_rank (all positive).
  IntVector invariant_factors() const;
};

SmithDecomposition smith(const IntMatrix& a);

std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b);
IntMatrix kernel_basis(const IntMatrix& a);
IntMatrix image_basis(const IntMatrix& a);
bool in_image(const IntVector& v, const IntMatrix& b);
std::size_t rank(const IntMatrix& a);
/// Solvability over Q, via rank([A | b]) == rank(A).
bool rationally_solvable(const IntMatrix& a, const IntVector& b);
/// Surjective onto Z^rows: every invariant factor is one and rank equals rows.
bool is_surjective(const IntMatrix& a);
/// Lattice spanned by columns of a equals lattice spanned by columns of b.
bool same_lattice(const IntMatrix& a, const IntMatrix& b);

struct QuotientInvariants {
  std::size_t free_rank = 0;
  /// Non-unit invariant factors of the torsion part.
  std::vector<Integer> torsion;

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const QuotientInvariants&) const = default;
};

/// Structure of the lattice quotient span(Z) / span(B). Z must have full
/// column rank and every column of B must lie in span(Z) (NotASublattice).
QuotientInvariants quotient_invariants(const IntMatrix& z_basis, const IntMatrix& b_gens);

/// Quotient structure together with representatives: column k of
/// `generators` (ambient coordinates) generates a cyclic summand of order
/// orders[k] (zero for an infinite summand).
struct QuotientPresentation {
  QuotientInvariants invariants;
  IntMatrix generators;
  std::vector<Integer> orders;
};

QuotientPresentation quotient_presentation(const IntMatrix& z_basis, const IntMatrix& b_gens);

}  // namespace ctxcohom::zlinalg
