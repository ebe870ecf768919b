#include "ctxcohom/zlinalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "ctxcohom/errors.hpp"

namespace ctxcohom::zlinalg {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntMatrix IntMatrix::column_vector(const IntVector& v) { return from_columns(v.size(), {v}); }

IntVector IntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<IntVector> IntMatrix::columns() const {
  std::vector<IntVector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& block) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_) {
    throw Error(ErrorCode::DimensionMismatch, "block does not fit");
  }
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c) (*this)(r0 + r, c0 + c) = block(r, c);
}

void IntMatrix::add_block(std::size_t r0, std::size_t c0, const IntMatrix& block, int sign) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_) {
    throw Error(ErrorCode::DimensionMismatch, "block does not fit");
  }
  for (std::size_t r = 0; r < block.rows(); ++r) {
    for (std::size_t c = 0; c < block.cols(); ++c) {
      const Integer& x = block(r, c);
      if (sgn(x) == 0) continue;
      if (sign > 0) {
        (*this)(r0 + r, c0 + c) += x;
      } else {
        (*this)(r0 + r, c0 + c) -= x;
      }
    }
  }
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
  if (r0 + nrows > rows_ || c0 + ncols > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  IntMatrix out(nrows, ncols);
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

IntMatrix IntMatrix::hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack row mismatch");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

IntMatrix IntMatrix::vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack column mismatch");
  IntMatrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ',';
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ',';
      os << (*this)(r, c);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product dimensions");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Integer& bkj = b(k, j);
        if (sgn(bkj) != 0) mpz_addmul(out(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
      }
    }
  }
  return out;
}

IntVector operator*(const IntMatrix& a, const IntVector& x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimensions");
  IntVector out(a.rows());
  for (std::size_t k = 0; k < a.cols(); ++k) {
    if (sgn(x[k]) == 0) continue;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Integer& aik = a(i, k);
      if (sgn(aik) != 0) mpz_addmul(out[i].get_mpz_t(), aik.get_mpz_t(), x[k].get_mpz_t());
    }
  }
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  IntMatrix out = a;
  out.add_block(0, 0, b, 1);
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  IntMatrix out = a;
  out.add_block(0, 0, b, -1);
  return out;
}

IntVector operator+(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVector operator-(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVector operator-(const IntVector& a) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

IntVector scaled(const IntVector& a, const Integer& k) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * k;
  return out;
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return sgn(x) == 0; });
}

IntVector zeros(std::size_t n) { return IntVector(n); }

IntVector unit_vector(std::size_t n, std::size_t i) {
  IntVector v(n);
  v.at(i) = 1;
  return v;
}

// ---------------------------------------------------------------------------
// Column echelon

namespace {

bool abs_less(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

// dst -= q * src over [from, end)
void submul(IntVector& dst, const IntVector& src, const Integer& q, std::size_t from) {
  for (std::size_t i = from; i < src.size(); ++i) {
    if (sgn(src[i]) != 0) mpz_submul(dst[i].get_mpz_t(), q.get_mpz_t(), src[i].get_mpz_t());
  }
}

void negate(IntVector& v) {
  for (auto& x : v) mpz_neg(x.get_mpz_t(), x.get_mpz_t());
}

// Reduces every column j > r at row p by the pivot column r. Returns whether
// any of them still has a nonzero entry at p.
bool reduce_columns(std::vector<IntVector>& h, std::vector<IntVector>& v, std::size_t r, std::size_t p,
                    bool parallel) {
  const std::ptrdiff_t begin = static_cast<std::ptrdiff_t>(r) + 1;
  const std::ptrdiff_t end = static_cast<std::ptrdiff_t>(h.size());
  int remaining = 0;
  const bool go_parallel = parallel && (end - begin) >= 32;
#pragma omp parallel for schedule(static) reduction(| : remaining) if (go_parallel)
  for (std::ptrdiff_t j = begin; j < end; ++j) {
    auto& hj = h[static_cast<std::size_t>(j)];
    if (sgn(hj[p]) == 0) continue;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), hj[p].get_mpz_t(), h[r][p].get_mpz_t());
    submul(hj, h[r], q, p);
    submul(v[static_cast<std::size_t>(j)], v[r], q, 0);
    if (sgn(hj[p]) != 0) remaining = 1;
  }
  return remaining != 0;
}

}  // namespace

ColumnEchelon::ColumnEchelon(const IntMatrix& a, bool parallel) : rows_(a.rows()), cols_(a.cols()) {
  h_ = a.columns();
  v_.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v_.push_back(unit_vector(cols_, j));

  std::size_t r = 0;
  for (std::size_t p = 0; p < rows_ && r < cols_; ++p) {
    while (true) {
      std::size_t best = cols_;
      for (std::size_t j = r; j < cols_; ++j) {
        if (sgn(h_[j][p]) == 0) continue;
        if (best == cols_ || abs_less(h_[j][p], h_[best][p])) best = j;
      }
      if (best == cols_) break;
      std::swap(h_[r], h_[best]);
      std::swap(v_[r], v_[best]);
      if (!reduce_columns(h_, v_, r, p, parallel)) {
        if (sgn(h_[r][p]) < 0) {
          negate(h_[r]);
          negate(v_[r]);
        }
        pivots_.push_back(p);
        ++r;
        break;
      }
    }
  }
}

std::optional<IntVector> ColumnEchelon::solve(const IntVector& b) const {
  if (b.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  IntVector residual = b;
  IntVector x(cols_);
  std::size_t k = 0;
  Integer y;
  for (std::size_t p = 0; p < rows_; ++p) {
    if (k < pivots_.size() && pivots_[k] == p) {
      if (sgn(residual[p]) != 0) {
        if (!mpz_divisible_p(residual[p].get_mpz_t(), h_[k][p].get_mpz_t())) return std::nullopt;
        mpz_divexact(y.get_mpz_t(), residual[p].get_mpz_t(), h_[k][p].get_mpz_t());
        submul(residual, h_[k], y, p);
        for (std::size_t i = 0; i < cols_; ++i) {
          if (sgn(v_[k][i]) != 0) mpz_addmul(x[i].get_mpz_t(), y.get_mpz_t(), v_[k][i].get_mpz_t());
        }
      }
      ++k;
    } else if (sgn(residual[p]) != 0) {
      return std::nullopt;
    }
  }
  return x;
}

IntMatrix ColumnEchelon::kernel_basis() const {
  std::vector<IntVector> cols(v_.begin() + static_cast<std::ptrdiff_t>(rank()), v_.end());
  return IntMatrix::from_columns(cols_, cols);
}

IntMatrix ColumnEchelon::image_basis() const {
  std::vector<IntVector> cols(h_.begin(), h_.begin() + static_cast<std::ptrdiff_t>(rank()));
  return IntMatrix::from_columns(rows_, cols);
}

IntMatrix ColumnEchelon::reduced() const { return IntMatrix::from_columns(rows_, h_); }

IntMatrix ColumnEchelon::transform() const { return IntMatrix::from_columns(cols_, v_); }

ColumnEchelon serial::column_echelon(const IntMatrix& a) { return ColumnEchelon(a, false); }

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

class SmithWorker {
 public:
  explicit SmithWorker(const IntMatrix& a)
      : a_(a),
        u_(IntMatrix::identity(a.rows())),
        ui_(IntMatrix::identity(a.rows())),
        v_(IntMatrix::identity(a.cols())),
        vi_(IntMatrix::identity(a.cols())) {}

  SmithDecomposition run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!bring_min_to(t)) break;
      while (true) {
        eliminate(t);
        if (auto pos = min_in_cross(t)) {
          swap_rows(t, pos->first);
          swap_cols(t, pos->second);
          continue;
        }
        if (auto i = nondivisible_row(t)) {
          add_row(t, *i, 1);
          continue;
        }
        break;
      }
      if (sgn(a_(t, t)) < 0) negate_row(t);
    }
    SmithDecomposition out{std::move(u_), std::move(ui_), std::move(v_), std::move(vi_), std::move(a_), t};
    return out;
  }

 private:
  // Moves the smallest nonzero entry of the trailing block to (t, t).
  bool bring_min_to(std::size_t t) {
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = t; i < a_.rows(); ++i) {
      for (std::size_t j = t; j < a_.cols(); ++j) {
        if (sgn(a_(i, j)) == 0) continue;
        if (!found || abs_less(a_(i, j), a_(bi, bj))) {
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void eliminate(std::size_t t) {
    Integer q;
    for (std::size_t i = t + 1; i < a_.rows(); ++i) {
      if (sgn(a_(i, t)) == 0) continue;
      mpz_fdiv_q(q.get_mpz_t(), a_(i, t).get_mpz_t(), a_(t, t).get_mpz_t());
      add_row(i, t, -q);
    }
    for (std::size_t j = t + 1; j < a_.cols(); ++j) {
      if (sgn(a_(t, j)) == 0) continue;
      mpz_fdiv_q(q.get_mpz_t(), a_(t, j).get_mpz_t(), a_(t, t).get_mpz_t());
      add_col(j, t, -q);
    }
  }

  // Smallest nonzero remainder left in row t or column t, if any.
  std::optional<std::pair<std::size_t, std::size_t>> min_in_cross(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    auto consider = [&](std::size_t i, std::size_t j) {
      if (sgn(a_(i, j)) == 0) return;
      if (!best || abs_less(a_(i, j), a_(best->first, best->second))) best = std::make_pair(i, j);
    };
    for (std::size_t i = t + 1; i < a_.rows(); ++i) consider(i, t);
    for (std::size_t j = t + 1; j < a_.cols(); ++j) consider(t, j);
    return best;
  }

  std::optional<std::size_t> nondivisible_row(std::size_t t) const {
    for (std::size_t i = t + 1; i < a_.rows(); ++i)
      for (std::size_t j = t + 1; j < a_.cols(); ++j)
        if (!mpz_divisible_p(a_(i, j).get_mpz_t(), a_(t, t).get_mpz_t())) return i;
    return std::nullopt;
  }

  // row_i += k * row_s
  void add_row(std::size_t i, std::size_t s, const Integer& k) {
    for (std::size_t c = 0; c < a_.cols(); ++c) a_(i, c) += k * a_(s, c);
    for (std::size_t c = 0; c < u_.cols(); ++c) u_(i, c) += k * u_(s, c);
    // inverse: column s of U^-1 -= k * column i
    for (std::size_t r = 0; r < ui_.rows(); ++r) ui_(r, s) -= k * ui_(r, i);
  }

  // col_j += k * col_s
  void add_col(std::size_t j, std::size_t s, const Integer& k) {
    for (std::size_t r = 0; r < a_.rows(); ++r) a_(r, j) += k * a_(r, s);
    for (std::size_t r = 0; r < v_.rows(); ++r) v_(r, j) += k * v_(r, s);
    // inverse: row s of V^-1 -= k * row j
    for (std::size_t c = 0; c < vi_.cols(); ++c) vi_(s, c) -= k * vi_(j, c);
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t c = 0; c < a_.cols(); ++c) std::swap(a_(i, c), a_(k, c));
    for (std::size_t c = 0; c < u_.cols(); ++c) std::swap(u_(i, c), u_(k, c));
    for (std::size_t r = 0; r < ui_.rows(); ++r) std::swap(ui_(r, i), ui_(r, k));
  }

  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t r = 0; r < a_.rows(); ++r) std::swap(a_(r, j), a_(r, k));
    for (std::size_t r = 0; r < v_.rows(); ++r) std::swap(v_(r, j), v_(r, k));
    for (std::size_t c = 0; c < vi_.cols(); ++c) std::swap(vi_(j, c), vi_(k, c));
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a_.cols(); ++c) a_(i, c) = -a_(i, c);
    for (std::size_t c = 0; c < u_.cols(); ++c) u_(i, c) = -u_(i, c);
    for (std::size_t r = 0; r < ui_.rows(); ++r) ui_(r, i) = -ui_(r, i);
  }

  IntMatrix a_, u_, ui_, v_, vi_;
};

}  // namespace

IntVector SmithDecomposition::invariant_factors() const {
  IntVector out;
  for (std::size_t t = 0; t < rank; ++t) out.push_back(d(t, t));
  return out;
}

SmithDecomposition smith(const IntMatrix& a) { return SmithWorker(a).run(); }

// ---------------------------------------------------------------------------
// Derived lattice operations

std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b) { return ColumnEchelon(a).solve(b); }

IntMatrix kernel_basis(const IntMatrix& a) { return ColumnEchelon(a).kernel_basis(); }

IntMatrix image_basis(const IntMatrix& a) { return ColumnEchelon(a).image_basis(); }

bool in_image(const IntVector& v, const IntMatrix& b) { return ColumnEchelon(b).in_image(v); }

std::size_t rank(const IntMatrix& a) { return ColumnEchelon(a).rank(); }

bool rationally_solvable(const IntMatrix& a, const IntVector& b) {
  return rank(a) == rank(IntMatrix::hstack(a, IntMatrix::column_vector(b)));
}

bool is_surjective(const IntMatrix& a) {
  if (a.rows() == 0) return true;
  auto snf = smith(a);
  if (snf.rank != a.rows()) return false;
  for (const auto& d : snf.invariant_factors()) {
    if (d != 1) return false;
  }
  return true;
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) return false;
  ColumnEchelon ea(a), eb(b);
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!eb.in_image(a.column(c))) return false;
  for (std::size_t c = 0; c < b.cols(); ++c)
    if (!ea.in_image(b.column(c))) return false;
  return true;
}

QuotientPresentation quotient_presentation(const IntMatrix& z_basis, const IntMatrix& b_gens) {
  if (z_basis.rows() != b_gens.rows()) throw Error(ErrorCode::DimensionMismatch, "quotient ambient dimensions differ");
  ColumnEchelon ez(z_basis);
  if (ez.rank() != z_basis.cols()) throw Error(ErrorCode::InvalidArgument, "lattice basis is not independent");
  const std::size_t k = z_basis.cols();
  IntMatrix coords(k, b_gens.cols());
  for (std::size_t c = 0; c < b_gens.cols(); ++c) {
    auto x = ez.solve(b_gens.column(c));
    if (!x) throw Error(ErrorCode::NotASublattice, "generator " + std::to_string(c) + " outside the lattice");
    for (std::size_t r = 0; r < k; ++r) coords(r, c) = (*x)[r];
  }
  auto snf = smith(coords);
  IntMatrix adapted = z_basis * snf.u_inverse;

  QuotientPresentation out;
  std::vector<IntVector> gens;
  for (std::size_t t = 0; t < k; ++t) {
    Integer d = t < snf.rank ? Integer(snf.d(t, t)) : Integer(0);
    if (d == 1) continue;
    gens.push_back(adapted.column(t));
    out.orders.push_back(d);
    if (d == 0) {
      ++out.invariants.free_rank;
    } else {
      out.invariants.torsion.push_back(d);
    }
  }
  out.generators = IntMatrix::from_columns(z_basis.rows(), gens);
  return out;
}

QuotientInvariants quotient_invariants(const IntMatrix& z_basis, const IntMatrix& b_gens) {
  return quotient_presentation(z_basis, b_gens).invariants;
}

}  // namespace ctxcohom::zlinalg
