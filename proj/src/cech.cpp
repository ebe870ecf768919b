#include "ctxcohom/cech.hpp"

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

CochainSpace::CochainSpace(const AbPresheaf& f, const Nerve& nerve, std::size_t q) : q_(q) {
  const auto& level = nerve.level(q);
  offsets_.reserve(level.size() + 1);
  offsets_.push_back(0);
  for (const auto& sigma : level) offsets_.push_back(offsets_.back() + f.rank(sigma.open));
}

CochainSpace::BasisElement CochainSpace::basis(std::size_t i) const {
  if (i >= dimension()) throw Error(ErrorCode::IndexOutOfRange, "cochain basis index");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
  std::size_t s = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {s, i - offsets_[s]};
}

IntVector CochainSpace::value(const IntVector& cochain, std::size_t simplex) const {
  if (cochain.size() != dimension()) throw Error(ErrorCode::DimensionMismatch, "cochain length");
  return IntVector(cochain.begin() + static_cast<std::ptrdiff_t>(offset(simplex)),
                   cochain.begin() + static_cast<std::ptrdiff_t>(offset(simplex + 1)));
}

namespace {

void assemble_row_block(const AbPresheaf& f, const Nerve& nerve, std::size_t q, const CochainSpace& src,
                        const CochainSpace& dst, std::size_t s, IntMatrix& out) {
  const auto& sigma = nerve.level(q + 1)[s];
  for (std::size_t j = 0; j <= q + 1; ++j) {
    std::size_t t = nerve.face_index(q + 1, s, j);
    const auto& tau = nerve.level(q)[t];
    out.add_block(dst.offset(s), src.offset(t), f.restriction(sigma.open, tau.open), j % 2 == 0 ? 1 : -1);
  }
}

}  // namespace

IntMatrix coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q) {
  CochainSpace src(f, nerve, q), dst(f, nerve, q + 1);
  IntMatrix out(dst.dimension(), src.dimension());
  const auto n = static_cast<std::ptrdiff_t>(dst.num_simplices());
  // Each simplex owns a disjoint band of rows.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    assemble_row_block(f, nerve, q, src, dst, static_cast<std::size_t>(s), out);
  }
  return out;
}

IntMatrix serial::coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q) {
  CochainSpace src(f, nerve, q), dst(f, nerve, q + 1);
  IntMatrix out(dst.dimension(), src.dimension());
  for (std::size_t s = 0; s < dst.num_simplices(); ++s) assemble_row_block(f, nerve, q, src, dst, s, out);
  return out;
}

IntVector apply_coboundary(const AbPresheaf& f, const Nerve& nerve, std::size_t q, const IntVector& cochain) {
  CochainSpace src(f, nerve, q), dst(f, nerve, q + 1);
  if (cochain.size() != src.dimension()) throw Error(ErrorCode::DimensionMismatch, "cochain length");
  IntVector out(dst.dimension());
  const auto& upper = nerve.level(q + 1);
  const auto& lower = nerve.level(q);
  for (std::size_t s = 0; s < upper.size(); ++s) {
    for (std::size_t j = 0; j <= q + 1; ++j) {
      std::size_t t = nerve.face_index(q + 1, s, j);
      IntVector part = f.restriction(upper[s].open, lower[t].open) * src.value(cochain, t);
      for (std::size_t k = 0; k < part.size(); ++k) {
        if (j % 2 == 0) {
          out[dst.offset(s) + k] += part[k];
        } else {
          out[dst.offset(s) + k] -= part[k];
        }
      }
    }
  }
  return out;
}

IntMatrix cochain_map(const PresheafMorphism& m, const AbPresheaf& source, const AbPresheaf& target,
                      const Nerve& nerve, std::size_t q) {
  CochainSpace src(source, nerve, q), dst(target, nerve, q);
  IntMatrix out(dst.dimension(), src.dimension());
  const auto& level = nerve.level(q);
  for (std::size_t s = 0; s < level.size(); ++s) out.set_block(dst.offset(s), src.offset(s), m.at(level[s].open));
  return out;
}

IntMatrix cocycles(const AbPresheaf& f, const Nerve& nerve, std::size_t q) {
  return zlinalg::kernel_basis(coboundary(f, nerve, q));
}

CohomologyGroup cohomology(const AbPresheaf& f, const Nerve& nerve, std::size_t q) {
  CohomologyGroup out;
  out.degree = q;
  out.cocycle_basis = cocycles(f, nerve, q);
  if (q == 0) {
    out.free_rank = out.cocycle_basis.cols();
    out.coboundary_image_basis = IntMatrix(out.cocycle_basis.rows(), 0);
    out.generators = out.cocycle_basis;
    out.orders.assign(out.free_rank, 0);
    return out;
  }
  IntMatrix b = coboundary(f, nerve, q - 1);
  out.coboundary_image_basis = zlinalg::image_basis(b);
  auto pres = zlinalg::quotient_presentation(out.cocycle_basis, out.coboundary_image_basis);
  out.free_rank = pres.invariants.free_rank;
  out.torsion = pres.invariants.torsion;
  out.generators = std::move(pres.generators);
  out.orders = std::move(pres.orders);
  return out;
}

bool class_is_zero(const AbPresheaf& f, const Nerve& nerve, std::size_t q, const IntVector& z) {
  if (!zlinalg::is_zero(apply_coboundary(f, nerve, q, z))) {
    throw Error(ErrorCode::NotACocycle, "degree " + std::to_string(q) + " cochain is not a cocycle");
  }
  if (q == 0) return zlinalg::is_zero(z);
  return zlinalg::in_image(z, coboundary(f, nerve, q - 1));
}

// ---------------------------------------------------------------------------

const CochainSpace& CechComplex::space(std::size_t q) const {
  std::lock_guard lock(mutex_);
  auto& slot = spaces_[q];
  if (!slot) slot = std::make_unique<CochainSpace>(*f_, *nerve_, q);
  return *slot;
}

const IntMatrix& CechComplex::coboundary(std::size_t q) const {
  std::lock_guard lock(mutex_);
  auto& slot = coboundaries_[q];
  if (!slot) slot = std::make_unique<IntMatrix>(parallel_ ? ctxcohom::coboundary(*f_, *nerve_, q)
                                                 : serial::coboundary(*f_, *nerve_, q));
  return *slot;
}

const zlinalg::ColumnEchelon& CechComplex::coboundary_echelon(std::size_t q) const {
  const IntMatrix& d = coboundary(q);
  std::lock_guard lock(mutex_);
  auto& slot = echelons_[q];
  if (!slot) slot = std::make_unique<zlinalg::ColumnEchelon>(d, parallel_);
  return *slot;
}

IntVector CechComplex::apply(std::size_t q, const IntVector& cochain) const {
  return apply_coboundary(*f_, *nerve_, q, cochain);
}

bool CechComplex::is_cocycle(std::size_t q, const IntVector& z) const { return zlinalg::is_zero(apply(q, z)); }

bool CechComplex::class_is_zero(std::size_t q, const IntVector& z) const {
  if (!is_cocycle(q, z)) {
    throw Error(ErrorCode::NotACocycle, "degree " + std::to_string(q) + " cochain is not a cocycle");
  }
  if (q == 0) return zlinalg::is_zero(z);
  return coboundary_echelon(q - 1).in_image(z);
}

std::optional<IntVector> CechComplex::primitive(std::size_t q, const IntVector& z) const {
  if (q == 0) return std::nullopt;
  return coboundary_echelon(q - 1).solve(z);
}

}  // namespace ctxcohom
