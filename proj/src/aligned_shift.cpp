#include "shiftcalc/aligned_shift.hpp"

#include <algorithm>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

namespace {

BlockUnitary rebase_psi(const BlockUnitary& psi, const GraphCorrespondence& source,
                        const GraphCorrespondence& target, const char* name) {
  if (!psi.source().same_shape(source) || !psi.target().same_shape(target))
    throw ShapeError(std::string(name) + " has the wrong domain or codomain");
  return psi.rebased(source, target);
}

BlockUnitary id(const GraphCorrespondence& c) { return BlockUnitary::identity(c); }

}  // namespace

AlignedShiftData::AlignedShiftData(ObjectPair x_obj, ObjectPair y_obj, OneArrow m_arrow,
                                   OneArrow n_arrow, BlockUnitary psi_x,
                                   BlockUnitary psi_y, unsigned lag)
    : x_obj_(std::move(x_obj)),
      y_obj_(std::move(y_obj)),
      m_arrow_(std::move(m_arrow)),
      n_arrow_(std::move(n_arrow)),
      psi_x_(std::move(psi_x)),
      psi_y_(std::move(psi_y)),
      lag_(lag) {
  if (lag_ == 0) throw ShapeError("concrete shift lag must be positive");
  if (!(m_arrow_.left() == x_obj_) || !(m_arrow_.right() == y_obj_))
    throw ShapeError("M arrow must go from (B, Y) to (A, X)");
  if (!(n_arrow_.left() == y_obj_) || !(n_arrow_.right() == x_obj_))
    throw ShapeError("N arrow must go from (A, X) to (B, Y)");
  psi_x_ = rebase_psi(psi_x_, tensor(m_arrow_.f(), n_arrow_.f()),
                      tensor_power(x_obj_.x(), lag_), "psi_X");
  psi_y_ = rebase_psi(psi_y_, tensor(n_arrow_.f(), m_arrow_.f()),
                      tensor_power(y_obj_.x(), lag_), "psi_Y");
}

bool operator==(const AlignedShiftData& a, const AlignedShiftData& b) {
  return a.lag_ == b.lag_ && a.x_obj_ == b.x_obj_ && a.y_obj_ == b.y_obj_ &&
         a.m_arrow_.f() == b.m_arrow_.f() && a.n_arrow_.f() == b.n_arrow_.f() &&
         a.m_arrow_.phi() == b.m_arrow_.phi() && a.n_arrow_.phi() == b.n_arrow_.phi() &&
         a.psi_x_ == b.psi_x_ && a.psi_y_ == b.psi_y_;
}

namespace {

// (psi_1 (x) 1_1)(1_P (x) phi_Q)(phi_P (x) 1_Q) - 1_1 (x) psi_1 on
// side (x) P (x) Q, where P : side <- other and Q : other <- side.
double one_alignment_residual(const GraphCorrespondence& side, const OneArrow& p,
                              const OneArrow& q, const BlockUnitary& psi) {
  const BlockUnitary first = tensor_unitaries(p.phi(), id(q.f()));
  const BlockUnitary second = tensor_unitaries(id(p.f()), q.phi());
  const BlockUnitary third = tensor_unitaries(psi, id(side));
  const BlockUnitary lhs = compose_unitaries(compose_unitaries(first, second), third);
  const BlockUnitary rhs = tensor_unitaries(id(side), psi);
  return distance(lhs, rhs);
}

}  // namespace

AlignmentResiduals alignment_residuals(const AlignedShiftData& d) {
  return {one_alignment_residual(d.x_obj().x(), d.m_arrow(), d.n_arrow(), d.psi_x()),
          one_alignment_residual(d.y_obj().x(), d.n_arrow(), d.m_arrow(), d.psi_y())};
}

AlignmentResiduals two_arrow_alignment_residuals(const AlignedShiftData& d) {
  const OneArrow mn = compose_one_arrows(d.m_arrow(), d.n_arrow());
  const OneArrow nm = compose_one_arrows(d.n_arrow(), d.m_arrow());
  return {two_arrow_residual(d.psi_x(), mn, power_arrow(d.x_obj(), d.lag())),
          two_arrow_residual(d.psi_y(), nm, power_arrow(d.y_obj(), d.lag()))};
}

bool verify_concrete_shift(const AlignedShiftData& d, double tol) {
  return d.m_arrow().phi().is_unitary(tol) && d.n_arrow().phi().is_unitary(tol) &&
         d.psi_x().is_unitary(tol) && d.psi_y().is_unitary(tol);
}

bool verify_aligned(const AlignedShiftData& d, double tol) {
  if (!verify_concrete_shift(d, tol))
    throw ContractError("alignment is only defined for concrete shifts");
  return alignment_residuals(d).max() <= tol;
}

bool verify_aligned_via_two_arrows(const AlignedShiftData& d, double tol) {
  const OneArrow mn = compose_one_arrows(d.m_arrow(), d.n_arrow());
  const OneArrow nm = compose_one_arrows(d.n_arrow(), d.m_arrow());
  return check_two_arrow(d.psi_x(), mn, power_arrow(d.x_obj(), d.lag()), tol) &&
         check_two_arrow(d.psi_y(), nm, power_arrow(d.y_obj(), d.lag()), tol);
}

AlignedShiftData build_from_se(const SEWitness& w, const ShiftUnitaries& maps) {
  if (!verify_se(w)) throw ContractError("build_from_se requires a verified witness");
  const ObjectPair x = ObjectPair::from_matrix(w.a);
  const ObjectPair y = ObjectPair::from_matrix(w.b);
  const auto m = GraphCorrespondence::from_matrix(w.r, x.index(), y.index());
  const auto n = GraphCorrespondence::from_matrix(w.s, y.index(), x.index());

  auto pick = [](const std::optional<BlockUnitary>& given, const GraphCorrespondence& src,
                 const GraphCorrespondence& tgt, const char* name) {
    if (!given) return BlockUnitary::canonical(src, tgt);
    if (!given->source().same_shape(src) || !given->target().same_shape(tgt))
      throw ShapeError(std::string(name) + " has the wrong shape for this witness");
    return given->rebased(src, tgt);
  };

  OneArrow m_arrow(x, y, m, pick(maps.phi_m, tensor(x.x(), m), tensor(m, y.x()), "phi_M"));
  OneArrow n_arrow(y, x, n, pick(maps.phi_n, tensor(y.x(), n), tensor(n, x.x()), "phi_N"));
  BlockUnitary psi_x =
      pick(maps.psi_x, tensor(m, n), tensor_power(x.x(), w.lag), "psi_X");
  BlockUnitary psi_y =
      pick(maps.psi_y, tensor(n, m), tensor_power(y.x(), w.lag), "psi_Y");
  return AlignedShiftData(x, y, std::move(m_arrow), std::move(n_arrow), std::move(psi_x),
                          std::move(psi_y), w.lag);
}

AlignedShiftData compose_shifts(const AlignedShiftData& d1, const AlignedShiftData& d2,
                                double tol) {
  if (!(d1.y_obj() == d2.x_obj()))
    throw CompositionError("compose_shifts: first shift does not end where the second starts");
  if (!verify_aligned(d1, tol) || !verify_aligned(d2, tol))
    throw ContractError("compose_shifts requires aligned shifts");
  const unsigned m = d1.lag(), n = d2.lag();

  OneArrow m_arrow = compose_one_arrows(d1.m_arrow(), d2.m_arrow());
  OneArrow n_arrow = compose_one_arrows(d2.n_arrow(), d1.n_arrow());

  const auto& m1 = d1.m_arrow().f();
  const auto& m2 = d2.m_arrow().f();
  const auto& n1 = d1.n_arrow().f();
  const auto& n2 = d2.n_arrow().f();

  // M1 M2 N2 N1 -> M1 Y^n N1 -> M1 N1 X^n -> X^m X^n
  BlockUnitary psi_x = compose_unitaries(
      compose_unitaries(
          tensor_unitaries(tensor_unitaries(id(m1), d2.psi_x()), id(n1)),
          tensor_unitaries(id(m1), intertwine_power(d1.n_arrow(), n))),
      tensor_unitaries(d1.psi_x(), id(tensor_power(d1.x_obj().x(), n))));

  // N2 N1 M1 M2 -> N2 Y^m M2 -> N2 M2 Z^m -> Z^n Z^m
  BlockUnitary psi_z = compose_unitaries(
      compose_unitaries(
          tensor_unitaries(tensor_unitaries(id(n2), d1.psi_y()), id(m2)),
          tensor_unitaries(id(n2), intertwine_power(d2.m_arrow(), m))),
      tensor_unitaries(d2.psi_y(), id(tensor_power(d2.y_obj().x(), m))));

  return AlignedShiftData(d1.x_obj(), d2.y_obj(), std::move(m_arrow), std::move(n_arrow),
                          std::move(psi_x), std::move(psi_z), m + n);
}

AlignedShiftData reverse_shift(const AlignedShiftData& d, double tol) {
  if (!verify_concrete_shift(d, tol))
    throw ContractError("reverse_shift requires a concrete shift");
  return AlignedShiftData(d.y_obj(), d.x_obj(), d.n_arrow(), d.m_arrow(), d.psi_y(),
                          d.psi_x(), d.lag());
}

AlignedShiftData power_shift(const ObjectPair& obj, unsigned k, unsigned j) {
  if (k + j == 0) throw DomainError("power_shift needs a positive lag");
  OneArrow m_arrow = power_arrow(obj, k);
  OneArrow n_arrow = power_arrow(obj, j);
  const auto& mf = m_arrow.f();
  const auto& nf = n_arrow.f();
  BlockUnitary psi_x = BlockUnitary::canonical(tensor(mf, nf), tensor_power(obj.x(), k + j));
  BlockUnitary psi_y = BlockUnitary::canonical(tensor(nf, mf), tensor_power(obj.x(), k + j));
  return AlignedShiftData(obj, obj, std::move(m_arrow), std::move(n_arrow),
                          std::move(psi_x), std::move(psi_y), k + j);
}

AlignedShiftData trivial_shift(const ObjectPair& obj) { return power_shift(obj, 1, 0); }

AlignedShiftData conjugate_shift(const AlignedShiftData& d, const BlockUnitary& g_m,
                                 const BlockUnitary& g_n) {
  OneArrow m_arrow = transport_arrow(d.m_arrow(), g_m);
  OneArrow n_arrow = transport_arrow(d.n_arrow(), g_n);
  const BlockUnitary gm = g_m.rebased(d.m_arrow().f(), m_arrow.f());
  const BlockUnitary gn = g_n.rebased(d.n_arrow().f(), n_arrow.f());
  BlockUnitary psi_x = compose_unitaries(tensor_unitaries(gm, gn).adjoint(), d.psi_x());
  BlockUnitary psi_y = compose_unitaries(tensor_unitaries(gn, gm).adjoint(), d.psi_y());
  return AlignedShiftData(d.x_obj(), d.y_obj(), std::move(m_arrow), std::move(n_arrow),
                          std::move(psi_x), std::move(psi_y), d.lag());
}

}  // namespace shiftcalc
