#include "shiftcalc/homotopy.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

ComplexMatrix unitary_log(const ComplexMatrix& u) {
  if (u.size() == 0) return u;
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();
  Eigen::VectorXcd angles(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    double theta = std::arg(t(i, i));
    if (theta == -std::numbers::pi) theta = std::numbers::pi;
    angles(i) = Complex(0.0, theta);
  }
  return q * angles.asDiagonal() * q.adjoint();
}

namespace {

// exp(s H) for skew-Hermitian H, through the Hermitian matrix -iH.
ComplexMatrix skew_exp(const ComplexMatrix& h, double s) {
  if (h.size() == 0) return h;
  const ComplexMatrix k = Complex(0.0, -1.0) * h;
  const ComplexMatrix herm = 0.5 * (k + k.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  Eigen::VectorXcd phases(herm.rows());
  for (Eigen::Index i = 0; i < herm.rows(); ++i)
    phases(i) = std::polar(1.0, s * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BlockUnitary evaluate_path(const BlockUnitary& base,
                           const std::vector<ComplexMatrix>& generator, double t) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(generator.size());
  for (std::size_t i = 0; i < generator.size(); ++i)
    blocks.push_back(base.blocks()[i] * skew_exp(generator[i], t));
  return BlockUnitary(base.source(), base.target(), std::move(blocks));
}

}  // namespace

BlockUnitary UnitaryPath::at(double t) const {
  if (!generator) throw ContractError("path has no closed-form generator");
  return evaluate_path(source, *generator, t);
}

UnitaryPath connect_unitaries(const BlockUnitary& u0, const BlockUnitary& u1,
                              unsigned steps) {
  if (!u0.source().same_shape(u1.source()) || !u0.target().same_shape(u1.target()))
    throw ShapeError("connect_unitaries: endpoints have different shapes");
  if (steps < 2) throw DomainError("connect_unitaries needs at least two samples");
  std::vector<ComplexMatrix> gen;
  gen.reserve(u0.blocks().size());
  for (std::size_t i = 0; i < u0.blocks().size(); ++i)
    gen.push_back(unitary_log(u0.blocks()[i].adjoint() * u1.blocks()[i]));

  UnitaryPath p{u0, u1.rebased(u0.source(), u0.target()), {}, std::move(gen)};
  p.samples.reserve(steps);
  for (unsigned k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    p.samples.push_back({t, evaluate_path(u0, *p.generator, t)});
  }
  return p;
}

UnitaryPath reverse_path(const UnitaryPath& p) {
  UnitaryPath r{p.target, p.source, {}, std::nullopt};
  if (p.generator) {
    // U(1 - t) = U(1) exp(-t H)
    std::vector<ComplexMatrix> neg;
    for (const auto& h : *p.generator) neg.push_back(-h);
    r.generator = std::move(neg);
  }
  for (auto it = p.samples.rbegin(); it != p.samples.rend(); ++it)
    r.samples.push_back({1.0 - it->t, it->u});
  return r;
}

UnitaryPath concatenate_paths(const UnitaryPath& p1, const UnitaryPath& p2) {
  if (!p1.target.source().same_shape(p2.source.source()))
    throw ShapeError("concatenate_paths: paths live on different shapes");
  UnitaryPath out{p1.source, p2.target.rebased(p1.source.source(), p1.source.target()),
                  {}, std::nullopt};
  for (const auto& s : p1.samples) out.samples.push_back({0.5 * s.t, s.u});
  for (std::size_t k = 0; k < p2.samples.size(); ++k) {
    if (k == 0 && p2.samples[k].t == 0.0 && !out.samples.empty()) continue;
    out.samples.push_back(
        {0.5 + 0.5 * p2.samples[k].t,
         p2.samples[k].u.rebased(p1.source.source(), p1.source.target())});
  }
  return out;
}

OneArrow ArrowHomotopy::arrow_at_sample(std::size_t k) const {
  return OneArrow(f_arrow.left(), f_arrow.right(), carrier, path.samples.at(k).u);
}

HomotopyReport check_homotopy(const ArrowHomotopy& h, double tol) {
  HomotopyReport r;
  const auto& s = h.path.samples;
  if (s.empty() || s.front().t != 0.0 || s.back().t != 1.0) {
    r.reason = "path samples must start at t = 0 and end at t = 1";
    return r;
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double defect = s[k].u.unitarity_defect();
    r.max_unitarity_defect = std::max(r.max_unitarity_defect, defect);
    if (defect > tol && !r.first_failing_sample) {
      r.first_failing_sample = k;
      r.reason = "sample " + std::to_string(k) + " (t = " + std::to_string(s[k].t) +
                 ") is not unitary";
    }
  }
  r.start_residual = two_arrow_residual(h.h0, h.arrow_at_sample(0), h.f_arrow);
  r.end_residual = two_arrow_residual(h.h1, h.arrow_at_sample(s.size() - 1), h.g_arrow);
  if (r.reason.empty()) {
    if (distance(s.front().u, h.path.source) > tol ||
        distance(s.back().u, h.path.target) > tol) {
      r.reason = "path samples do not reproduce the path endpoints";
    } else if (!h.h0.is_unitary(tol) || r.start_residual > tol) {
      r.reason = "h0 is not a 2-arrow onto the source arrow";
    } else if (!h.h1.is_unitary(tol) || r.end_residual > tol) {
      r.reason = "h1 is not a 2-arrow onto the target arrow";
    }
  }
  r.ok = r.reason.empty();
  return r;
}

bool verify_homotopy(const ArrowHomotopy& h, double tol) {
  return check_homotopy(h, tol).ok;
}

ArrowHomotopy homotopy_to_identity(const BlockUnitary& phi, const ObjectPair& obj,
                                   unsigned m, unsigned steps) {
  OneArrow start = power_arrow(obj, m);
  const GraphCorrespondence carrier = start.f();
  if (!phi.source().same_shape(start.phi().source()) ||
      !phi.target().same_shape(start.phi().target()))
    throw ShapeError("homotopy_to_identity: phi must map X (x) X^m to X^m (x) X");
  OneArrow end(obj, obj, carrier, phi);
  UnitaryPath path = connect_unitaries(start.phi(), end.phi(), steps);
  const BlockUnitary id = BlockUnitary::identity(carrier);
  return ArrowHomotopy{std::move(start), std::move(end), carrier, std::move(path), id, id};
}

ArrowHomotopy reverse_homotopy(const ArrowHomotopy& h) {
  return ArrowHomotopy{h.g_arrow, h.f_arrow, h.carrier, reverse_path(h.path), h.h1, h.h0};
}

ArrowHomotopy concatenate_homotopies(const ArrowHomotopy& h1, const ArrowHomotopy& h2) {
  if (!(h1.carrier == h2.carrier))
    throw ShapeError("concatenate_homotopies: different carriers");
  if (!(h1.g_arrow.left() == h2.f_arrow.left()) ||
      !(h1.g_arrow.right() == h2.f_arrow.right()))
    throw CompositionError("concatenate_homotopies: homotopies do not chain");
  // c : carrier -> carrier, a 2-arrow from [carrier, p2(0)] to [carrier, p1(1)]
  const BlockUnitary c = compose_unitaries(h2.h0.rebased(h2.carrier, h1.h1.target()),
                                           h1.h1.adjoint());
  UnitaryPath moved{h2.path.source, h2.path.target, {}, std::nullopt};
  auto move = [&](const BlockUnitary& u) {
    return transport_arrow(OneArrow(h2.f_arrow.left(), h2.f_arrow.right(), h2.carrier, u), c)
        .phi();
  };
  moved.source = move(h2.path.source);
  moved.target = move(h2.path.target);
  for (const auto& s : h2.path.samples) moved.samples.push_back({s.t, move(s.u)});
  return ArrowHomotopy{h1.f_arrow, h2.g_arrow, h1.carrier,
                       concatenate_paths(h1.path, moved), h1.h0,
                       compose_unitaries(c.adjoint(), h2.h1)};
}

ArrowHomotopy constant_homotopy(const OneArrow& f, unsigned steps) {
  const BlockUnitary id = BlockUnitary::identity(f.f());
  return ArrowHomotopy{f, f, f.f(), connect_unitaries(f.phi(), f.phi(), steps), id, id};
}

namespace {

// [P (x) Q, phi_P . phi_Q] ~ [side^m, 1], through psi : P (x) Q -> side^m.
ArrowHomotopy composite_to_power(const OneArrow& p, const OneArrow& q,
                                 const BlockUnitary& psi, const ObjectPair& side,
                                 unsigned m, unsigned steps) {
  const OneArrow composite = compose_one_arrows(p, q);
  const OneArrow moved = transport_arrow(composite, psi);
  ArrowHomotopy h = reverse_homotopy(homotopy_to_identity(moved.phi(), side, m, steps));
  h.h0 = compose_unitaries(h.h0, psi.rebased(composite.f(), h.carrier).adjoint());
  h.f_arrow = composite;
  return h;
}

}  // namespace

HomotopyShiftBundle homotopy_shift_equivalence_from_se(const SEWitness& w,
                                                       unsigned steps) {
  AlignedShiftData d = build_from_se(w);
  ArrowHomotopy hx = composite_to_power(d.m_arrow(), d.n_arrow(), d.psi_x(), d.x_obj(),
                                        d.lag(), steps);
  ArrowHomotopy hy = composite_to_power(d.n_arrow(), d.m_arrow(), d.psi_y(), d.y_obj(),
                                        d.lag(), steps);
  return HomotopyShiftBundle{std::move(d), std::move(hx), std::move(hy)};
}

}  // namespace shiftcalc
