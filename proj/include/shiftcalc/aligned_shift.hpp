#pragma once

// Concrete shifts (M, N, phi_M, phi_N, psi_X, psi_Y) between objects (A, X)
// and (B, Y), their alignment equations, and transitive composition.

#include <optional>

#include "shiftcalc/correspondence.hpp"
#include "shiftcalc/shift_equivalence.hpp"

namespace shiftcalc {

class AlignedShiftData {
 public:
  /// m_arrow : (A, X) <- (B, Y) carries M and phi_M : X (x) M -> M (x) Y;
  /// n_arrow : (B, Y) <- (A, X) carries N and phi_N : Y (x) N -> N (x) X;
  /// psi_x : M (x) N -> X^lag and psi_y : N (x) M -> Y^lag.
  ///
  /// Throws ShapeError when any component has the wrong domain or codomain.
  /// The psi maps are rebased onto the canonical tensor products.
  AlignedShiftData(ObjectPair x_obj, ObjectPair y_obj, OneArrow m_arrow,
                   OneArrow n_arrow, BlockUnitary psi_x, BlockUnitary psi_y,
                   unsigned lag);

  const ObjectPair& x_obj() const { return x_obj_; }
  const ObjectPair& y_obj() const { return y_obj_; }
  const OneArrow& m_arrow() const { return m_arrow_; }
  const OneArrow& n_arrow() const { return n_arrow_; }
  const BlockUnitary& psi_x() const { return psi_x_; }
  const BlockUnitary& psi_y() const { return psi_y_; }
  unsigned lag() const { return lag_; }

  friend bool operator==(const AlignedShiftData& a, const AlignedShiftData& b);

 private:
  ObjectPair x_obj_;
  ObjectPair y_obj_;
  OneArrow m_arrow_;
  OneArrow n_arrow_;
  BlockUnitary psi_x_;
  BlockUnitary psi_y_;
  unsigned lag_;
};

/// Residuals of the two alignment equations, each the largest blockwise
/// operator-norm difference between the two sides.
struct AlignmentResiduals {
  double x = 0.0;
  double y = 0.0;
  double max() const { return x > y ? x : y; }
};

/// Direct evaluation of
///   (psi_X (x) 1_X)(1_M (x) phi_N)(phi_M (x) 1_N) = 1_X (x) psi_X
/// and the symmetric Y equation.
AlignmentResiduals alignment_residuals(const AlignedShiftData& d);

/// Same quantities computed as 2-arrow residuals of psi_X against
/// [M (x) N, phi_M . phi_N] -> [X^m, 1] and psi_Y against
/// [N (x) M, phi_N . phi_M] -> [Y^m, 1].
AlignmentResiduals two_arrow_alignment_residuals(const AlignedShiftData& d);

/// All four maps unitary within tol.
bool verify_concrete_shift(const AlignedShiftData& d, double tol = kDefaultTolerance);

/// Both alignment equations hold within tol. Throws ContractError when the
/// data is not a concrete shift.
bool verify_aligned(const AlignedShiftData& d, double tol = kDefaultTolerance);

/// psi_X and psi_Y are 2-arrows onto the power arrows (within tol).
bool verify_aligned_via_two_arrows(const AlignedShiftData& d,
                                   double tol = kDefaultTolerance);

/// Optional replacements for the default canonical maps of build_from_se.
struct ShiftUnitaries {
  std::optional<BlockUnitary> phi_m;
  std::optional<BlockUnitary> phi_n;
  std::optional<BlockUnitary> psi_x;
  std::optional<BlockUnitary> psi_y;
};

/// Concrete shift with M = X(R), N = X(S). Omitted maps are the canonical
/// basis identifications, e.g. X(A) (x) X(R) ~ X(AR) = X(RB) ~ X(R) (x) X(B).
/// Throws ContractError for an unverified witness and ShapeError for a
/// supplied map of the wrong shape.
AlignedShiftData build_from_se(const SEWitness& w, const ShiftUnitaries& maps = {});

/// Lag m + n composite with M = M1 (x) M2 and N = N2 (x) N1. psi_X' is the
/// chain M1 M2 N2 N1 -> M1 Y^n N1 -> M1 N1 X^n -> X^m X^n, and psi_Z' the
/// analogous chain on the other side. Throws CompositionError unless
/// d1.y_obj == d2.x_obj and ContractError unless both inputs are aligned
/// within tol.
AlignedShiftData compose_shifts(const AlignedShiftData& d1, const AlignedShiftData& d2,
                                double tol = kDefaultTolerance);

/// Swap the roles of X and Y. Throws ContractError unless d is a concrete
/// shift within tol.
AlignedShiftData reverse_shift(const AlignedShiftData& d, double tol = kDefaultTolerance);

/// M = X^k, N = X^j, lag k + j >= 1, every map canonical. Always aligned.
AlignedShiftData power_shift(const ObjectPair& obj, unsigned k, unsigned j);

/// power_shift(obj, 1, 0): M = X, N = unit, lag 1.
AlignedShiftData trivial_shift(const ObjectPair& obj);

/// Moves the data along unitaries g_m : M -> M and g_n : N -> N. Alignment
/// and concreteness are preserved.
AlignedShiftData conjugate_shift(const AlignedShiftData& d, const BlockUnitary& g_m,
                                 const BlockUnitary& g_n);

}  // namespace shiftcalc
