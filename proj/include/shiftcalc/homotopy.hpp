#pragma once

// Sampled homotopies of 1-arrows whose carrier is a fixed finite
// correspondence H: the intertwiner moves along a path of block unitaries,
// evaluated fiberwise at sample times.

#include <optional>
#include <string>
#include <vector>

#include "shiftcalc/aligned_shift.hpp"
#include "shiftcalc/correspondence.hpp"
#include "shiftcalc/shift_equivalence.hpp"

namespace shiftcalc {

struct PathSample {
  double t = 0.0;
  BlockUnitary u;
};

/// Path of block unitaries sampled on [0, 1]. When `generator` is present the
/// path is U(t) = U(0) exp(t H) with one skew-Hermitian H per block.
struct UnitaryPath {
  BlockUnitary source;
  BlockUnitary target;
  std::vector<PathSample> samples;
  std::optional<std::vector<ComplexMatrix>> generator;

  /// Closed form evaluation; requires a generator.
  BlockUnitary at(double t) const;
};

/// Principal logarithm of a unitary via its complex Schur form. Eigenvalue
/// arguments are taken in (-pi, pi]; an eigenvalue exactly -1 maps to +pi.
ComplexMatrix unitary_log(const ComplexMatrix& u);

/// U(t) = u0 exp(t log(u0^* u1)), sampled at t = k / (steps - 1).
/// Throws ShapeError for differently shaped maps and DomainError if steps < 2.
UnitaryPath connect_unitaries(const BlockUnitary& u0, const BlockUnitary& u1,
                              unsigned steps);

/// Run the path backwards.
UnitaryPath reverse_path(const UnitaryPath& p);

/// p1 then p2 at double speed. Requires p1's target == p2's source (within
/// the stored samples); the result has no single generator.
UnitaryPath concatenate_paths(const UnitaryPath& p1, const UnitaryPath& p2);

/// Homotopy (H, phi_H, h0, h1) from f_arrow to g_arrow with H = C(I, carrier).
/// At time t the 1-arrow is [carrier, path(t)]; h0 : carrier -> F and
/// h1 : carrier -> G are the endpoint 2-arrows.
struct ArrowHomotopy {
  OneArrow f_arrow;
  OneArrow g_arrow;
  GraphCorrespondence carrier;
  UnitaryPath path;
  BlockUnitary h0;
  BlockUnitary h1;

  /// [carrier, samples[k].u]
  OneArrow arrow_at_sample(std::size_t k) const;
};

struct HomotopyReport {
  bool ok = false;
  double start_residual = 0.0;      // 2-arrow residual of h0 at t = 0
  double end_residual = 0.0;        // 2-arrow residual of h1 at t = 1
  double max_unitarity_defect = 0.0;
  std::optional<std::size_t> first_failing_sample;
  std::string reason;
};

HomotopyReport check_homotopy(const ArrowHomotopy& h, double tol = kDefaultTolerance);
bool verify_homotopy(const ArrowHomotopy& h, double tol = kDefaultTolerance);

/// [X^m, 1] ~ [X^m, phi] along the straight path from 1 to phi, with
/// identity endpoint 2-arrows. phi : X (x) X^m -> X^m (x) X.
ArrowHomotopy homotopy_to_identity(const BlockUnitary& phi, const ObjectPair& obj,
                                   unsigned m, unsigned steps);

/// Time-reversed homotopy from g_arrow to f_arrow.
ArrowHomotopy reverse_homotopy(const ArrowHomotopy& h);

/// h1 followed by h2 (h1.g_arrow must be h2.f_arrow and the carriers must
/// agree). The second path is moved along c = h1.h1^* h2.h0 so that it starts
/// where the first one ends.
ArrowHomotopy concatenate_homotopies(const ArrowHomotopy& h1, const ArrowHomotopy& h2);

/// The constant homotopy of a 1-arrow.
ArrowHomotopy constant_homotopy(const OneArrow& f, unsigned steps);

struct HomotopyShiftBundle {
  AlignedShiftData shift;
  ArrowHomotopy x_homotopy;  // [M (x) N, phi_M . phi_N] ~ [X^m, 1]
  ArrowHomotopy y_homotopy;  // [N (x) M, phi_N . phi_M] ~ [Y^m, 1]
};

/// Concrete shift of build_from_se(w) together with the two homotopies. Each
/// composite is moved onto X^m (resp. Y^m) through psi, then joined to the
/// identity arrow. Throws ContractError for an unverified witness.
HomotopyShiftBundle homotopy_shift_equivalence_from_se(const SEWitness& w,
                                                       unsigned steps = 16);

}  // namespace shiftcalc
