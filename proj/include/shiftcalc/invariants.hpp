#pragma once

// Computable shift-equivalence invariants. These are the finite shadow of the
// dimension triple: they can refute shift equivalence but never confirm it.

#include <string>
#include <vector>

#include "shiftcalc/exact_linalg.hpp"

namespace shiftcalc {

/// Finitely generated abelian group Z^free_rank + sum Z/torsion[i], with
/// torsion factors > 1 and each dividing the next.
struct AbelianGroup {
  std::vector<Integer> torsion;
  std::size_t free_rank = 0;

  bool is_trivial() const { return torsion.empty() && free_rank == 0; }
  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
  /// "Z/2 + Z/2", "Z^2", "0"
  std::string to_string() const;
};

/// Cokernel of an integer matrix read off its Smith normal form.
AbelianGroup cokernel(const IntMatrix& m);

struct DimensionInvariants {
  IntPolynomial nonzero_char_poly;  // char poly with all factors of t removed
  AbelianGroup bowen_franks;        // coker(I - A)
  std::size_t eventual_rank = 0;    // rank of A^n, n = size of A
  Integer det_away_from_zero;       // product of the nonzero eigenvalues
};

/// Throws DomainError if `a` is not essential, ShapeError if not square.
DimensionInvariants compute_invariants(const IntMatrix& a);

/// Distinguished when at least one invariant differs. `separating` lists every
/// differing invariant by name, in the fixed order nonzero_char_poly,
/// bowen_franks, eventual_rank, det_away_from_zero.
struct ComparisonVerdict {
  bool distinguished = false;
  std::vector<std::string> separating;

  bool separated_by(const std::string& name) const;
};

ComparisonVerdict compare(const IntMatrix& a, const IntMatrix& b);

/// coker(p(A)). Requires p(0) = +-1 (DomainError otherwise).
AbelianGroup bowen_franks_general(const IntMatrix& a, const IntPolynomial& p);

}  // namespace shiftcalc
