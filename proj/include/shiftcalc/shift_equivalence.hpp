#pragma once

// Shift equivalence witnesses: verification, composition, bounded search and
// random strong-shift-equivalence chains.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftcalc/exact_linalg.hpp"

namespace shiftcalc {

/// Claim that a and b are shift equivalent with lag `lag` via (r, s):
///   a^lag = r s,  b^lag = s r,  a r = r b,  b s = s a.
struct SEWitness {
  IntMatrix a;
  IntMatrix b;
  IntMatrix r;
  IntMatrix s;
  unsigned lag = 1;

  friend bool operator==(const SEWitness&, const SEWitness&) = default;
};

/// Identity witness (a, a, I, a, 1).
SEWitness identity_witness(const IntMatrix& a);

enum class SEEquation { APowerEqualsRS, BPowerEqualsSR, AREqualsRB, BSEqualsSA };

std::string to_string(SEEquation e);

struct SECheck {
  bool verified = false;
  /// First equation (in the order above) that fails, if any.
  std::optional<SEEquation> failing;
};

/// Full check reporting the first failing equation. Throws ShapeError on
/// incompatible shapes and DomainError on negative entries or lag 0.
SECheck check_se(const SEWitness& w);

bool verify_se(const SEWitness& w);
bool verify_elementary(const IntMatrix& a, const IntMatrix& b,
                       const IntMatrix& r, const IntMatrix& s);

/// (w1.a, w2.b, r1 r2, s2 s1, m1 + m2). Both inputs must verify and chain.
SEWitness compose_se(const SEWitness& w1, const SEWitness& w2);

/// (b, a, s, r, m). Input must verify.
SEWitness reverse_se(const SEWitness& w);

struct SearchOptions {
  /// Worker threads used to scan candidate r matrices.
  unsigned jobs = 1;
};

/// Exhaustive search for a lag-`lag` witness with entries in [0, bound].
///
/// The intertwining equation a r = r b is solved exactly first; only its
/// integer points inside the box are enumerated. For each such r (in
/// lexicographic order) the remaining equations are linear in s and are
/// solved the same way. The first verified (r, s) in lexicographic order is
/// returned regardless of `jobs`.
std::optional<SEWitness> search_se(const IntMatrix& a, const IntMatrix& b,
                                   unsigned lag, unsigned bound,
                                   const SearchOptions& options = {});

using SSEChain = std::vector<SEWitness>;

struct ChainOptions {
  /// Splittings are not applied to matrices that already have this size.
  std::size_t max_dim = 4;
};

/// Random chain of elementary equivalences built from out-/in-splittings,
/// their inverse amalgamations and vertex relabelings. Deterministic in seed.
SSEChain random_sse_chain(const IntMatrix& a, std::size_t steps,
                          std::uint64_t seed, const ChainOptions& options = {});

/// Folds compose_se over a non-empty chain.
SEWitness fold_chain(const SSEChain& chain);

}  // namespace shiftcalc
