#include "shiftcalc/invariants.hpp"

#include <algorithm>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

std::string AbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::string out;
  auto append = [&out](const std::string& s) {
    if (!out.empty()) out += " + ";
    out += s;
  };
  if (free_rank == 1) append("Z");
  if (free_rank > 1) append("Z^" + std::to_string(free_rank));
  for (const auto& d : torsion) append("Z/" + d.get_str());
  return out;
}

AbelianGroup cokernel(const IntMatrix& m) {
  const auto snf = smith_normal_form(m);
  AbelianGroup g;
  // Rows beyond the diagonal length contribute free summands.
  g.free_rank = m.rows() - snf.diagonal.size();
  for (const auto& d : snf.diagonal) {
    if (sgn(d) == 0) {
      ++g.free_rank;
    } else if (d != 1) {
      g.torsion.push_back(d);
    }
  }
  return g;
}

DimensionInvariants compute_invariants(const IntMatrix& a) {
  if (!is_essential(a)) throw DomainError("invariants require an essential matrix");
  const std::size_t n = a.rows();
  DimensionInvariants inv;
  inv.nonzero_char_poly = char_poly(a).strip_zero_roots();
  inv.bowen_franks = cokernel(IntMatrix::identity(n) - a);
  inv.eventual_rank = rank(mat_pow(a, static_cast<unsigned>(n)));
  // Monic, so the product of roots is (-1)^deg * constant term.
  const int deg = inv.nonzero_char_poly.degree();
  inv.det_away_from_zero = inv.nonzero_char_poly.coefficient(0);
  if (deg % 2 != 0) inv.det_away_from_zero = -inv.det_away_from_zero;
  return inv;
}

bool ComparisonVerdict::separated_by(const std::string& name) const {
  return std::find(separating.begin(), separating.end(), name) != separating.end();
}

ComparisonVerdict compare(const IntMatrix& a, const IntMatrix& b) {
  const auto ia = compute_invariants(a);
  const auto ib = compute_invariants(b);
  ComparisonVerdict v;
  if (ia.nonzero_char_poly != ib.nonzero_char_poly)
    v.separating.push_back("nonzero_char_poly");
  if (ia.bowen_franks != ib.bowen_franks) v.separating.push_back("bowen_franks");
  if (ia.eventual_rank != ib.eventual_rank) v.separating.push_back("eventual_rank");
  if (ia.det_away_from_zero != ib.det_away_from_zero)
    v.separating.push_back("det_away_from_zero");
  v.distinguished = !v.separating.empty();
  return v;
}

AbelianGroup bowen_franks_general(const IntMatrix& a, const IntPolynomial& p) {
  const Integer c0 = p.coefficient(0);
  if (abs(c0) != 1)
    throw DomainError("p(0) must be 1 or -1, got " + c0.get_str() + " for p = " +
                      p.to_string());
  return cokernel(evaluate(p, a));
}

}  // namespace shiftcalc
