#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "shiftcalc/errors.hpp"
#include "shiftcalc/invariants.hpp"
#include "shiftcalc/shift_equivalence.hpp"

using namespace shiftcalc;

TEST_CASE("cokernel rendering") {
  CHECK(cokernel(IntMatrix{{-2}}).to_string() == "Z/2");
  CHECK(cokernel(IntMatrix{{0, -2}, {-2, 0}}).to_string() == "Z/2 + Z/2");
  CHECK(cokernel(IntMatrix{{0, 0}, {0, 0}}).to_string() == "Z^2");
  CHECK(cokernel(IntMatrix{{1}}).to_string() == "0");
  CHECK(cokernel(IntMatrix{{1}}).is_trivial());
  CHECK(cokernel(IntMatrix{{2, 0}, {0, 0}}).to_string() == "Z + Z/2");
}

TEST_CASE("compute_invariants") {
  const DimensionInvariants full = compute_invariants(IntMatrix{{1, 1}, {1, 1}});
  CHECK(full.nonzero_char_poly == IntPolynomial{-2, 1});
  CHECK(full.eventual_rank == 1);
  CHECK(full.det_away_from_zero == 2);
  CHECK(full.bowen_franks.is_trivial());
  CHECK(full.bowen_franks == cokernel(IntMatrix{{0, -1}, {-1, 0}}));

  const DimensionInvariants c = compute_invariants(IntMatrix{{1, 2}, {2, 1}});
  CHECK(c.nonzero_char_poly == IntPolynomial{-3, -2, 1});
  CHECK(c.bowen_franks.torsion == std::vector<Integer>{2, 2});
  CHECK(c.det_away_from_zero == -3);

  CHECK_THROWS_AS(compute_invariants(IntMatrix{{1, 0}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(compute_invariants(IntMatrix{{1, 1}}), ShapeError);
}

TEST_CASE("compare names every separating invariant") {
  const ComparisonVerdict v = compare(IntMatrix{{2}}, IntMatrix{{3}});
  CHECK(v.distinguished);
  CHECK(v.separated_by("nonzero_char_poly"));

  const ComparisonVerdict w = compare(IntMatrix{{3}}, IntMatrix{{1, 2}, {2, 1}});
  CHECK(w.distinguished);
  CHECK(w.separated_by("bowen_franks"));

  // Same nonzero spectrum, different Bowen-Franks groups: only the group separates.
  const ComparisonVerdict u = compare(IntMatrix{{4, 1}, {1, 0}}, IntMatrix{{3, 2}, {2, 1}});
  CHECK(u.distinguished);
  CHECK(u.separating == std::vector<std::string>{"bowen_franks"});

  const ComparisonVerdict same = compare(IntMatrix{{2}}, IntMatrix{{1, 1}, {1, 1}});
  CHECK_FALSE(same.distinguished);
  CHECK(same.separating.empty());
}

TEST_CASE("bowen_franks_general") {
  CHECK(bowen_franks_general(IntMatrix{{3}}, IntPolynomial{1, -1}).torsion ==
        std::vector<Integer>{2});
  CHECK(bowen_franks_general(IntMatrix{{1, 1}, {1, 0}}, IntPolynomial{1}).is_trivial());
  CHECK(bowen_franks_general(IntMatrix{{1, 1}, {1, 0}}, IntPolynomial{1, -1}).is_trivial());
  CHECK_THROWS_AS(bowen_franks_general(IntMatrix{{2}}, IntPolynomial{2, 1}), DomainError);
}

TEST_CASE("invariants agree along random SSE chains") {
  const std::vector<IntPolynomial> polys{{1, -1}, {1, 1}, {1, 0, -1}};
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const IntMatrix a = oracle::random_matrix(rng, 1 + seed % 3, 1 + seed % 3, 1, 3);
    const SEWitness w = fold_chain(random_sse_chain(a, 1 + seed % 4, seed));
    CHECK_FALSE(compare(w.a, w.b).distinguished);
    for (const auto& p : polys)
      CHECK(bowen_franks_general(w.a, p) == bowen_franks_general(w.b, p));
  }
}

TEST_CASE("invariants are stable under relabeling and transposition") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 1 + k % 4;
    IntMatrix a = oracle::random_matrix(rng, n, n, 1, 3);
    a(0, 0) = 0;  // keep some zeros around
    if (!is_essential(a)) continue;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = a(perm[i], perm[j]);
    const auto ia = compute_invariants(a);
    const auto ip = compute_invariants(p);
    CHECK(ia.nonzero_char_poly == ip.nonzero_char_poly);
    CHECK(ia.bowen_franks == ip.bowen_franks);
    CHECK(ia.eventual_rank == ip.eventual_rank);
    CHECK(ia.det_away_from_zero == ip.det_away_from_zero);
    CHECK(ia.eventual_rank == compute_invariants(a.transpose()).eventual_rank);
  }
}
