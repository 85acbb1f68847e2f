#include <doctest.h>

#include "oracles.hpp"
#include "shiftcalc/aligned_shift.hpp"
#include "shiftcalc/errors.hpp"

using namespace shiftcalc;

namespace {

constexpr double kTau = 1e-9;

SEWitness golden_mean_pair() {
  return SEWitness{IntMatrix{{2}}, IntMatrix{{1, 1}, {1, 1}}, IntMatrix{{1, 1}},
                   IntMatrix{{1}, {1}}, 1};
}

AlignedShiftData conjugated(const AlignedShiftData& d, std::mt19937_64& rng) {
  const auto& m = d.m_arrow().f();
  const auto& n = d.n_arrow().f();
  return conjugate_shift(d, random_block_unitary(m, m, rng), random_block_unitary(n, n, rng));
}

ObjectPair random_object(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 2;
  for (;;) {
    const IntMatrix a = oracle::random_matrix(rng, n, n, 0, 2);
    if (is_essential(a)) return ObjectPair::from_matrix(a);
  }
}

}  // namespace

TEST_CASE("build_from_se shapes") {
  const SEWitness w = golden_mean_pair();
  const AlignedShiftData d = build_from_se(w);
  CHECK(d.lag() == 1);
  CHECK(d.m_arrow().f().dims().to_int() == w.r);
  CHECK(d.n_arrow().f().dims().to_int() == w.s);
  CHECK(tensor(d.m_arrow().f(), d.n_arrow().f()).dims().to_int() == mat_pow(w.a, w.lag));
  CHECK(tensor(d.n_arrow().f(), d.m_arrow().f()).dims().to_int() == mat_pow(w.b, w.lag));
  CHECK(verify_concrete_shift(d, kTau));

  SEWitness bad = w;
  bad.r(0, 0) += 1;
  CHECK_THROWS_AS(build_from_se(bad), ContractError);

  ShiftUnitaries wrong;
  wrong.psi_x = BlockUnitary::identity(GraphCorrespondence::from_matrix(IntMatrix{{3}}));
  CHECK_THROWS_AS(build_from_se(w, wrong), ShapeError);
}

TEST_CASE("default maps of the golden mean witness: both formulations agree") {
  const AlignedShiftData d = build_from_se(golden_mean_pair());
  CHECK(verify_aligned(d, kTau) == verify_aligned_via_two_arrows(d, kTau));
  const auto a = alignment_residuals(d);
  const auto b = two_arrow_alignment_residuals(d);
  CHECK(std::abs(a.x - b.x) <= 1e-12);
  CHECK(std::abs(a.y - b.y) <= 1e-12);
}

TEST_CASE("identity and power shifts are aligned") {
  const ObjectPair obj = ObjectPair::from_matrix(IntMatrix{{1, 1}, {1, 0}});
  CHECK(verify_aligned(build_from_se(identity_witness(obj.matrix())), kTau));
  CHECK(verify_aligned(trivial_shift(obj), kTau));
  for (unsigned k = 0; k <= 2; ++k)
    for (unsigned j = 0; j <= 2; ++j) {
      if (k + j == 0) continue;
      const AlignedShiftData d = power_shift(obj, k, j);
      CHECK(d.lag() == k + j);
      CHECK(verify_aligned(d, kTau));
      CHECK(verify_aligned_via_two_arrows(d, kTau));
    }
  CHECK_THROWS_AS(power_shift(obj, 0, 0), DomainError);
}

TEST_CASE("conjugation preserves alignment and composition is aligned") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    const ObjectPair obj = random_object(rng);
    const AlignedShiftData d1 = conjugated(power_shift(obj, 1, 1), rng);
    const AlignedShiftData d2 = conjugated(build_from_se(identity_witness(obj.matrix())), rng);
    CHECK(verify_aligned(d1, kTau));
    CHECK(verify_aligned(d2, kTau));
    const AlignedShiftData d = compose_shifts(d1, d2, kTau);
    CHECK(d.lag() == 3);
    CHECK(alignment_residuals(d).max() <= 8 * kTau);
    CHECK(verify_aligned_via_two_arrows(d, 8 * kTau));

    const AlignedShiftData r = reverse_shift(d1, kTau);
    CHECK(r.m_arrow().f() == d1.n_arrow().f());
    CHECK(verify_aligned(r, kTau));
  }
}

TEST_CASE("compose_shifts preconditions") {
  const ObjectPair a = ObjectPair::from_matrix(IntMatrix{{2}});
  const ObjectPair b = ObjectPair::from_matrix(IntMatrix{{1, 1}, {1, 1}});
  CHECK_THROWS_AS(compose_shifts(trivial_shift(a), trivial_shift(b), kTau), CompositionError);

  AlignedShiftData d = trivial_shift(a);
  // A global phase cancels out of the equations; twist one basis vector only.
  BlockUnitary psi = d.psi_x();
  psi.block(0, 0).col(0) *= std::polar(1.0, 0.7);
  const AlignedShiftData twisted(d.x_obj(), d.y_obj(), d.m_arrow(), d.n_arrow(), psi,
                                 d.psi_y(), d.lag());
  CHECK_FALSE(verify_aligned(twisted, kTau));
  CHECK_FALSE(verify_aligned_via_two_arrows(twisted, kTau));
  CHECK_THROWS_AS(compose_shifts(twisted, d, kTau), ContractError);

  BlockUnitary scaled = d.psi_x();
  scaled.block(0, 0) *= 2.0;
  const AlignedShiftData not_unitary(d.x_obj(), d.y_obj(), d.m_arrow(), d.n_arrow(), scaled,
                                     d.psi_y(), d.lag());
  CHECK_FALSE(verify_concrete_shift(not_unitary, kTau));
  CHECK_THROWS_AS(verify_aligned(not_unitary, kTau), ContractError);
  CHECK_THROWS_AS(reverse_shift(not_unitary, kTau), ContractError);
}

TEST_CASE("random unitaries on a witness: formulations agree") {
  std::mt19937_64 rng(53);
  const SEWitness w = golden_mean_pair();
  const ObjectPair x = ObjectPair::from_matrix(w.a);
  const ObjectPair y = ObjectPair::from_matrix(w.b);
  const auto m = GraphCorrespondence::from_matrix(w.r, x.index(), y.index());
  const auto n = GraphCorrespondence::from_matrix(w.s, y.index(), x.index());
  for (int k = 0; k < 20; ++k) {
    ShiftUnitaries maps;
    maps.phi_m = random_block_unitary(tensor(x.x(), m), tensor(m, y.x()), rng);
    maps.psi_y = random_block_unitary(tensor(n, m), y.x(), rng);
    const AlignedShiftData d = build_from_se(w, maps);
    CHECK(verify_concrete_shift(d, kTau));
    CHECK(verify_aligned(d, kTau) == verify_aligned_via_two_arrows(d, kTau));
    const auto a = alignment_residuals(d);
    const auto b = two_arrow_alignment_residuals(d);
    CHECK(std::abs(a.max() - b.max()) <= 1e-8);
  }
}
