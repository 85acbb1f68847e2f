#include <doctest.h>

#include "oracles.hpp"
#include "shiftcalc/correspondence.hpp"
#include "shiftcalc/errors.hpp"
#include "shiftcalc/shift_equivalence.hpp"

using namespace shiftcalc;

namespace {

constexpr double kTau = 1e-9;

GraphCorrespondence corr(const IntMatrix& m) { return GraphCorrespondence::from_matrix(m); }

std::size_t basis_size(const GraphCorrespondence& c) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < c.left_size(); ++v)
    for (std::size_t w = 0; w < c.right_size(); ++w) n += c.basis(v, w).size();
  return n;
}

// Random [X(r), phi] out of an elementary witness.
OneArrow random_arrow(std::mt19937_64& rng, std::uint64_t seed) {
  const IntMatrix a = oracle::random_matrix(rng, 2, 2, 1, 2);
  const SEWitness w = random_sse_chain(a, 1, seed).front();
  const ObjectPair x = ObjectPair::from_matrix(w.a);
  const ObjectPair y = ObjectPair::from_matrix(w.b);
  const auto f = GraphCorrespondence::from_matrix(w.r, x.index(), y.index());
  return OneArrow(x, y, f, random_block_unitary(tensor(x.x(), f), tensor(f, y.x()), rng));
}

}  // namespace

TEST_CASE("from_matrix") {
  const auto two = corr(IntMatrix{{2}});
  CHECK(two.block_dim(0, 0) == 2);
  const auto b = two.basis(0, 0);
  REQUIRE(b.size() == 2);
  CHECK(b[0].labels == std::vector<std::size_t>{0});
  CHECK(b[1].labels == std::vector<std::size_t>{1});
  CHECK(b[0].vertices == std::vector<std::size_t>{0, 0});

  CHECK(corr(IntMatrix{{1, 1}, {1, 0}}).total_dim() == 3);
  CHECK(corr(IntMatrix{{0, 0}, {1, 1}}).total_dim() == 2);  // zero rows are allowed
  CHECK_THROWS_AS(corr(IntMatrix{{1, -1}}), DomainError);
  CHECK_THROWS_AS(GraphCorrespondence::from_matrix(IntMatrix{{1, 1}}, {"a", "b"}), DomainError);
}

TEST_CASE("tensor dims and bases") {
  const auto x = corr(IntMatrix{{1, 1}});
  const auto y = GraphCorrespondence::from_matrix(IntMatrix{{1}, {1}}, x.right_index());
  const auto t = tensor(x, y);
  CHECK(t.block_dim(0, 0) == 2);

  const IntMatrix r{{1, 2}, {0, 3}};
  CHECK(tensor(corr(r), unit_correspondence(default_labels(2))).dims().to_int() == r);
  CHECK_THROWS_AS(tensor(corr(IntMatrix{{1, 1}}), corr(IntMatrix{{1, 1}})), ShapeError);

  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const IntMatrix rm = oracle::random_matrix(rng, 2, 2, 0, 2);
    const IntMatrix sm = oracle::random_matrix(rng, 2, 2, 0, 2);
    const auto tt = tensor(corr(rm), corr(sm));
    CHECK(tt.dims().to_int() == oracle::schoolbook(rm, sm));
    const auto counts = oracle::path_counts(rm, sm);
    std::size_t total = 0;
    for (const auto& row : counts)
      for (auto c : row) total += c;
    CHECK(basis_size(tt) == total);
  }
}

TEST_CASE("basis order is (interior vertices, labels) and index_of inverts it") {
  const auto x = corr(IntMatrix{{1, 2}, {1, 1}});
  const auto t = tensor(x, x);
  const auto b = t.basis(0, 0);
  // v=0: paths 0->0->0 (1*1 = 1) then 0->1->0 (2*1 = 2)
  REQUIRE(b.size() == 3);
  CHECK(b[0].vertices == std::vector<std::size_t>{0, 0, 0});
  CHECK(b[1].vertices == std::vector<std::size_t>{0, 1, 0});
  CHECK(b[1].labels == std::vector<std::size_t>{0, 0});
  CHECK(b[2].labels == std::vector<std::size_t>{1, 0});
  for (std::size_t k = 0; k < b.size(); ++k) {
    CHECK(t.index_of(b[k]) == k);
    CHECK(t.path_at(0, 0, k) == b[k]);
  }
  CHECK_THROWS_AS(t.index_of(EdgePath{{0, 0, 0}, {1, 0}}), ShapeError);
}

TEST_CASE("associator is the identity") {
  const auto two = corr(IntMatrix{{2}});
  const auto left = tensor(tensor(two, two), two);
  const auto right = tensor(two, tensor(two, two));
  CHECK(left == right);
  const BlockUnitary assoc = canonical_assoc(two, two, two);
  CHECK(assoc.block(0, 0).rows() == 8);
  CHECK(assoc.block(0, 0).isApprox(ComplexMatrix::Identity(8, 8)));
  // Explicit chase: the 8 paths are the label triples in mixed radix order.
  const auto b = left.basis(0, 0);
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(b[k].labels == std::vector<std::size_t>{k / 4, (k / 2) % 2, k % 2});
}

TEST_CASE("block unitaries compose and tensor") {
  std::mt19937_64 rng(42);
  const auto p = corr(IntMatrix{{2, 1}, {1, 3}});
  const auto q = GraphCorrespondence::from_matrix(IntMatrix{{1, 2}, {2, 0}}, p.right_index());
  const BlockUnitary u = random_block_unitary(p, p, rng);
  const BlockUnitary v = random_block_unitary(p, p, rng);
  const BlockUnitary w = random_block_unitary(p, p, rng);
  CHECK(u.is_unitary(kTau));
  CHECK(distance(compose_unitaries(u, u.adjoint()), BlockUnitary::identity(p)) <= kTau);
  CHECK(compose_unitaries(u, v).is_unitary(2 * kTau));
  CHECK(distance(compose_unitaries(compose_unitaries(u, v), w),
                 compose_unitaries(u, compose_unitaries(v, w))) <= 4 * kTau);

  const BlockUnitary iq = BlockUnitary::identity(q);
  CHECK(distance(tensor_unitaries(BlockUnitary::identity(p), iq),
                 BlockUnitary::identity(tensor(p, q))) == 0.0);

  const BlockUnitary a = random_block_unitary(q, q, rng);
  const BlockUnitary t = tensor_unitaries(u, a);
  CHECK(t.is_unitary(kTau));
  // Inner products of basis vectors are preserved: columns stay orthonormal,
  // and each column is the Kronecker product of the factor columns.
  const auto tp = tensor(p, q);
  for (std::size_t v0 = 0; v0 < 2; ++v0)
    for (std::size_t w0 = 0; w0 < 2; ++w0) {
      const ComplexMatrix& blk = t.block(v0, w0);
      CHECK((blk.adjoint() * blk - ComplexMatrix::Identity(blk.rows(), blk.cols())).norm() <=
            kTau);
      const auto basis = tp.basis(v0, w0);
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const auto& bi = basis[i];
          const auto& bj = basis[j];
          Complex expected = 0.0;
          if (bi.vertices[1] == bj.vertices[1]) {
            const std::size_t u0 = bi.vertices[1];
            const EdgePath pi{{v0, u0}, {bi.labels[0]}}, pj{{v0, u0}, {bj.labels[0]}};
            const EdgePath qi{{u0, w0}, {bi.labels[1]}}, qj{{u0, w0}, {bj.labels[1]}};
            expected = u.block(v0, u0)(p.index_of(pi), p.index_of(pj)) *
                       a.block(u0, w0)(q.index_of(qi), q.index_of(qj));
          }
          CHECK(std::abs(blk(i, j) - expected) <= kTau);
        }
    }

  // Interchange law.
  const BlockUnitary b2 = random_block_unitary(q, q, rng);
  CHECK(distance(tensor_unitaries(compose_unitaries(u, v), compose_unitaries(a, b2)),
                 compose_unitaries(tensor_unitaries(u, a), tensor_unitaries(v, b2))) <=
        4 * kTau);

  CHECK_THROWS_AS(compose_unitaries(u, a), ShapeError);
}

TEST_CASE("ObjectPair requires an essential self-correspondence") {
  CHECK_NOTHROW(ObjectPair::from_matrix(IntMatrix{{1, 1}, {1, 0}}));
  CHECK_THROWS_AS(ObjectPair::from_matrix(IntMatrix{{1, 0}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(ObjectPair(corr(IntMatrix{{1, 1}})), DomainError);
}

TEST_CASE("identity and power arrows") {
  const ObjectPair obj = ObjectPair::from_matrix(IntMatrix{{1, 1}, {1, 0}});
  const OneArrow id = identity_arrow(obj);
  CHECK(id.f().dims().to_int() == IntMatrix::identity(2));
  CHECK(id.phi().is_unitary(0.0));
  const OneArrow p1 = power_arrow(obj, 1);
  CHECK(p1.f() == obj.x());
  CHECK(power_arrow(obj, 3).f().dims().to_int() == mat_pow(obj.matrix(), 3));
  CHECK(power_arrow(obj, 0).f() == id.f());

  // power_arrow(m) . power_arrow(n) ~ power_arrow(m + n) through the identity.
  const OneArrow composed = compose_one_arrows(power_arrow(obj, 2), power_arrow(obj, 1));
  const OneArrow p3 = power_arrow(obj, 3);
  CHECK(check_two_arrow(BlockUnitary::canonical(composed.f(), p3.f()), composed, p3, kTau));
}

TEST_CASE("2-arrows: unit laws, invertibility, intertwiner") {
  std::mt19937_64 rng(43);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const OneArrow f = random_arrow(rng, seed);
    CHECK(check_two_arrow(BlockUnitary::identity(f.f()), f, f, kTau));

    const OneArrow lu = compose_one_arrows(identity_arrow(f.left()), f);
    const OneArrow ru = compose_one_arrows(f, identity_arrow(f.right()));
    CHECK(lu.f().dims() == f.f().dims());
    CHECK(check_two_arrow(BlockUnitary::canonical(lu.f(), f.f()), lu, f, kTau));
    CHECK(check_two_arrow(BlockUnitary::canonical(ru.f(), f.f()), ru, f, kTau));

    const BlockUnitary psi = random_block_unitary(f.f(), f.f(), rng);
    const OneArrow g = transport_arrow(f, psi);
    CHECK(check_two_arrow(psi, f, g, kTau));
    CHECK(check_two_arrow(psi.adjoint(), g, f, kTau));

    // Vertical composition of 2-arrows.
    const BlockUnitary chi = random_block_unitary(g.f(), g.f(), rng);
    const OneArrow h = transport_arrow(g, chi);
    CHECK(check_two_arrow(compose_unitaries(psi, chi), f, h, 2 * kTau));

    const OneArrow before = compose_one_arrows(power_arrow(f.left(), 1), f);
    const OneArrow after = compose_one_arrows(f, power_arrow(f.right(), 1));
    CHECK(check_two_arrow(f.phi(), before, after, kTau));
    CHECK(distance(intertwine_power(f, 1), f.phi()) == 0.0);

    const OneArrow before2 = compose_one_arrows(power_arrow(f.left(), 2), f);
    const OneArrow after2 = compose_one_arrows(f, power_arrow(f.right(), 2));
    CHECK(check_two_arrow(intertwine_power(f, 2), before2, after2, 2 * kTau));
  }
}

TEST_CASE("a twisted block is not a 2-arrow") {
  std::mt19937_64 rng(44);
  int refuted = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OneArrow f = random_arrow(rng, seed);
    BlockUnitary psi = BlockUnitary::identity(f.f());
    for (std::size_t v = 0; v < f.f().left_size(); ++v)
      for (std::size_t w = 0; w < f.f().right_size(); ++w)
        if (f.f().block_dim(v, w) > 0) {
          psi.block(v, w) *= std::polar(1.0, 1.0);
          v = f.f().left_size() - 1;
          break;
        }
    if (!check_two_arrow(psi, f, f, kTau)) ++refuted;
  }
  CHECK(refuted > 0);
}

TEST_CASE("2-arrow shape checks") {
  std::mt19937_64 rng(45);
  const OneArrow f = random_arrow(rng, 1);
  const ObjectPair other = ObjectPair::from_matrix(IntMatrix{{5}});
  const OneArrow g = identity_arrow(other);
  CHECK_THROWS_AS(two_arrow_residual(BlockUnitary::identity(f.f()), f, g), ShapeError);
  CHECK_THROWS_AS(compose_one_arrows(f, g), ShapeError);
}
