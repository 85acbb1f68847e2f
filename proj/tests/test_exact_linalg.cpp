#include <doctest.h>

#include "oracles.hpp"
#include "shiftcalc/errors.hpp"
#include "shiftcalc/exact_linalg.hpp"

using namespace shiftcalc;

TEST_CASE("IntMatrix construction") {
  CHECK_THROWS_AS(IntMatrix(0, 2), ShapeError);
  CHECK_THROWS_AS(IntMatrix(2, 0), ShapeError);
  CHECK_THROWS_AS(IntMatrix::from_rows({{1, 2}, {3}}), ShapeError);
  try {
    IntMatrix::from_rows({{1, 2}, {3}});
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  const IntMatrix m{{1, 2}, {3, 4}};
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 3);
  CHECK(m.to_string() == "[[1,2],[3,4]]");
  CHECK(m.transpose() == IntMatrix{{1, 3}, {2, 4}});
  CHECK(m.entry_sum() == 10);
  CHECK(m.max_entry() == 4);
  CHECK(m.is_nonnegative());
  CHECK_FALSE(IntMatrix{{0, -1}}.is_nonnegative());
}

TEST_CASE("mat_mul") {
  CHECK(mat_mul(IntMatrix{{1, 1}, {1, 0}}, IntMatrix{{1, 1}, {1, 0}}) ==
        IntMatrix{{2, 1}, {1, 1}});
  CHECK(mat_mul(IntMatrix{{1, 1}}, IntMatrix{{1}, {1}}) == IntMatrix{{2}});
  CHECK_THROWS_AS(mat_mul(IntMatrix{{1, 1}}, IntMatrix{{1, 1}}), ShapeError);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const IntMatrix a = oracle::random_matrix(rng, 3, 3, -9, 9);
    const IntMatrix b = oracle::random_matrix(rng, 3, 3, -9, 9);
    CHECK(mat_mul(a, b) == oracle::schoolbook(a, b));
  }
}

TEST_CASE("mat_pow") {
  CHECK(mat_pow(IntMatrix{{1, 1}, {1, 0}}, 2) == IntMatrix{{2, 1}, {1, 1}});
  CHECK(mat_pow(IntMatrix{{2}}, 5) == IntMatrix{{32}});
  const IntMatrix ones{{1, 1}, {1, 1}};
  CHECK(mat_pow(ones, 3) == IntMatrix{{4, 4}, {4, 4}});
  CHECK(mat_pow(ones, 3) == oracle::repeated_power(ones, 3));
  CHECK(mat_pow(ones, 0) == IntMatrix::identity(2));
  CHECK_THROWS_AS(mat_pow(IntMatrix{{1, 2}}, 2), ShapeError);

  // No overflow: 2^200 is exact.
  Integer expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 2, 200);
  CHECK(mat_pow(IntMatrix{{2}}, 200)(0, 0) == expected);

  std::mt19937_64 rng(12);
  for (unsigned m = 0; m < 8; ++m) {
    const IntMatrix a = oracle::random_matrix(rng, 3, 3, 0, 3);
    CHECK(mat_pow(a, m) == oracle::repeated_power(a, m));
  }
}

namespace {

IntMatrix diagonal_of(const SmithDecomposition& s, std::size_t rows, std::size_t cols) {
  IntMatrix d(rows, cols);
  for (std::size_t i = 0; i < s.diagonal.size(); ++i) d(i, i) = s.diagonal[i];
  return d;
}

}  // namespace

TEST_CASE("smith_normal_form examples") {
  CHECK(smith_normal_form(IntMatrix{{0}}).diagonal == std::vector<Integer>{0});
  CHECK(smith_normal_form(IntMatrix{{-2}}).diagonal == std::vector<Integer>{2});
  CHECK(smith_normal_form(IntMatrix{{2, 4}, {6, 8}}).diagonal == std::vector<Integer>{2, 4});
  CHECK(oracle::invariant_factors(IntMatrix{{2, 4}, {6, 8}}) == std::vector<Integer>{2, 4});
}

TEST_CASE("smith_normal_form decomposition on random matrices") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 150; ++k) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    const std::size_t r = dim(rng), c = dim(rng);
    const IntMatrix m = oracle::random_matrix(rng, r, c, -6, 6);
    const SmithDecomposition s = smith_normal_form(m);
    CAPTURE(m.to_string());
    CHECK(mat_mul(mat_mul(s.left, m), s.right) == diagonal_of(s, r, c));
    CHECK(abs(determinant(s.left)) == 1);
    CHECK(abs(determinant(s.right)) == 1);
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(sgn(s.diagonal[i]) >= 0);
      if (s.diagonal[i] == 0) CHECK(s.diagonal[i + 1] == 0);
      else CHECK(mpz_divisible_p(s.diagonal[i + 1].get_mpz_t(), s.diagonal[i].get_mpz_t()));
    }
    CHECK(s.diagonal == oracle::invariant_factors(m));
  }
}

TEST_CASE("char_poly") {
  CHECK(char_poly(IntMatrix{{2}}) == IntPolynomial{-2, 1});
  CHECK(char_poly(IntMatrix{{1, 1}, {1, 1}}) == IntPolynomial{0, -2, 1});
  CHECK(char_poly(IntMatrix{{0, 1}, {1, 0}}) == IntPolynomial{-1, 0, 1});
  CHECK(char_poly(IntMatrix{{1, 1}, {1, 1}}).to_string() == "t^2 - 2t");
  CHECK_THROWS_AS(char_poly(IntMatrix{{1, 2}}), ShapeError);

  std::mt19937_64 rng(14);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 1 + k % 4;
    const IntMatrix a = oracle::random_matrix(rng, n, n, -5, 5);
    const IntPolynomial p = char_poly(a);
    CHECK(p.degree() == static_cast<int>(n));
    for (long t = -3; t <= 3; ++t) CHECK(p(Integer(t)) == oracle::char_poly_at(a, Integer(t)));
  }
}

TEST_CASE("determinant and rank") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 1 + k % 4;
    const IntMatrix a = oracle::random_matrix(rng, n, n, -4, 4);
    CHECK(determinant(a) == oracle::laplace_det(a));
  }
  CHECK(rank(IntMatrix{{1, 2}, {2, 4}}) == 1);
  CHECK(rank(IntMatrix{{0, 0}, {0, 0}}) == 0);
  CHECK(rank(IntMatrix{{0, 1}, {1, 0}}) == 2);
  CHECK(rank(IntMatrix{{1, 2, 3}}) == 1);
  CHECK(rank(IntMatrix{{0, 0, 1}, {0, 0, 2}, {1, 0, 0}}) == 2);
}

TEST_CASE("polynomials") {
  const IntPolynomial p{0, 0, -3, 1};
  CHECK(p.degree() == 3);
  CHECK(p.strip_zero_roots() == IntPolynomial{-3, 1});
  CHECK(IntPolynomial{0, 0, 0}.is_zero());
  CHECK(IntPolynomial{}.to_string() == "0");
  CHECK(IntPolynomial{1, -1}.to_string() == "-t + 1");
  CHECK(IntPolynomial{-2, 1}.to_string() == "t - 2");
  CHECK(evaluate(IntPolynomial{1, -1}, IntMatrix{{3}}) == IntMatrix{{-2}});
  CHECK(evaluate(IntPolynomial{1, 0, -1}, IntMatrix{{0, 1}, {1, 0}}) == IntMatrix{{0, 0}, {0, 0}});
}

TEST_CASE("is_essential") {
  CHECK(is_essential(IntMatrix{{2}}));
  CHECK(is_essential(IntMatrix{{1, 1}, {1, 0}}));
  CHECK_FALSE(is_essential(IntMatrix{{0}}));
  CHECK_FALSE(is_essential(IntMatrix{{1, 1}, {0, 0}}));
  CHECK_FALSE(is_essential(IntMatrix{{1, 0}, {1, 0}}));
  CHECK_THROWS_AS(is_essential(IntMatrix{{1, -1}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(is_essential(IntMatrix{{1, 1}}), ShapeError);
}
