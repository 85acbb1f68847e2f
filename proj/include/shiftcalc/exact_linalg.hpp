#pragma once

// Exact integer matrices, polynomials and normal forms.
//
// Everything here is arbitrary precision (GMP) and value-semantic.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace shiftcalc {

using Integer = mpz_class;

class IntMatrix {
 public:
  /// Zero matrix. Both dimensions must be at least one.
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Integer& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const std::vector<Integer>& entries() const { return entries_; }

  bool is_nonnegative() const;
  bool is_zero() const;
  Integer max_entry() const;
  Integer entry_sum() const;
  IntMatrix transpose() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  /// Lexicographic on (rows, cols, row-major entries).
  friend bool operator<(const IntMatrix& a, const IntMatrix& b);

  /// "[[1,2],[3,4]]"
  std::string to_string() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> entries_;
};

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const Integer& c, const IntMatrix& a);

/// Exact product. Throws ShapeError when a.cols() != b.rows().
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

/// a^m by repeated squaring; a^0 is the identity. Throws ShapeError for
/// non-square input.
IntMatrix mat_pow(const IntMatrix& a, unsigned m);

/// Integer polynomial, coefficients lowest degree first. The zero polynomial
/// has no coefficients; otherwise the leading coefficient is nonzero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Integer>& coefficients() const { return coeffs_; }
  Integer coefficient(std::size_t i) const;
  Integer operator()(const Integer& t) const;

  /// Divide out the largest power of t dividing this polynomial.
  IntPolynomial strip_zero_roots() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// "t^2 - 2t" style rendering in the variable t.
  std::string to_string() const;

 private:
  std::vector<Integer> coeffs_;
};

/// p(A) via Horner's rule.
IntMatrix evaluate(const IntPolynomial& p, const IntMatrix& a);

struct SmithDecomposition {
  IntMatrix left;                 // U, unimodular, rows x rows
  std::vector<Integer> diagonal;  // d_1 | d_2 | ..., min(rows, cols) entries
  IntMatrix right;                // V, unimodular, cols x cols
};

/// U * m * V == diag(diagonal) padded with zeros.
///
/// Pivots are chosen by smallest absolute value among the remaining entries
/// with ties broken by (row, col), so the result is reproducible.
SmithDecomposition smith_normal_form(const IntMatrix& m);

/// det(tI - a), via Faddeev-LeVerrier (every division is exact over Z).
IntPolynomial char_poly(const IntMatrix& a);

/// Determinant by fraction-free Bareiss elimination.
Integer determinant(const IntMatrix& a);

/// Rank over Q by fraction-free Bareiss elimination.
std::size_t rank(const IntMatrix& a);

/// No zero row and no zero column. Throws DomainError on negative entries,
/// ShapeError on non-square input.
bool is_essential(const IntMatrix& a);

}  // namespace shiftcalc
