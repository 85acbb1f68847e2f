#include "shiftcalc/exact_linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0)
    throw ShapeError("matrix dimensions must be positive");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ShapeError("ragged matrix literal");
    std::size_t j = 0;
    for (long v : row) (*this)(i, j++) = v;
    ++i;
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw ShapeError("matrix dimensions must be positive");
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_)
      throw ShapeError("row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(m.cols_));
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IntMatrix::is_nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Integer& x) { return sgn(x) >= 0; });
}

bool IntMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Integer& x) { return sgn(x) == 0; });
}

Integer IntMatrix::max_entry() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

Integer IntMatrix::entry_sum() const {
  Integer s = 0;
  for (const auto& x : entries_) s += x;
  return s;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool operator<(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
  if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(),
                                      b.entries_.begin(), b.entries_.end());
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

void require_same_shape(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("shape mismatch: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

void require_square(const IntMatrix& a, const char* what) {
  if (!a.is_square())
    throw ShapeError(std::string(what) + " requires a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  require_same_shape(a, b);
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  require_same_shape(a, b);
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

IntMatrix operator*(const Integer& k, const IntMatrix& a) {
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = k * a(i, j);
  return c;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix mat_pow(const IntMatrix& a, unsigned m) {
  require_square(a, "mat_pow");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = a;
  while (m > 0) {
    if (m & 1u) result = mat_mul(result, base);
    m >>= 1u;
    if (m > 0) base = mat_mul(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients)
    : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients)
    : IntPolynomial(std::vector<Integer>(coefficients.begin(),
                                         coefficients.end())) {}

Integer IntPolynomial::coefficient(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Integer(0);
}

Integer IntPolynomial::operator()(const Integer& t) const {
  Integer acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * t + *it;
  return acc;
}

IntPolynomial IntPolynomial::strip_zero_roots() const {
  std::size_t k = 0;
  while (k < coeffs_.size() && sgn(coeffs_[k]) == 0) ++k;
  return IntPolynomial(std::vector<Integer>(coeffs_.begin() + k, coeffs_.end()));
}

std::string IntPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    const Integer& c = coeffs_[d];
    if (sgn(c) == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (d == 0 || mag != 1) os << mag.get_str();
    if (d >= 1) os << 't';
    if (d >= 2) os << '^' << d;
  }
  return os.str();
}

IntMatrix evaluate(const IntPolynomial& p, const IntMatrix& a) {
  require_square(a, "evaluate");
  const std::size_t n = a.rows();
  IntMatrix acc(n, n);
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = mat_mul(acc, a);
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct Reducer {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < d.cols(); ++c) std::swap(d(i, c), d(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < d.rows(); ++r) std::swap(d(r, i), d(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
  }
  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const Integer& k) {
    for (std::size_t c = 0; c < d.cols(); ++c) d(i, c) += k * d(j, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) += k * u(j, c);
  }
  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const Integer& k) {
    for (std::size_t r = 0; r < d.rows(); ++r) d(r, i) += k * d(r, j);
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, i) += k * v(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < d.cols(); ++c) d(i, c) = -d(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Reducer r{m, IntMatrix::identity(rows), IntMatrix::identity(cols)};
  const std::size_t diag_len = std::min(rows, cols);

  for (std::size_t t = 0; t < diag_len; ++t) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing block; scanning row-major
      // with strict comparison gives the (row, col) tie-break.
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (sgn(r.d(i, j)) == 0) continue;
          Integer a = abs(r.d(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) goto done;
      r.swap_rows(t, pi);
      r.swap_cols(t, pj);

      bool clean = true;
      const Integer pivot = r.d(t, t);
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(r.d(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), r.d(i, t).get_mpz_t(), pivot.get_mpz_t());
        r.add_row(i, t, -q);
        if (sgn(r.d(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(r.d(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), r.d(t, j).get_mpz_t(), pivot.get_mpz_t());
        r.add_col(j, t, -q);
        if (sgn(r.d(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      // Pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(r.d(i, j).get_mpz_t(), pivot.get_mpz_t())) {
            r.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (sgn(r.d(t, t)) < 0) r.negate_row(t);
  }
done:
  SmithDecomposition out{std::move(r.u), {}, std::move(r.v)};
  out.diagonal.reserve(diag_len);
  for (std::size_t t = 0; t < diag_len; ++t) out.diagonal.push_back(r.d(t, t));
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial, determinant, rank

IntPolynomial char_poly(const IntMatrix& a) {
  require_square(a, "char_poly");
  const std::size_t n = a.rows();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
    mk = mat_mul(a, mk);
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    IntMatrix am = mat_mul(a, mk);
    Integer tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), k);
    c[n - k] = -q;
  }
  return IntPolynomial(std::move(c));
}

namespace {

// In-place Bareiss elimination with row pivoting. Returns the rank; `sign`
// receives the permutation parity so the determinant of a full-rank square
// input is sign * m(n-1, n-1).
std::size_t bareiss(IntMatrix& m, int& sign) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  sign = 1;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer num = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

}  // namespace

Integer determinant(const IntMatrix& a) {
  require_square(a, "determinant");
  IntMatrix m = a;
  int sign = 1;
  const std::size_t r = bareiss(m, sign);
  if (r < a.rows()) return 0;
  return sign * m(a.rows() - 1, a.cols() - 1);
}

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  int sign = 1;
  return bareiss(m, sign);
}

bool is_essential(const IntMatrix& a) {
  require_square(a, "is_essential");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) < 0)
        throw DomainError("negative entry " + a(i, j).get_str() + " at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    bool row_nonzero = false, col_nonzero = false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      row_nonzero = row_nonzero || sgn(a(i, j)) != 0;
      col_nonzero = col_nonzero || sgn(a(j, i)) != 0;
    }
    if (!row_nonzero || !col_nonzero) return false;
  }
  return true;
}

}  // namespace shiftcalc
