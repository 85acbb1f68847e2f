#pragma once

// Finite graph correspondences X(R) and the bicategory cells built on them.
//
// A correspondence over index sets V (left) and W (right) is stored as a chain
// of factor count matrices F_1 ... F_k whose product is its dimension matrix.
// Block (v, w) has the orthonormal basis of edge paths
//   v = v_0 -a_1-> v_1 -a_2-> ... -a_k-> v_k = w,   0 <= a_i < F_i[v_{i-1}][v_i],
// ordered lexicographically by interior vertices (v_1, ..., v_{k-1}) and then
// by labels (a_1, ..., a_k). Tensoring concatenates factor chains, so
// (X (x) Y) (x) Z and X (x) (Y (x) Z) are the same object and the associator is
// the identity.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shiftcalc/exact_linalg.hpp"

namespace shiftcalc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Labels = std::vector<std::string>;

/// Default unitarity / commutation tolerance.
inline constexpr double kDefaultTolerance = 1e-9;

/// "0", "1", ..., "n-1"
Labels default_labels(std::size_t n);

/// Small dense matrix of nonnegative counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  /// Throws DomainError on negative or oversized entries.
  static CountMatrix from_int(const IntMatrix& m);
  static CountMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::size_t operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::size_t sum() const;
  IntMatrix to_int() const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
  friend CountMatrix operator*(const CountMatrix& a, const CountMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> data_;
};

/// Basis element of a block: vertices v_0..v_k and labels a_1..a_k.
struct EdgePath {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> labels;

  friend bool operator==(const EdgePath&, const EdgePath&) = default;
  friend auto operator<=>(const EdgePath&, const EdgePath&) = default;
};

class GraphCorrespondence {
 public:
  /// X(r) over the given labels (defaults 0..n-1). Throws DomainError on
  /// negative entries or label-count mismatch.
  static GraphCorrespondence from_matrix(const IntMatrix& r, Labels left = {},
                                         Labels right = {});
  /// Chain of factors; consecutive factors must be composable.
  static GraphCorrespondence from_factors(std::vector<CountMatrix> factors,
                                          Labels left, Labels right);

  const Labels& left_index() const { return left_; }
  const Labels& right_index() const { return right_; }
  std::size_t left_size() const { return left_.size(); }
  std::size_t right_size() const { return right_.size(); }
  const std::vector<CountMatrix>& factors() const { return factors_; }
  const CountMatrix& dims() const { return dims_; }
  std::size_t block_dim(std::size_t v, std::size_t w) const { return dims_(v, w); }
  std::size_t total_dim() const { return dims_.sum(); }

  /// Basis of block (v, w) in canonical order.
  std::vector<EdgePath> basis(std::size_t v, std::size_t w) const;
  /// k-th basis path of block (v, w).
  EdgePath path_at(std::size_t v, std::size_t w, std::size_t k) const;
  /// Position of a path inside its block. Throws ShapeError for paths that
  /// are not basis elements.
  std::size_t index_of(const EdgePath& p) const;

  /// Same labels on both sides and same dimension matrix. Unitaries only need
  /// this much agreement between their domain and codomain.
  bool same_shape(const GraphCorrespondence& other) const {
    return left_ == other.left_ && right_ == other.right_ && dims_ == other.dims_;
  }
  friend bool operator==(const GraphCorrespondence& a, const GraphCorrespondence& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.factors_ == b.factors_;
  }

 private:
  struct Block {
    std::vector<std::vector<std::size_t>> interiors;  // sorted
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> counts;
  };

  GraphCorrespondence(std::vector<CountMatrix> factors, Labels left, Labels right);
  const Block& block(std::size_t v, std::size_t w) const {
    return blocks_[v * right_.size() + w];
  }

  Labels left_;
  Labels right_;
  std::vector<CountMatrix> factors_;
  CountMatrix dims_;
  std::vector<Block> blocks_;
};

/// Interior tensor product. Throws ShapeError unless x's right index equals
/// y's left index.
GraphCorrespondence tensor(const GraphCorrespondence& x, const GraphCorrespondence& y);

/// X(I) over the given index set: the unit for tensoring.
GraphCorrespondence unit_correspondence(const Labels& index);

/// x^{(x) m}; m = 0 gives the unit correspondence.
GraphCorrespondence tensor_power(const GraphCorrespondence& x, unsigned m);

/// Bimodule map between two correspondences of the same shape, one complex
/// matrix per (v, w) block. Construction checks shapes only; unitarity is a
/// separate predicate.
class BlockUnitary {
 public:
  BlockUnitary(GraphCorrespondence source, GraphCorrespondence target,
               std::vector<ComplexMatrix> blocks);

  static BlockUnitary identity(const GraphCorrespondence& c);
  /// Identity matrix on each block, identifying the k-th basis vector of the
  /// source block with the k-th basis vector of the target block.
  static BlockUnitary canonical(const GraphCorrespondence& source,
                                const GraphCorrespondence& target);

  const GraphCorrespondence& source() const { return source_; }
  const GraphCorrespondence& target() const { return target_; }
  const ComplexMatrix& block(std::size_t v, std::size_t w) const {
    return blocks_[v * source_.right_size() + w];
  }
  ComplexMatrix& block(std::size_t v, std::size_t w) {
    return blocks_[v * source_.right_size() + w];
  }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }

  BlockUnitary adjoint() const;
  /// Max over blocks of max(|U*U - I|, |UU* - I|) in operator norm.
  double unitarity_defect() const;
  bool is_unitary(double tol) const { return unitarity_defect() <= tol; }
  /// Same matrices, re-read against other correspondences of the same shape.
  BlockUnitary rebased(const GraphCorrespondence& source,
                       const GraphCorrespondence& target) const;

  friend bool operator==(const BlockUnitary& a, const BlockUnitary& b);

 private:
  GraphCorrespondence source_;
  GraphCorrespondence target_;
  std::vector<ComplexMatrix> blocks_;
};

double operator_norm(const ComplexMatrix& m);

/// Largest blockwise operator-norm difference. Throws ShapeError unless the
/// two maps have the same shape.
double distance(const BlockUnitary& a, const BlockUnitary& b);

/// `second` after `first`. Throws ShapeError unless first's target has the
/// shape of second's source.
BlockUnitary compose_unitaries(const BlockUnitary& first, const BlockUnitary& second);

/// u1 (x) u2 on the tensor products of sources and targets.
BlockUnitary tensor_unitaries(const BlockUnitary& u1, const BlockUnitary& u2);

/// (x (x) y) (x) z -> x (x) (y (x) z).
BlockUnitary canonical_assoc(const GraphCorrespondence& x, const GraphCorrespondence& y,
                             const GraphCorrespondence& z);

/// Random block unitary (Haar-distributed blocks) between same-shape
/// correspondences.
BlockUnitary random_block_unitary(const GraphCorrespondence& source,
                                  const GraphCorrespondence& target,
                                  std::mt19937_64& rng);

/// (A, X): an index set with an essential self-correspondence.
class ObjectPair {
 public:
  /// Throws DomainError when the correspondence is not essential or not a
  /// self-correspondence over one index set.
  explicit ObjectPair(GraphCorrespondence x);
  static ObjectPair from_matrix(const IntMatrix& a, Labels index = {});

  const GraphCorrespondence& x() const { return x_; }
  const Labels& index() const { return x_.left_index(); }
  IntMatrix matrix() const { return x_.dims().to_int(); }

  friend bool operator==(const ObjectPair& a, const ObjectPair& b) {
    return a.x_.same_shape(b.x_);
  }

 private:
  GraphCorrespondence x_;
};

/// [F, phi] : (B, Y) <- (A, X), with F a B-A correspondence and
/// phi : Y (x) F -> F (x) X. `left` is (B, Y), `right` is (A, X).
class OneArrow {
 public:
  /// Throws ShapeError when F or phi do not fit the objects. phi is rebased
  /// onto the canonical tensor products.
  OneArrow(ObjectPair left, ObjectPair right, GraphCorrespondence f, BlockUnitary phi);

  const ObjectPair& left() const { return left_; }
  const ObjectPair& right() const { return right_; }
  const GraphCorrespondence& f() const { return f_; }
  const BlockUnitary& phi() const { return phi_; }

 private:
  ObjectPair left_;
  ObjectPair right_;
  GraphCorrespondence f_;
  BlockUnitary phi_;
};

/// [G (x) F, (1_G (x) phi_F) o (phi_G (x) 1_F)].
OneArrow compose_one_arrows(const OneArrow& g, const OneArrow& f);

/// [A, 1_X]: the unit correspondence with the canonical X (x) A -> A (x) X.
OneArrow identity_arrow(const ObjectPair& obj);

/// [X^{(x) m}, 1]; m = 0 gives identity_arrow.
OneArrow power_arrow(const ObjectPair& obj, unsigned m);

/// Largest blockwise |(psi (x) 1_X) o phi_F - phi_G o (1_Y (x) psi)|.
/// Throws ShapeError if f and g are not parallel or psi does not map F to G.
double two_arrow_residual(const BlockUnitary& psi, const OneArrow& f, const OneArrow& g);

/// psi is unitary within tol and the 2-arrow square commutes within tol.
bool check_two_arrow(const BlockUnitary& psi, const OneArrow& f, const OneArrow& g,
                     double tol);

/// Y^{(x) n} (x) F -> F (x) X^{(x) n}, obtained by moving F leftward past
/// each copy of Y with phi_F. It is a 2-arrow
/// [Y^n, 1] (x) [F, phi_F] -> [F, phi_F] (x) [X^n, 1]; n = 1 gives phi_F.
BlockUnitary intertwine_power(const OneArrow& f, unsigned n);

/// Moves [F, phi_F] along psi : F -> G, giving
/// [G, (psi (x) 1_X) o phi_F o (1_Y (x) psi)^*]. psi is then a 2-arrow from f
/// to the result.
OneArrow transport_arrow(const OneArrow& f, const BlockUnitary& psi);

}  // namespace shiftcalc
