#include "shiftcalc/correspondence.hpp"

#include <algorithm>
#include <functional>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

Labels default_labels(std::size_t n) {
  Labels out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// CountMatrix

CountMatrix CountMatrix::from_int(const IntMatrix& m) {
  CountMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Integer& x = m(i, j);
      if (sgn(x) < 0)
        throw DomainError("negative entry " + x.get_str() + " at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      if (!x.fits_uint_p())
        throw DomainError("entry " + x.get_str() + " too large for a block dimension");
      c(i, j) = x.get_ui();
    }
  return c;
}

CountMatrix CountMatrix::identity(std::size_t n) {
  CountMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) c(i, i) = 1;
  return c;
}

std::size_t CountMatrix::sum() const {
  std::size_t s = 0;
  for (auto x : data_) s += x;
  return s;
}

IntMatrix CountMatrix::to_int() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(i, j) = static_cast<unsigned long>((*this)(i, j));
  return m;
}

CountMatrix operator*(const CountMatrix& a, const CountMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("count matrix product shape mismatch");
  CountMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

// ---------------------------------------------------------------------------
// GraphCorrespondence

GraphCorrespondence::GraphCorrespondence(std::vector<CountMatrix> factors,
                                         Labels left, Labels right)
    : left_(std::move(left)), right_(std::move(right)), factors_(std::move(factors)) {
  if (factors_.empty()) throw ShapeError("correspondence needs at least one factor");
  if (factors_.front().rows() != left_.size())
    throw DomainError("left index has " + std::to_string(left_.size()) +
                      " labels, matrix has " +
                      std::to_string(factors_.front().rows()) + " rows");
  if (factors_.back().cols() != right_.size())
    throw DomainError("right index has " + std::to_string(right_.size()) +
                      " labels, matrix has " +
                      std::to_string(factors_.back().cols()) + " columns");
  dims_ = factors_.front();
  for (std::size_t i = 1; i < factors_.size(); ++i) {
    if (factors_[i - 1].cols() != factors_[i].rows())
      throw ShapeError("factor chain is not composable at position " +
                       std::to_string(i));
    dims_ = dims_ * factors_[i];
  }

  const std::size_t k = factors_.size();
  blocks_.resize(left_.size() * right_.size());
  for (std::size_t v = 0; v < left_.size(); ++v)
    for (std::size_t w = 0; w < right_.size(); ++w) {
      Block& blk = blocks_[v * right_.size() + w];
      std::vector<std::size_t> interior;
      std::size_t offset = 0;
      // Depth-first in lexicographic order, pruning zero-count prefixes.
      std::function<void(std::size_t, std::size_t, std::size_t)> walk =
          [&](std::size_t depth, std::size_t prev, std::size_t count) {
            if (depth + 1 == k) {
              const std::size_t last = factors_[depth](prev, w);
              if (last == 0) return;
              blk.interiors.push_back(interior);
              blk.offsets.push_back(offset);
              blk.counts.push_back(count * last);
              offset += count * last;
              return;
            }
            const CountMatrix& f = factors_[depth];
            for (std::size_t next = 0; next < f.cols(); ++next) {
              if (f(prev, next) == 0) continue;
              interior.push_back(next);
              walk(depth + 1, next, count * f(prev, next));
              interior.pop_back();
            }
          };
      walk(0, v, 1);
    }
}

GraphCorrespondence GraphCorrespondence::from_matrix(const IntMatrix& r, Labels left,
                                                     Labels right) {
  if (left.empty()) left = default_labels(r.rows());
  if (right.empty()) right = default_labels(r.cols());
  return GraphCorrespondence({CountMatrix::from_int(r)}, std::move(left),
                             std::move(right));
}

GraphCorrespondence GraphCorrespondence::from_factors(std::vector<CountMatrix> factors,
                                                      Labels left, Labels right) {
  return GraphCorrespondence(std::move(factors), std::move(left), std::move(right));
}

std::vector<EdgePath> GraphCorrespondence::basis(std::size_t v, std::size_t w) const {
  std::vector<EdgePath> out;
  const std::size_t d = block_dim(v, w);
  out.reserve(d);
  for (std::size_t k = 0; k < d; ++k) out.push_back(path_at(v, w, k));
  return out;
}

EdgePath GraphCorrespondence::path_at(std::size_t v, std::size_t w, std::size_t k) const {
  if (v >= left_size() || w >= right_size() || k >= block_dim(v, w))
    throw ShapeError("basis index out of range");
  const Block& blk = block(v, w);
  const auto it = std::upper_bound(blk.offsets.begin(), blk.offsets.end(), k);
  const std::size_t t = static_cast<std::size_t>(it - blk.offsets.begin()) - 1;
  EdgePath p;
  p.vertices.push_back(v);
  p.vertices.insert(p.vertices.end(), blk.interiors[t].begin(), blk.interiors[t].end());
  p.vertices.push_back(w);
  const std::size_t nf = factors_.size();
  p.labels.assign(nf, 0);
  std::size_t rem = k - blk.offsets[t];
  for (std::size_t i = nf; i-- > 0;) {
    const std::size_t radix = factors_[i](p.vertices[i], p.vertices[i + 1]);
    p.labels[i] = rem % radix;
    rem /= radix;
  }
  return p;
}

std::size_t GraphCorrespondence::index_of(const EdgePath& p) const {
  const std::size_t nf = factors_.size();
  if (p.vertices.size() != nf + 1 || p.labels.size() != nf)
    throw ShapeError("path length does not match the factor chain");
  const std::size_t v = p.vertices.front(), w = p.vertices.back();
  if (v >= left_size() || w >= right_size()) throw ShapeError("path endpoint out of range");
  const Block& blk = block(v, w);
  const std::vector<std::size_t> interior(p.vertices.begin() + 1, p.vertices.end() - 1);
  const auto it = std::lower_bound(blk.interiors.begin(), blk.interiors.end(), interior);
  if (it == blk.interiors.end() || *it != interior) throw ShapeError("path is not a basis element");
  std::size_t rem = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    const std::size_t radix = factors_[i](p.vertices[i], p.vertices[i + 1]);
    if (p.labels[i] >= radix) throw ShapeError("edge label out of range");
    rem = rem * radix + p.labels[i];
  }
  return blk.offsets[static_cast<std::size_t>(it - blk.interiors.begin())] + rem;
}

GraphCorrespondence tensor(const GraphCorrespondence& x, const GraphCorrespondence& y) {
  if (x.right_index() != y.left_index())
    throw ShapeError("tensor: right index of the first factor does not match "
                     "left index of the second");
  std::vector<CountMatrix> f = x.factors();
  f.insert(f.end(), y.factors().begin(), y.factors().end());
  return GraphCorrespondence::from_factors(std::move(f), x.left_index(), y.right_index());
}

GraphCorrespondence unit_correspondence(const Labels& index) {
  return GraphCorrespondence::from_factors({CountMatrix::identity(index.size())}, index,
                                           index);
}

GraphCorrespondence tensor_power(const GraphCorrespondence& x, unsigned m) {
  if (m == 0) return unit_correspondence(x.left_index());
  GraphCorrespondence out = x;
  for (unsigned i = 1; i < m; ++i) out = tensor(out, x);
  return out;
}

// ---------------------------------------------------------------------------
// BlockUnitary

BlockUnitary::BlockUnitary(GraphCorrespondence source, GraphCorrespondence target,
                           std::vector<ComplexMatrix> blocks)
    : source_(std::move(source)), target_(std::move(target)), blocks_(std::move(blocks)) {
  if (!source_.same_shape(target_))
    throw ShapeError("unitary source and target have different shapes");
  const std::size_t nv = source_.left_size(), nw = source_.right_size();
  if (blocks_.size() != nv * nw)
    throw ShapeError("expected " + std::to_string(nv * nw) + " blocks, got " +
                     std::to_string(blocks_.size()));
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nw; ++w) {
      const auto& b = blocks_[v * nw + w];
      const auto d = static_cast<Eigen::Index>(source_.block_dim(v, w));
      if (b.rows() != d || b.cols() != d)
        throw ShapeError("block (" + source_.left_index()[v] + "," +
                         source_.right_index()[w] + ") must be " + std::to_string(d) +
                         "x" + std::to_string(d));
    }
}

BlockUnitary BlockUnitary::identity(const GraphCorrespondence& c) {
  return canonical(c, c);
}

BlockUnitary BlockUnitary::canonical(const GraphCorrespondence& source,
                                     const GraphCorrespondence& target) {
  if (!source.same_shape(target))
    throw ShapeError("canonical identification needs equal shapes");
  std::vector<ComplexMatrix> blocks;
  for (std::size_t v = 0; v < source.left_size(); ++v)
    for (std::size_t w = 0; w < source.right_size(); ++w) {
      const auto d = static_cast<Eigen::Index>(source.block_dim(v, w));
      blocks.push_back(ComplexMatrix::Identity(d, d));
    }
  return BlockUnitary(source, target, std::move(blocks));
}

BlockUnitary BlockUnitary::adjoint() const {
  std::vector<ComplexMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return BlockUnitary(target_, source_, std::move(out));
}

double BlockUnitary::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() == 0) continue;
    const auto id = ComplexMatrix::Identity(b.rows(), b.cols());
    worst = std::max(worst, operator_norm(b.adjoint() * b - id));
    worst = std::max(worst, operator_norm(b * b.adjoint() - id));
  }
  return worst;
}

BlockUnitary BlockUnitary::rebased(const GraphCorrespondence& source,
                                   const GraphCorrespondence& target) const {
  if (!source.same_shape(source_) || !target.same_shape(target_))
    throw ShapeError("cannot rebase a unitary onto differently shaped correspondences");
  return BlockUnitary(source, target, blocks_);
}

bool operator==(const BlockUnitary& a, const BlockUnitary& b) {
  if (!(a.source_ == b.source_) || !(a.target_ == b.target_)) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i)
    if (a.blocks_[i] != b.blocks_[i]) return false;
  return true;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double distance(const BlockUnitary& a, const BlockUnitary& b) {
  if (!a.source().same_shape(b.source()) || !a.target().same_shape(b.target()))
    throw ShapeError("distance between differently shaped maps");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i)
    worst = std::max(worst, operator_norm(a.blocks()[i] - b.blocks()[i]));
  return worst;
}

BlockUnitary compose_unitaries(const BlockUnitary& first, const BlockUnitary& second) {
  if (!first.target().same_shape(second.source()))
    throw ShapeError("compose: target of the first map does not match source of the second");
  std::vector<ComplexMatrix> out;
  out.reserve(first.blocks().size());
  for (std::size_t i = 0; i < first.blocks().size(); ++i)
    out.push_back(second.blocks()[i] * first.blocks()[i]);
  return BlockUnitary(first.source(), second.target(), std::move(out));
}

namespace {

// For block (v, w) of tensor(x, y): position of each basis vector as a
// function of (u, i, j) where the path splits at middle vertex u into the
// i-th basis path of x(v, u) and the j-th of y(u, w).
std::vector<std::vector<std::size_t>> split_positions(const GraphCorrespondence& xy,
                                                      const GraphCorrespondence& x,
                                                      const GraphCorrespondence& y,
                                                      std::size_t v, std::size_t w) {
  const std::size_t kx = x.factors().size();
  std::vector<std::vector<std::size_t>> pos(x.right_size());
  for (std::size_t u = 0; u < x.right_size(); ++u)
    pos[u].assign(x.block_dim(v, u) * y.block_dim(u, w), 0);
  const std::size_t d = xy.block_dim(v, w);
  for (std::size_t k = 0; k < d; ++k) {
    const EdgePath p = xy.path_at(v, w, k);
    EdgePath px{{p.vertices.begin(), p.vertices.begin() + kx + 1},
                {p.labels.begin(), p.labels.begin() + kx}};
    EdgePath py{{p.vertices.begin() + kx, p.vertices.end()},
                {p.labels.begin() + kx, p.labels.end()}};
    const std::size_t u = p.vertices[kx];
    const std::size_t i = x.index_of(px), j = y.index_of(py);
    pos[u][i * y.block_dim(u, w) + j] = k;
  }
  return pos;
}

}  // namespace

BlockUnitary tensor_unitaries(const BlockUnitary& u1, const BlockUnitary& u2) {
  if (u1.source().right_index() != u2.source().left_index())
    throw ShapeError("tensor_unitaries: maps act on non-composable correspondences");
  const GraphCorrespondence src = tensor(u1.source(), u2.source());
  const GraphCorrespondence tgt = tensor(u1.target(), u2.target());
  const std::size_t nv = src.left_size(), nw = src.right_size();
  const std::size_t nu = u1.source().right_size();
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(nv * nw);
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nw; ++w) {
      const auto d = static_cast<Eigen::Index>(src.block_dim(v, w));
      ComplexMatrix out = ComplexMatrix::Zero(d, d);
      if (d > 0) {
        const auto sp = split_positions(src, u1.source(), u2.source(), v, w);
        const auto tp = split_positions(tgt, u1.target(), u2.target(), v, w);
        for (std::size_t u = 0; u < nu; ++u) {
          const ComplexMatrix& a = u1.block(v, u);
          const ComplexMatrix& b = u2.block(u, w);
          const Eigen::Index da = a.rows(), db = b.rows();
          for (Eigen::Index i2 = 0; i2 < da; ++i2)
            for (Eigen::Index j2 = 0; j2 < db; ++j2) {
              const auto row = static_cast<Eigen::Index>(tp[u][i2 * db + j2]);
              for (Eigen::Index i1 = 0; i1 < da; ++i1) {
                const Complex aij = a(i2, i1);
                if (aij == Complex(0.0)) continue;
                for (Eigen::Index j1 = 0; j1 < db; ++j1) {
                  const auto col = static_cast<Eigen::Index>(sp[u][i1 * db + j1]);
                  out(row, col) = aij * b(j2, j1);
                }
              }
            }
        }
      }
      blocks.push_back(std::move(out));
    }
  return BlockUnitary(src, tgt, std::move(blocks));
}

BlockUnitary canonical_assoc(const GraphCorrespondence& x, const GraphCorrespondence& y,
                             const GraphCorrespondence& z) {
  return BlockUnitary::canonical(tensor(tensor(x, y), z), tensor(x, tensor(y, z)));
}

BlockUnitary random_block_unitary(const GraphCorrespondence& source,
                                  const GraphCorrespondence& target,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t v = 0; v < source.left_size(); ++v)
    for (std::size_t w = 0; w < source.right_size(); ++w) {
      const auto d = static_cast<Eigen::Index>(source.block_dim(v, w));
      ComplexMatrix z(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          z(i, j) = Complex(re, im);
        }
      if (d == 0) {
        blocks.push_back(z);
        continue;
      }
      Eigen::HouseholderQR<ComplexMatrix> qr(z);
      ComplexMatrix q = qr.householderQ();
      const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (Eigen::Index i = 0; i < d; ++i) {
        const Complex rii = r(i, i);
        const double mag = std::abs(rii);
        if (mag > 0) q.col(i) *= rii / mag;
      }
      blocks.push_back(std::move(q));
    }
  return BlockUnitary(source, target, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Objects and arrows

ObjectPair::ObjectPair(GraphCorrespondence x) : x_(std::move(x)) {
  if (x_.left_index() != x_.right_index())
    throw DomainError("object correspondence must have equal left and right index sets");
  if (!is_essential(x_.dims().to_int()))
    throw DomainError("object correspondence must be essential");
}

ObjectPair ObjectPair::from_matrix(const IntMatrix& a, Labels index) {
  if (!a.is_square()) throw ShapeError("object matrix must be square");
  if (index.empty()) index = default_labels(a.rows());
  return ObjectPair(GraphCorrespondence::from_matrix(a, index, index));
}

OneArrow::OneArrow(ObjectPair left, ObjectPair right, GraphCorrespondence f,
                   BlockUnitary phi)
    : left_(std::move(left)),
      right_(std::move(right)),
      f_(std::move(f)),
      phi_(std::move(phi)) {
  if (f_.left_index() != left_.index() || f_.right_index() != right_.index())
    throw ShapeError("1-arrow correspondence does not connect the given objects");
  const GraphCorrespondence src = tensor(left_.x(), f_);
  const GraphCorrespondence tgt = tensor(f_, right_.x());
  if (!phi_.source().same_shape(src) || !phi_.target().same_shape(tgt))
    throw ShapeError("1-arrow intertwiner must map Y (x) F to F (x) X");
  phi_ = phi_.rebased(src, tgt);
}

OneArrow compose_one_arrows(const OneArrow& g, const OneArrow& f) {
  if (!(g.right() == f.left()))
    throw ShapeError("compose_one_arrows: arrows are not composable");
  const BlockUnitary step1 = tensor_unitaries(g.phi(), BlockUnitary::identity(f.f()));
  const BlockUnitary step2 = tensor_unitaries(BlockUnitary::identity(g.f()), f.phi());
  return OneArrow(g.left(), f.right(), tensor(g.f(), f.f()),
                  compose_unitaries(step1, step2));
}

OneArrow identity_arrow(const ObjectPair& obj) {
  const GraphCorrespondence unit = unit_correspondence(obj.index());
  return OneArrow(obj, obj, unit,
                  BlockUnitary::canonical(tensor(obj.x(), unit), tensor(unit, obj.x())));
}

OneArrow power_arrow(const ObjectPair& obj, unsigned m) {
  if (m == 0) return identity_arrow(obj);
  const GraphCorrespondence f = tensor_power(obj.x(), m);
  return OneArrow(obj, obj, f,
                  BlockUnitary::canonical(tensor(obj.x(), f), tensor(f, obj.x())));
}

double two_arrow_residual(const BlockUnitary& psi, const OneArrow& f, const OneArrow& g) {
  if (!(f.left() == g.left()) || !(f.right() == g.right()))
    throw ShapeError("2-arrow between non-parallel 1-arrows");
  if (!psi.source().same_shape(f.f()) || !psi.target().same_shape(g.f()))
    throw ShapeError("2-arrow must map F to G");
  const BlockUnitary p = psi.rebased(f.f(), g.f());
  const BlockUnitary lhs =
      compose_unitaries(f.phi(), tensor_unitaries(p, BlockUnitary::identity(f.right().x())));
  const BlockUnitary rhs =
      compose_unitaries(tensor_unitaries(BlockUnitary::identity(f.left().x()), p), g.phi());
  return distance(lhs, rhs);
}

bool check_two_arrow(const BlockUnitary& psi, const OneArrow& f, const OneArrow& g,
                     double tol) {
  return psi.is_unitary(tol) && two_arrow_residual(psi, f, g) <= tol;
}

BlockUnitary intertwine_power(const OneArrow& f, unsigned n) {
  const GraphCorrespondence& y = f.left().x();
  const GraphCorrespondence& x = f.right().x();
  if (n == 0)
    return BlockUnitary::canonical(tensor(unit_correspondence(f.left().index()), f.f()),
                                   tensor(f.f(), unit_correspondence(f.right().index())));
  BlockUnitary t = f.phi();
  for (unsigned k = 2; k <= n; ++k) {
    const BlockUnitary move =
        tensor_unitaries(BlockUnitary::identity(tensor_power(y, k - 1)), f.phi());
    t = compose_unitaries(move, tensor_unitaries(t, BlockUnitary::identity(x)));
  }
  return t;
}

OneArrow transport_arrow(const OneArrow& f, const BlockUnitary& psi) {
  if (!psi.source().same_shape(f.f()))
    throw ShapeError("transport_arrow: map does not start at F");
  const BlockUnitary p = psi.rebased(f.f(), psi.target());
  const BlockUnitary back =
      tensor_unitaries(BlockUnitary::identity(f.left().x()), p).adjoint();
  const BlockUnitary fwd = tensor_unitaries(p, BlockUnitary::identity(f.right().x()));
  return OneArrow(f.left(), f.right(), psi.target(),
                  compose_unitaries(compose_unitaries(back, f.phi()), fwd));
}

}  // namespace shiftcalc
