#include "shiftcalc/shift_equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "shiftcalc/errors.hpp"

namespace shiftcalc {

SEWitness identity_witness(const IntMatrix& a) {
  return SEWitness{a, a, IntMatrix::identity(a.rows()), a, 1};
}

std::string to_string(SEEquation e) {
  switch (e) {
    case SEEquation::APowerEqualsRS: return "A^m = RS";
    case SEEquation::BPowerEqualsSR: return "B^m = SR";
    case SEEquation::AREqualsRB: return "AR = RB";
    case SEEquation::BSEqualsSA: return "BS = SA";
  }
  return "?";
}

namespace {

std::string shape_of(const IntMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_nonnegative(const IntMatrix& m, const char* name) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) < 0)
        throw DomainError(std::string(name) + " has negative entry " +
                          m(i, j).get_str() + " at (" + std::to_string(i) +
                          "," + std::to_string(j) + ")");
}

void require_witness_shapes(const SEWitness& w) {
  if (!w.a.is_square()) throw ShapeError("A must be square, got " + shape_of(w.a));
  if (!w.b.is_square()) throw ShapeError("B must be square, got " + shape_of(w.b));
  const std::size_t v = w.a.rows(), u = w.b.rows();
  if (w.r.rows() != v || w.r.cols() != u)
    throw ShapeError("R must be " + std::to_string(v) + "x" + std::to_string(u) +
                     ", got " + shape_of(w.r));
  if (w.s.rows() != u || w.s.cols() != v)
    throw ShapeError("S must be " + std::to_string(u) + "x" + std::to_string(v) +
                     ", got " + shape_of(w.s));
  if (w.lag == 0) throw DomainError("lag must be positive");
  require_nonnegative(w.a, "A");
  require_nonnegative(w.b, "B");
  require_nonnegative(w.r, "R");
  require_nonnegative(w.s, "S");
}

void require_verified(const SEWitness& w, const char* what) {
  if (!verify_se(w))
    throw ContractError(std::string(what) + " requires a verified witness");
}

}  // namespace

SECheck check_se(const SEWitness& w) {
  require_witness_shapes(w);
  if (mat_pow(w.a, w.lag) != mat_mul(w.r, w.s))
    return {false, SEEquation::APowerEqualsRS};
  if (mat_pow(w.b, w.lag) != mat_mul(w.s, w.r))
    return {false, SEEquation::BPowerEqualsSR};
  if (mat_mul(w.a, w.r) != mat_mul(w.r, w.b))
    return {false, SEEquation::AREqualsRB};
  if (mat_mul(w.b, w.s) != mat_mul(w.s, w.a))
    return {false, SEEquation::BSEqualsSA};
  return {true, std::nullopt};
}

bool verify_se(const SEWitness& w) { return check_se(w).verified; }

bool verify_elementary(const IntMatrix& a, const IntMatrix& b,
                       const IntMatrix& r, const IntMatrix& s) {
  return verify_se(SEWitness{a, b, r, s, 1});
}

SEWitness compose_se(const SEWitness& w1, const SEWitness& w2) {
  if (w1.b != w2.a)
    throw CompositionError("cannot compose: first witness ends at " +
                           w1.b.to_string() + ", second starts at " +
                           w2.a.to_string());
  require_verified(w1, "compose_se");
  require_verified(w2, "compose_se");
  return SEWitness{w1.a, w2.b, mat_mul(w1.r, w2.r), mat_mul(w2.s, w1.s),
                   w1.lag + w2.lag};
}

SEWitness reverse_se(const SEWitness& w) {
  require_verified(w, "reverse_se");
  return SEWitness{w.b, w.a, w.s, w.r, w.lag};
}

SEWitness fold_chain(const SSEChain& chain) {
  if (chain.empty()) throw ContractError("cannot fold an empty chain");
  SEWitness acc = chain.front();
  require_verified(acc, "fold_chain");
  for (std::size_t i = 1; i < chain.size(); ++i) acc = compose_se(acc, chain[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Bounded search

namespace {

// Exact affine system  E x = rhs  over Q, reduced to row echelon form.
// Pivot variables are expressed through the free ones:
//   x[pivot[k]] = constant[k] - sum_f coeff[k][f] * x[free[f]]
class AffineSolver {
 public:
  AffineSolver(std::vector<std::vector<mpq_class>> rows, std::vector<mpq_class> rhs,
               std::size_t vars)
      : vars_(vars) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < vars && r < rows.size(); ++c) {
      std::size_t p = r;
      while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[p], rows[r]);
      std::swap(rhs[p], rhs[r]);
      const mpq_class inv = 1 / rows[r][c];
      for (auto& x : rows[r]) x *= inv;
      rhs[r] *= inv;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == r || sgn(rows[i][c]) == 0) continue;
        const mpq_class f = rows[i][c];
        for (std::size_t j = 0; j < vars; ++j) rows[i][j] -= f * rows[r][j];
        rhs[i] -= f * rhs[r];
      }
      pivots_.push_back(c);
      ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i)
      if (sgn(rhs[i]) != 0) consistent_ = false;
    std::vector<bool> is_pivot(vars, false);
    for (auto c : pivots_) is_pivot[c] = true;
    for (std::size_t c = 0; c < vars; ++c)
      if (!is_pivot[c]) free_.push_back(c);
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
      constant_.push_back(rhs[k]);
      std::vector<mpq_class> coeff;
      for (auto f : free_) coeff.push_back(rows[k][f]);
      coeff_.push_back(std::move(coeff));
    }
  }

  // All integer solutions with every coordinate in [0, bound], sorted
  // lexicographically.
  std::vector<std::vector<Integer>> box_points(unsigned bound) const {
    std::vector<std::vector<Integer>> out;
    if (!consistent_) return out;
    std::vector<unsigned> free_vals(free_.size(), 0);
    std::vector<Integer> x(vars_);
    for (;;) {
      for (std::size_t f = 0; f < free_.size(); ++f) x[free_[f]] = free_vals[f];
      bool ok = true;
      for (std::size_t k = 0; k < pivots_.size() && ok; ++k) {
        mpq_class val = constant_[k];
        for (std::size_t f = 0; f < free_.size(); ++f)
          val -= coeff_[k][f] * free_vals[f];
        if (val.get_den() != 1 || sgn(val) < 0 || val > bound) {
          ok = false;
        } else {
          x[pivots_[k]] = val.get_num();
        }
      }
      if (ok) out.push_back(x);
      // odometer
      std::size_t f = 0;
      while (f < free_vals.size() && free_vals[f] == bound) free_vals[f++] = 0;
      if (f == free_vals.size()) break;
      ++free_vals[f];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t vars_;
  bool consistent_ = true;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
  std::vector<mpq_class> constant_;
  std::vector<std::vector<mpq_class>> coeff_;
};

IntMatrix reshape(const std::vector<Integer>& x, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = x[i * cols + j];
  return m;
}

// Integer points of { R >= 0, R <= bound : A R = R B }.
std::vector<std::vector<Integer>> intertwiner_candidates(const IntMatrix& a,
                                                         const IntMatrix& b,
                                                         unsigned bound) {
  const std::size_t nv = a.rows(), nw = b.rows();
  const std::size_t vars = nv * nw;
  std::vector<std::vector<mpq_class>> rows;
  std::vector<mpq_class> rhs;
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nw; ++w) {
      std::vector<mpq_class> row(vars);
      for (std::size_t u = 0; u < nv; ++u) row[u * nw + w] += mpq_class(a(v, u));
      for (std::size_t u = 0; u < nw; ++u) row[v * nw + u] -= mpq_class(b(u, w));
      rows.push_back(std::move(row));
      rhs.emplace_back(0);
    }
  return AffineSolver(std::move(rows), std::move(rhs), vars).box_points(bound);
}

// Lexicographically first S (W x V) with B S = S A, R S = A^m, S R = B^m.
std::optional<IntMatrix> first_partner(const IntMatrix& a, const IntMatrix& b,
                                       const IntMatrix& r, const IntMatrix& am,
                                       const IntMatrix& bm, unsigned bound) {
  const std::size_t nv = a.rows(), nw = b.rows();
  const std::size_t vars = nw * nv;  // s(w, v) -> w * nv + v
  std::vector<std::vector<mpq_class>> rows;
  std::vector<mpq_class> rhs;
  auto idx = [nv](std::size_t w, std::size_t v) { return w * nv + v; };
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<mpq_class> row(vars);
      for (std::size_t x = 0; x < nw; ++x) row[idx(x, v)] += mpq_class(b(w, x));
      for (std::size_t y = 0; y < nv; ++y) row[idx(w, y)] -= mpq_class(a(y, v));
      rows.push_back(std::move(row));
      rhs.emplace_back(0);
    }
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t v2 = 0; v2 < nv; ++v2) {
      std::vector<mpq_class> row(vars);
      for (std::size_t w = 0; w < nw; ++w) row[idx(w, v2)] += mpq_class(r(v, w));
      rows.push_back(std::move(row));
      rhs.emplace_back(am(v, v2));
    }
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t w2 = 0; w2 < nw; ++w2) {
      std::vector<mpq_class> row(vars);
      for (std::size_t v = 0; v < nv; ++v) row[idx(w, v)] += mpq_class(r(v, w2));
      rows.push_back(std::move(row));
      rhs.emplace_back(bm(w, w2));
    }
  auto points =
      AffineSolver(std::move(rows), std::move(rhs), vars).box_points(bound);
  if (points.empty()) return std::nullopt;
  return reshape(points.front(), nw, nv);
}

}  // namespace

std::optional<SEWitness> search_se(const IntMatrix& a, const IntMatrix& b,
                                   unsigned lag, unsigned bound,
                                   const SearchOptions& options) {
  if (!a.is_square() || !b.is_square())
    throw ShapeError("search_se requires square matrices");
  if (lag == 0) throw DomainError("lag must be positive");
  if (!is_essential(a) || !is_essential(b))
    throw DomainError("search_se requires essential matrices");

  const auto candidates = intertwiner_candidates(a, b, bound);
  const IntMatrix am = mat_pow(a, lag);
  const IntMatrix bm = mat_pow(b, lag);
  const std::size_t nv = a.rows(), nw = b.rows();

  // Workers scan candidates in strided order; the smallest index with a
  // partner wins, so the answer does not depend on scheduling.
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{none};
  std::mutex mu;
  std::optional<SEWitness> found;
  const unsigned jobs = std::max(1u, options.jobs);

  auto worker = [&](unsigned id) {
    for (std::size_t i = id; i < candidates.size(); i += jobs) {
      if (i > best.load()) return;
      IntMatrix r = reshape(candidates[i], nv, nw);
      auto s = first_partner(a, b, r, am, bm, bound);
      if (!s) continue;
      SEWitness w{a, b, std::move(r), std::move(*s), lag};
      if (!verify_se(w)) continue;
      std::lock_guard lock(mu);
      if (i < best.load()) {
        best = i;
        found = std::move(w);
      }
      return;
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
    for (auto& t : pool) t.join();
  }
  return found;
}

// ---------------------------------------------------------------------------
// Random chains

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Out-split of vertex v: row v of `a` is divided into two nonzero parts.
SEWitness out_split(const IntMatrix& a, std::size_t v, Rng& rng) {
  const std::size_t n = a.rows();
  std::vector<Integer> part1(n), part2(n);
  for (;;) {
    bool nz1 = false, nz2 = false;
    for (std::size_t u = 0; u < n; ++u) {
      const unsigned long total = a(v, u).get_ui();
      part1[u] = static_cast<unsigned long>(uniform(rng, total + 1));
      part2[u] = a(v, u) - part1[u];
      nz1 = nz1 || sgn(part1[u]) != 0;
      nz2 = nz2 || sgn(part2[u]) != 0;
    }
    if (nz1 && nz2) break;
  }
  IntMatrix d(n, n + 1);  // division matrix: old vertex -> its copies
  for (std::size_t x = 0; x < n; ++x) d(x, x) = 1;
  d(v, n) = 1;
  IntMatrix e(n + 1, n);  // edge matrix: copy -> old vertex
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t u = 0; u < n; ++u) e(x, u) = a(x, u);
  for (std::size_t u = 0; u < n; ++u) {
    e(v, u) = part1[u];
    e(n, u) = part2[u];
  }
  return SEWitness{a, mat_mul(e, d), d, e, 1};
}

SEWitness transpose_witness(const SEWitness& w) {
  // (A^T, B^T, R', S') elementary  =>  (A, B, S'^T, R'^T) elementary.
  return SEWitness{w.a.transpose(), w.b.transpose(), w.s.transpose(),
                   w.r.transpose(), 1};
}

// Merge vertex j into vertex i, where columns i and j of `a` agree.
SEWitness out_amalgamate(const IntMatrix& a, std::size_t i, std::size_t j) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> cls(n);
  for (std::size_t y = 0, next = 0; y < n; ++y) cls[y] = (y == j) ? 0 : next++;
  cls[j] = cls[i];
  IntMatrix d(n - 1, n);
  for (std::size_t y = 0; y < n; ++y) d(cls[y], y) = 1;
  IntMatrix e(n, n - 1);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (y != j) e(x, cls[y]) = a(x, y);
  return SEWitness{a, mat_mul(d, e), e, d, 1};
}

SEWitness relabel(const IntMatrix& a, Rng& rng) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  IntMatrix p(n, n);
  for (std::size_t x = 0; x < n; ++x) p(x, perm[x]) = 1;
  IntMatrix s = mat_mul(p.transpose(), a);
  return SEWitness{a, mat_mul(s, p), p, s, 1};
}

std::optional<std::pair<std::size_t, std::size_t>> equal_columns(const IntMatrix& a) {
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      bool same = true;
      for (std::size_t r = 0; r < a.rows() && same; ++r) same = a(r, i) == a(r, j);
      if (same) return std::pair{i, j};
    }
  return std::nullopt;
}

std::vector<std::size_t> splittable_rows(const IntMatrix& a) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < a.rows(); ++v) {
    Integer s = 0;
    for (std::size_t u = 0; u < a.cols(); ++u) s += a(v, u);
    if (s >= 2) out.push_back(v);
  }
  return out;
}

}  // namespace

SSEChain random_sse_chain(const IntMatrix& a, std::size_t steps,
                          std::uint64_t seed, const ChainOptions& options) {
  if (!is_essential(a))
    throw DomainError("random_sse_chain requires an essential matrix");
  Rng rng(seed);
  SSEChain chain;
  IntMatrix current = a;
  enum Move { OutSplit, InSplit, OutMerge, InMerge, Relabel };

  for (std::size_t k = 0; k < steps; ++k) {
    const bool room = current.rows() < options.max_dim;
    const auto rows = splittable_rows(current);
    const auto cols = splittable_rows(current.transpose());
    const auto same_cols = equal_columns(current);
    const auto same_rows = equal_columns(current.transpose());

    std::vector<Move> moves{Relabel};
    if (room && !rows.empty()) moves.push_back(OutSplit);
    if (room && !cols.empty()) moves.push_back(InSplit);
    if (same_cols) moves.push_back(OutMerge);
    if (same_rows) moves.push_back(InMerge);

    SEWitness step = identity_witness(current);
    switch (moves[uniform(rng, moves.size())]) {
      case OutSplit:
        step = out_split(current, rows[uniform(rng, rows.size())], rng);
        break;
      case InSplit:
        step = transpose_witness(
            out_split(current.transpose(), cols[uniform(rng, cols.size())], rng));
        break;
      case OutMerge:
        step = out_amalgamate(current, same_cols->first, same_cols->second);
        break;
      case InMerge:
        step = transpose_witness(out_amalgamate(current.transpose(),
                                                same_rows->first, same_rows->second));
        break;
      case Relabel:
        step = relabel(current, rng);
        break;
    }
    current = step.b;
    chain.push_back(std::move(step));
  }
  return chain;
}

}  // namespace shiftcalc
