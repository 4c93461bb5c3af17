#include "invlab/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <sstream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace invlab {

namespace {
std::atomic<int> g_jobs{1};
}

void set_jobs(int n) { g_jobs.store(n < 0 ? 1 : n); }

int get_jobs() {
  int n = g_jobs.load();
#ifdef _OPENMP
  if (n == 0) return omp_get_max_threads();
#endif
  return n == 0 ? 1 : n;
}

bool use_parallel(Exec exec, std::size_t work) {
#ifndef _OPENMP
  (void)exec;
  (void)work;
  return false;
#else
  switch (exec) {
    case Exec::Serial:
      return false;
    case Exec::Parallel:
      return work > 1;
    case Exec::Default:
      return get_jobs() != 1 && work >= 16;
  }
  return false;
#endif
}

Mat::Mat(BaseRing r, std::size_t nr, std::size_t nc)
    : ring(std::move(r)), rows(nr), cols(nc) {
  a.assign(rows * cols, ring.zero());
}

Mat Mat::identity(const BaseRing& r, std::size_t n) {
  Mat m(r, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = r.one();
  return m;
}

bool Mat::equal(const Mat& o) const {
  if (rows != o.rows || cols != o.cols) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ring.equal(a[i], o.a[i])) return false;
  return true;
}

std::string Mat::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) os << ", ";
      os << ring.to_string(at(r, c));
    }
  }
  os << "]";
  return os.str();
}

namespace {

void require_local(const BaseRing& R) {
  if (!R.is_local())
    throw Error("linalg", "unsupported base for kernel: " + R.describe());
}

// m[dst] -= q * m[src], from column `from` onward.
void row_sub(Mat& m, std::size_t dst, std::size_t src, const Scalar& q,
             std::size_t from) {
  const BaseRing& R = m.ring;
  for (std::size_t c = from; c < m.cols; ++c) {
    const Scalar& s = m.at(src, c);
    if (!R.is_zero(s)) m.at(dst, c) = R.sub(m.at(dst, c), R.mul(q, s));
  }
}

void row_scale(Mat& m, std::size_t r, const Scalar& u) {
  const BaseRing& R = m.ring;
  for (std::size_t c = 0; c < m.cols; ++c)
    if (!R.is_zero(m.at(r, c))) m.at(r, c) = R.mul(u, m.at(r, c));
}

// Echelon pass: min-valuation pivot per column (first such row on ties),
// exact elimination below, zero rows dropped.  Row updates may run in
// parallel; the pivot choice and the updates themselves are
// schedule-independent.
std::vector<PivotInfo> echelon(Mat& m, Exec exec) {
  const BaseRing& R = m.ring;
  const int L = R.local_length();
  std::vector<PivotInfo> piv;
  std::size_t top = 0;
  for (std::size_t col = 0; col < m.cols && top < m.rows; ++col) {
    std::size_t best = m.rows;
    int bestv = L;
    for (std::size_t r = top; r < m.rows; ++r) {
      int v = R.val(m.at(r, col));
      if (v < bestv) {
        bestv = v;
        best = r;
      }
    }
    if (best == m.rows) continue;
    if (best != top)
      for (std::size_t c = 0; c < m.cols; ++c)
        std::swap(m.at(top, c), m.at(best, c));
    row_scale(m, top, R.inv(R.unit_part(m.at(top, col))));
    m.at(top, col) = R.pi_pow(bestv);  // exact power, no unit residue
    const bool par = use_parallel(exec, m.rows - top);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(get_jobs() ? get_jobs() : 1) if (par)
#endif
    for (std::ptrdiff_t r = static_cast<std::ptrdiff_t>(top) + 1;
         r < static_cast<std::ptrdiff_t>(m.rows); ++r) {
      const Scalar& e = m.at(r, col);
      if (R.is_zero(e)) continue;
      Scalar q = R.split(e, bestv).first;  // val(e) >= bestv, remainder = 0
      row_sub(m, r, top, q, col);
      m.at(r, col) = R.zero();
    }
    (void)par;
    piv.push_back({col, bestv});
    ++top;
  }
  // Drop zero rows (all rows below `top` were exhausted or eliminated).
  std::size_t keep = top;
  m.a.resize(keep * m.cols);
  m.rows = keep;
  return piv;
}

// Reduce entries above each pivot modulo pi^v.  One left-to-right pass.
void reduce_above(Mat& m, const std::vector<PivotInfo>& piv, Exec exec) {
  const BaseRing& R = m.ring;
  for (std::size_t j = 0; j < piv.size(); ++j) {
    const bool par = use_parallel(exec, j);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(get_jobs() ? get_jobs() : 1) if (par)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(j); ++i) {
      auto [q, rem] = R.split(m.at(i, piv[j].col), piv[j].val);
      if (!R.is_zero(q)) {
        row_sub(m, i, j, q, piv[j].col);
        m.at(i, piv[j].col) = rem;
      }
    }
    (void)par;
  }
}

// Reduce v against the canonical rows; returns the multiplier used at each
// pivot row.  v becomes the residual (zero iff v was in the span).
std::vector<Scalar> reduce_vec(const Mat& m, const std::vector<PivotInfo>& piv,
                               std::vector<Scalar>& v) {
  const BaseRing& R = m.ring;
  std::vector<Scalar> qs(m.rows, R.zero());
  for (std::size_t j = 0; j < piv.size(); ++j) {
    auto [q, rem] = R.split(v[piv[j].col], piv[j].val);
    if (R.is_zero(q)) continue;
    qs[j] = q;
    for (std::size_t c = piv[j].col; c < m.cols; ++c) {
      const Scalar& s = m.at(j, c);
      if (!R.is_zero(s)) v[c] = R.sub(v[c], R.mul(q, s));
    }
    v[piv[j].col] = rem;
  }
  return qs;
}

bool vec_is_zero(const BaseRing& R, const std::vector<Scalar>& v) {
  for (const Scalar& s : v)
    if (!R.is_zero(s)) return false;
  return true;
}

}  // namespace

std::vector<PivotInfo> howell(Mat& m, Exec exec) {
  require_local(m.ring);
  const BaseRing& R = m.ring;
  const int L = R.local_length();
  std::vector<PivotInfo> piv;
  // Saturation: append pi^(L-v) multiples of short pivot rows until every
  // such multiple reduces to zero.  Each appended row either refines a
  // pivot valuation or introduces a pivot column, so this terminates.
  const std::size_t cap = 16 * (m.cols + 2);
  for (std::size_t round = 0;; ++round) {
    if (round > cap) throw Error("linalg", "canonical form did not stabilize");
    piv = echelon(m, exec);
    reduce_above(m, piv, exec);
    if (L == 1) break;  // fields: plain reduced echelon form is complete
    std::vector<std::vector<Scalar>> fresh;
    for (std::size_t j = 0; j < piv.size(); ++j) {
      if (piv[j].val == 0 || piv[j].val >= L) continue;
      std::vector<Scalar> cand(m.cols, R.zero());
      const Scalar mult = R.pi_pow(L - piv[j].val);
      for (std::size_t c = piv[j].col; c < m.cols; ++c)
        cand[c] = R.mul(mult, m.at(j, c));
      reduce_vec(m, piv, cand);
      if (!vec_is_zero(R, cand)) fresh.push_back(std::move(cand));
    }
    if (fresh.empty()) break;
    const std::size_t old = m.rows;
    m.rows += fresh.size();
    m.a.resize(m.rows * m.cols, R.zero());
    for (std::size_t i = 0; i < fresh.size(); ++i)
      for (std::size_t c = 0; c < m.cols; ++c)
        m.at(old + i, c) = std::move(fresh[i][c]);
  }
  return piv;
}

bool in_row_span(const Mat& h, const std::vector<Scalar>& v) {
  if (v.size() != h.cols)
    throw Error("linalg", "membership vector has wrong length");
  std::vector<PivotInfo> piv;
  for (std::size_t r = 0; r < h.rows; ++r)
    for (std::size_t c = 0; c < h.cols; ++c)
      if (!h.ring.is_zero(h.at(r, c))) {
        piv.push_back({c, h.ring.val(h.at(r, c))});
        break;
      }
  if (piv.size() != h.rows)
    throw Error("linalg", "membership test needs a canonical row form");
  std::vector<Scalar> w = v;
  reduce_vec(h, piv, w);
  return vec_is_zero(h.ring, w);
}

Mat kernel(const Mat& m, Exec exec) {
  require_local(m.ring);
  const BaseRing& R = m.ring;
  // Rows of aug are (column j of m | e_j); the row span is the graph
  // { (m x, x) }, so rows with zero head enumerate the kernel.
  Mat aug(R, m.cols, m.rows + m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t r = 0; r < m.rows; ++r) aug.at(j, r) = m.at(r, j);
    aug.at(j, m.rows + j) = R.one();
  }
  howell(aug, exec);
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < aug.rows; ++r) {
    bool head_zero = true;
    for (std::size_t c = 0; c < m.rows && head_zero; ++c)
      head_zero = R.is_zero(aug.at(r, c));
    if (head_zero) keep.push_back(r);
  }
  Mat out(R, keep.size(), m.cols);
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t c = 0; c < m.cols; ++c)
      out.at(i, c) = aug.at(keep[i], m.rows + c);
  howell(out, exec);  // already canonical; re-run is idempotent and cheap
  return out;
}

namespace {

// Laplace expansion over row subsets, expanding along column popcount-1.
// Shared memo across columns; zero entries prune whole branches.
template <typename T, typename Ops>
T laplace(const std::vector<std::vector<T>>& m, const Ops& ops) {
  const std::size_t n = m.size();
  if (n == 0) throw Error("linalg", "determinant of empty matrix");
  if (n > 62) throw Error("linalg", "determinant dimension too large");
  for (const auto& row : m)
    if (row.size() != n) throw Error("linalg", "determinant needs square matrix");
  std::unordered_map<std::uint64_t, T> memo;
  std::function<T(std::uint64_t)> go = [&](std::uint64_t mask) -> T {
    if (mask == 0) return ops.one();
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int k = __builtin_popcountll(mask);
    const std::size_t col = static_cast<std::size_t>(k - 1);
    T acc = ops.zero();
    int idx = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (!(mask >> r & 1)) continue;
      const T& e = m[r][col];
      if (!ops.is_zero(e)) {
        T sub = go(mask & ~(1ull << r));
        if (!ops.is_zero(sub)) {
          T term = ops.mul(e, sub);
          acc = ((idx + k - 1) % 2 == 0) ? ops.add(acc, term)
                                         : ops.sub(acc, term);
        }
      }
      ++idx;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  const std::uint64_t full =
      (n == 64) ? ~0ull : ((1ull << n) - 1);
  return go(full);
}

struct ScalarOps {
  const BaseRing& R;
  Scalar one() const { return R.one(); }
  Scalar zero() const { return R.zero(); }
  bool is_zero(const Scalar& x) const { return R.is_zero(x); }
  Scalar mul(const Scalar& x, const Scalar& y) const { return R.mul(x, y); }
  Scalar add(const Scalar& x, const Scalar& y) const { return R.add(x, y); }
  Scalar sub(const Scalar& x, const Scalar& y) const { return R.sub(x, y); }
};

struct ElementOps {
  const Algebra& A;
  Element one() const { return A.one(); }
  Element zero() const { return A.zero(); }
  bool is_zero(const Element& x) const { return x.is_zero(); }
  Element mul(const Element& x, const Element& y) const { return x.mul(y); }
  Element add(const Element& x, const Element& y) const { return x.add(y); }
  Element sub(const Element& x, const Element& y) const { return x.sub(y); }
};

}  // namespace

Scalar det(const Mat& m) {
  if (m.rows != m.cols) throw Error("linalg", "determinant needs square matrix");
  std::vector<std::vector<Scalar>> rows(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    rows[r].reserve(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) rows[r].push_back(m.at(r, c));
  }
  if (m.rows == 0) return m.ring.one();
  return laplace(rows, ScalarOps{m.ring});
}

Element det(const std::vector<std::vector<Element>>& m) {
  if (m.empty()) throw Error("linalg", "determinant of empty matrix");
  const Algebra A = m[0][0].parent();
  for (const auto& row : m)
    for (const Element& e : row)
      if (!A.same(e.parent()))
        throw Error("linalg", "determinant entries live in different algebras");
  return laplace(m, ElementOps{A});
}

std::vector<Scalar> to_coords(const Element& x) {
  const Algebra& A = x.parent();
  const std::size_t d = A.dim();
  std::vector<Scalar> v(d, A.base().zero());
  for (const auto& [idx, c] : x.terms()) v[d - 1 - idx] = c;
  return v;
}

Element from_coords(const Algebra& a, const std::vector<Scalar>& v) {
  if (v.size() != a.dim())
    throw Error("linalg", "coordinate vector has wrong length");
  std::vector<std::pair<std::uint32_t, Scalar>> terms;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (!a.base().is_zero(v[c]))
      terms.emplace_back(static_cast<std::uint32_t>(v.size() - 1 - c), v[c]);
  return a.from_terms(std::move(terms));
}

Mat mat_of(const Algebra& domain, const Algebra& codomain,
           const std::function<Element(const Element&)>& f) {
  Mat m(codomain.base(), codomain.dim(), domain.dim());
  for (std::size_t c = 0; c < domain.dim(); ++c) {
    Element img = f(domain.basis_element(
        static_cast<std::uint32_t>(domain.dim() - 1 - c)));
    if (!img.parent().same(codomain))
      throw Error("linalg", "operator image lands outside the codomain");
    auto col = to_coords(img);
    for (std::size_t r = 0; r < codomain.dim(); ++r) m.at(r, c) = col[r];
  }
  return m;
}

std::vector<Element> kernel_elements(const Algebra& domain, const Mat& m,
                                     Exec exec) {
  if (m.cols != domain.dim())
    throw Error("linalg", "kernel matrix does not match the domain");
  Mat k = kernel(m, exec);
  std::vector<Element> out;
  out.reserve(k.rows);
  for (std::size_t r = 0; r < k.rows; ++r) {
    std::vector<Scalar> v(k.cols);
    for (std::size_t c = 0; c < k.cols; ++c) v[c] = k.at(r, c);
    out.push_back(from_coords(domain, v));
  }
  return out;
}

Span::Span(Algebra a) : alg_(std::move(a)) {
  mat_ = Mat(alg_.base(), 0, alg_.dim());
}

Span Span::of(const Algebra& a, const std::vector<Element>& gens, Exec exec) {
  Span s(a);
  Mat m(a.base(), gens.size(), a.dim());
  for (std::size_t r = 0; r < gens.size(); ++r) {
    if (!gens[r].parent().same(a))
      throw Error("linalg", "span generator from a different algebra");
    auto v = to_coords(gens[r]);
    for (std::size_t c = 0; c < a.dim(); ++c) m.at(r, c) = std::move(v[c]);
  }
  s.piv_ = howell(m, exec);
  s.mat_ = std::move(m);
  return s;
}

std::size_t Span::length() const {
  const BaseRing& R = alg_.base();
  const int L = R.is_field() ? 1 : R.local_length();
  std::size_t total = 0;
  for (const auto& p : piv_) total += static_cast<std::size_t>(L - p.val);
  return total;
}

std::vector<int> Span::pivot_valuations() const {
  std::vector<int> v;
  v.reserve(piv_.size());
  for (const auto& p : piv_) v.push_back(p.val);
  return v;
}

std::vector<Element> Span::basis() const {
  std::vector<Element> out;
  out.reserve(mat_.rows);
  for (std::size_t r = 0; r < mat_.rows; ++r) {
    std::vector<Scalar> v(mat_.cols);
    for (std::size_t c = 0; c < mat_.cols; ++c) v[c] = mat_.at(r, c);
    out.push_back(from_coords(alg_, v));
  }
  return out;
}

bool Span::contains(const Element& x) const {
  if (!x.parent().same(alg_))
    throw Error("linalg", "membership test against a different algebra");
  auto v = to_coords(x);
  reduce_vec(mat_, piv_, v);
  return vec_is_zero(alg_.base(), v);
}

bool Span::equals(const Span& o) const {
  return alg_.same(o.alg_) && mat_.equal(o.mat_);
}

bool Span::contains_all(const Span& o) const {
  for (const Element& b : o.basis())
    if (!contains(b)) return false;
  return true;
}

Span Span::joined(const std::vector<Element>& more, Exec exec) const {
  std::vector<Element> gens = basis();
  gens.insert(gens.end(), more.begin(), more.end());
  return Span::of(alg_, gens, exec);
}

Span Span::projected_below_degree(int bound, Exec exec) const {
  std::vector<Element> gens;
  gens.reserve(mat_.rows);
  for (const Element& b : basis()) gens.push_back(b.truncated_below(bound));
  return Span::of(alg_, gens, exec);
}

std::optional<std::vector<Scalar>> Span::solve(const Element& x) const {
  auto v = to_coords(x);
  auto qs = reduce_vec(mat_, piv_, v);
  if (!vec_is_zero(alg_.base(), v)) return std::nullopt;
  return qs;
}

std::optional<Element> Span::first_not_in(const Span& other) const {
  // Rows are ordered by pivot from the top monomial down; witnesses read
  // better graded-lex ascending, so scan in reverse.
  auto b = basis();
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (!other.contains(*it)) return *it;
  return std::nullopt;
}

Span algebra_closure(const Algebra& a, const std::vector<Element>& gens,
                     Exec exec) {
  std::vector<Element> seed = gens;
  seed.push_back(a.one());
  Span cur = Span::of(a, seed, exec);
  for (;;) {
    std::vector<Element> b = cur.basis();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i; j < b.size(); ++j) pairs.emplace_back(i, j);
    std::vector<Element> prod(pairs.size(), a.zero());
    const bool par = use_parallel(exec, pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(get_jobs() ? get_jobs() : 1) if (par)
#endif
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(pairs.size());
         ++t)
      prod[t] = b[pairs[t].first].mul(b[pairs[t].second]);
    (void)par;
    Span nxt = cur.joined(prod, exec);
    if (nxt.equals(cur)) return cur;
    cur = nxt;
  }
}

bool closed_under_products(const Span& s, Exec exec) {
  std::vector<Element> b = s.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i; j < b.size(); ++j)
      if (!s.contains(b[i].mul(b[j]))) return false;
  (void)exec;
  return true;
}

}  // namespace invlab
