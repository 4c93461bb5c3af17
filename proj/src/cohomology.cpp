#include "invlab/cohomology.hpp"

#include <algorithm>

#include "invlab/invariants.hpp"
#include "invlab/linalg.hpp"

namespace invlab {

namespace {

using Vec = std::vector<Scalar>;
using Rows = std::vector<Vec>;

// Row-echelon accumulator over a field; rows keep distinct pivots.
struct Gauss {
  BaseRing k;
  Rows rows;
  std::vector<std::size_t> pivots;

  explicit Gauss(const BaseRing& field) : k(field) {}

  Vec reduce(Vec v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Scalar& c = v[pivots[r]];
      if (k.is_zero(c)) continue;
      Scalar f = c;
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = k.sub(v[j], k.mul(f, rows[r][j]));
    }
    return v;
  }

  // True when v was independent (and is now part of the span).
  bool add(Vec v) {
    v = reduce(std::move(v));
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (k.is_zero(v[j])) continue;
      Scalar inv = k.inv(v[j]);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = k.mul(v[i], inv);
      rows.push_back(std::move(v));
      pivots.push_back(j);
      return true;
    }
    return false;
  }

  bool contains(Vec v) const {
    v = reduce(std::move(v));
    for (const Scalar& c : v)
      if (!k.is_zero(c)) return false;
    return true;
  }

  int dim() const { return static_cast<int>(rows.size()); }
};

// Basis of {x : m x = 0} for a dense row-major matrix over a field.
Rows null_space(const BaseRing& k, const Rows& m, std::size_t cols) {
  Rows red;
  std::vector<std::size_t> piv;
  for (Vec row : m) {
    for (std::size_t r = 0; r < red.size(); ++r) {
      const Scalar c = row[piv[r]];
      if (k.is_zero(c)) continue;
      for (std::size_t j = 0; j < cols; ++j)
        row[j] = k.sub(row[j], k.mul(c, red[r][j]));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (k.is_zero(row[j])) continue;
      Scalar inv = k.inv(row[j]);
      for (std::size_t i = 0; i < cols; ++i) row[i] = k.mul(row[i], inv);
      red.push_back(std::move(row));
      piv.push_back(j);
      break;
    }
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : piv) is_pivot[p] = true;
  Rows basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols, k.zero());
    v[free] = k.one();
    // Back-substitute the pivot coordinates.
    for (std::size_t r = red.size(); r-- > 0;) {
      Scalar acc = k.zero();
      for (std::size_t j = 0; j < cols; ++j)
        if (j != piv[r]) acc = k.add(acc, k.mul(red[r][j], v[j]));
      v[piv[r]] = k.neg(acc);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves sum_j x_j col_j = target; empty optional when inconsistent.
std::pair<bool, Vec> solve_columns(const BaseRing& k, const Rows& columns,
                                   const Vec& target) {
  const std::size_t n = target.size(), m = columns.size();
  Rows aug;  // rows of the augmented system, one per coordinate
  for (std::size_t i = 0; i < n; ++i) {
    Vec row(m + 1, k.zero());
    for (std::size_t j = 0; j < m; ++j) row[j] = columns[j][i];
    row[m] = target[i];
    aug.push_back(std::move(row));
  }
  Rows red;
  std::vector<std::size_t> piv;
  for (Vec row : aug) {
    for (std::size_t r = 0; r < red.size(); ++r) {
      const Scalar c = row[piv[r]];
      if (k.is_zero(c)) continue;
      for (std::size_t j = 0; j <= m; ++j)
        row[j] = k.sub(row[j], k.mul(c, red[r][j]));
    }
    std::size_t lead = m + 1;
    for (std::size_t j = 0; j <= m; ++j)
      if (!k.is_zero(row[j])) {
        lead = j;
        break;
      }
    if (lead == m + 1) continue;
    if (lead == m) return {false, {}};  // 0 = nonzero
    Scalar inv = k.inv(row[lead]);
    for (std::size_t j = 0; j <= m; ++j) row[j] = k.mul(row[j], inv);
    red.push_back(std::move(row));
    piv.push_back(lead);
  }
  Vec x(m, k.zero());
  for (std::size_t r = red.size(); r-- > 0;) {
    Scalar acc = red[r][m];
    for (std::size_t j = 0; j < m; ++j)
      if (j != piv[r]) acc = k.sub(acc, k.mul(red[r][j], x[j]));
    x[piv[r]] = acc;
  }
  return {true, x};
}

void require_line(const GroupAction& action) {
  if (action.kind() != ActionKind::Constant)
    throw Error("cohomology", "constant action required");
  const Algebra& A = action.space();
  if (!A.base().is_field())
    throw Error("cohomology", "field base required");
  if (A.component_count() != 1 || A.component(0).vars.size() != 1 ||
      !A.component(0).relations.empty())
    throw Error("cohomology", "one truncated coordinate required");
}

Vec to_coeffs(const Algebra& A, const Element& e) {
  Vec c(A.dim(), A.base().zero());
  for (const auto& [idx, s] : e.terms()) c[idx] = s;
  return c;
}

Element from_coeffs(const Algebra& A, const Vec& c) {
  Element out = A.zero();
  for (std::size_t i = 0; i < c.size(); ++i)
    out = out.add(A.basis_element(static_cast<std::uint32_t>(i)).scaled(c[i]));
  return out;
}

// d/dt on k[t]/(t^N), using that basis index i is t^i.
Element derivative(const Algebra& A, const Element& e) {
  const BaseRing& k = A.base();
  Vec c = to_coeffs(A, e);
  Vec d(c.size(), k.zero());
  for (std::size_t i = 1; i < c.size(); ++i)
    d[i - 1] = k.mul(k.from_int(static_cast<std::int64_t>(i)), c[i]);
  return from_coeffs(A, d);
}

Vec flat_block(const Rows& blocks) {
  Vec out;
  for (const Vec& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

void GModule::verify() const {
  const int n = G.order();
  if (static_cast<int>(act.size()) != n)
    throw Error("cohomology", "one matrix per group element required");
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Scalar expect = g == G.identity() && i == j ? k.one() : k.zero();
        if (g == G.identity() && !k.equal(act[g][i][j], expect))
          throw Error("cohomology", "identity must act as the identity");
      }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const auto& target = act[G.mul(g, h)];
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          Scalar acc = k.zero();
          for (int l = 0; l < dim; ++l)
            acc = k.add(acc, k.mul(act[g][i][l], act[h][l][j]));
          if (!k.equal(acc, target[i][j]))
            throw Error("cohomology", "matrices do not realize the group law");
        }
    }
}

std::vector<Scalar> GModule::apply(int g, const std::vector<Scalar>& v) const {
  Vec out(static_cast<std::size_t>(dim), k.zero());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out[i] = k.add(out[i], k.mul(act[g][i][j], v[j]));
  return out;
}

GModule trivial_module(const ConstantGroup& G, const BaseRing& k, int dim) {
  GModule M{G, k, dim, {}, {}};
  std::vector<std::vector<Scalar>> id(
      static_cast<std::size_t>(dim), Vec(static_cast<std::size_t>(dim), k.zero()));
  for (int i = 0; i < dim; ++i) id[i][i] = k.one();
  M.act.assign(static_cast<std::size_t>(G.order()), id);
  for (int i = 0; i < dim; ++i) M.names.push_back("e" + std::to_string(i));
  M.verify();
  return M;
}

// t^i d/dt extends to a derivation of k[t]/(t^N) iff i >= 1 or p | N
// (d/dt must kill t^N); fields outside that range would only carry the
// adjoint action up to top-degree noise, so they are not part of the module.
int theta_shift(const Algebra& A) {
  const std::int64_t p = A.base().residue_characteristic();
  const std::int64_t N = static_cast<std::int64_t>(A.dim());
  return p > 0 && N % p == 0 ? 0 : 1;
}

GModule theta_module(const GroupAction& action) {
  require_line(action);
  const Algebra& A = action.space();
  const BaseRing& k = A.base();
  const int N = static_cast<int>(A.dim());
  const int lo = theta_shift(A);
  const int d = N - lo;
  Element t = A.var(A.var_name(0));

  GModule M{action.group(), k, d, {}, {}};
  for (int i = lo; i < N; ++i)
    M.names.push_back((i == 0 ? std::string("d/dt")
                              : "t^" + std::to_string(i) + " d/dt"));
  for (int g = 0; g < action.group().order(); ++g) {
    // Exact conjugation: (g . D)(t) = g(D(g^{-1} t)), all in A-arithmetic.
    Element phi = action.act(g, t);
    Element psi = action.act(action.group().inv(g), t);
    Element base = action.act(g, derivative(A, psi));
    std::vector<Vec> mat(static_cast<std::size_t>(d),
                         Vec(static_cast<std::size_t>(d), k.zero()));
    Element power = phi.pow(lo);
    for (int i = 0; i < d; ++i) {
      Vec col = to_coeffs(A, power.mul(base));
      if (lo == 1 && !k.is_zero(col[0]))
        throw Error("cohomology", "field escaped the derivation module");
      for (int r = 0; r < d; ++r)
        mat[r][static_cast<std::size_t>(i)] = col[static_cast<std::size_t>(r + lo)];
      power = power.mul(phi);
    }
    M.act.push_back(std::move(mat));
  }
  M.verify();
  return M;
}

GModule restrict_group(const GModule& M, const std::vector<int>& H) {
  if (!M.G.is_subgroup(H))
    throw Error("cohomology", "not a subgroup");
  const int m = static_cast<int>(H.size());
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(static_cast<std::size_t>(m),
                                      std::vector<int>(m));
  auto pos = [&](int g) {
    return static_cast<int>(std::find(H.begin(), H.end(), g) - H.begin());
  };
  for (int a = 0; a < m; ++a) {
    names.push_back(M.G.name(H[static_cast<std::size_t>(a)]));
    for (int b = 0; b < m; ++b)
      table[a][b] = pos(M.G.mul(H[static_cast<std::size_t>(a)],
                                H[static_cast<std::size_t>(b)]));
  }
  ConstantGroup sub = ConstantGroup::from_table("subgroup", names, table,
                                                pos(M.G.identity()));
  GModule out{sub, M.k, M.dim, {}, M.names};
  for (int a = 0; a < m; ++a)
    out.act.push_back(M.act[static_cast<std::size_t>(H[static_cast<std::size_t>(a)])]);
  out.verify();
  return out;
}

FixedModule fixed_submodule(const GModule& M, const std::vector<int>& H) {
  if (!M.G.is_normal(H))
    throw Error("cohomology", "normal subgroup required");
  const BaseRing& k = M.k;
  Rows eqs;
  for (int h : H)
    for (int i = 0; i < M.dim; ++i) {
      Vec row(static_cast<std::size_t>(M.dim), k.zero());
      for (int j = 0; j < M.dim; ++j) {
        row[j] = M.act[static_cast<std::size_t>(h)][i][j];
        if (i == j) row[j] = k.sub(row[j], k.one());
      }
      eqs.push_back(std::move(row));
    }
  Rows fixed = null_space(k, eqs, static_cast<std::size_t>(M.dim));

  GroupQuotient quot = M.G.quotient(H);
  std::vector<int> reps = M.G.coset_reps(H);
  const int m = static_cast<int>(fixed.size());
  GModule module{quot.group, k, m, {}, {}};
  for (int i = 0; i < m; ++i) module.names.push_back("f" + std::to_string(i));
  for (std::size_t q = 0; q < reps.size(); ++q) {
    std::vector<Vec> mat(static_cast<std::size_t>(m),
                         Vec(static_cast<std::size_t>(m), k.zero()));
    for (int j = 0; j < m; ++j) {
      Vec img = M.apply(reps[q], fixed[static_cast<std::size_t>(j)]);
      auto [ok, coords] = solve_columns(k, fixed, img);
      if (!ok)
        throw Error("cohomology", "fixed space is not stable");
      for (int i = 0; i < m; ++i) mat[i][static_cast<std::size_t>(j)] = coords[i];
    }
    module.act.push_back(std::move(mat));
  }
  module.verify();
  return FixedModule{std::move(module), std::move(fixed), std::move(reps)};
}

std::vector<Scalar> CohomologyClassSpace::coords(
    const std::vector<Scalar>& cocycle) const {
  Rows columns = coboundaries;
  columns.insert(columns.end(), reps.begin(), reps.end());
  auto [ok, x] = solve_columns(k, columns, cocycle);
  if (!ok)
    throw Error("cohomology", "class lies outside the computed span");
  return Vec(x.begin() + static_cast<std::ptrdiff_t>(coboundaries.size()),
             x.end());
}

CohomologyClassSpace h_zero(const GModule& M) {
  Rows eqs;
  for (int g = 0; g < M.G.order(); ++g)
    for (int i = 0; i < M.dim; ++i) {
      Vec row(static_cast<std::size_t>(M.dim), M.k.zero());
      for (int j = 0; j < M.dim; ++j) {
        row[j] = M.act[static_cast<std::size_t>(g)][i][j];
        if (i == j) row[j] = M.k.sub(row[j], M.k.one());
      }
      eqs.push_back(std::move(row));
    }
  CohomologyClassSpace out{0, M.k, M.G.order(), M.dim, {}, {}};
  out.reps = null_space(M.k, eqs, static_cast<std::size_t>(M.dim));
  return out;
}

CohomologyClassSpace h_one(const GModule& M) {
  const BaseRing& k = M.k;
  const int n = M.G.order(), d = M.dim;
  const std::size_t cols = static_cast<std::size_t>(n) * d;

  // Cocycles: g f(h) - f(gh) + f(g) = 0 coordinatewise.
  Rows eqs;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const int gh = M.G.mul(g, h);
      for (int i = 0; i < d; ++i) {
        Vec row(cols, k.zero());
        for (int j = 0; j < d; ++j)
          row[static_cast<std::size_t>(h) * d + j] =
              k.add(row[static_cast<std::size_t>(h) * d + j],
                    M.act[static_cast<std::size_t>(g)][i][j]);
        row[static_cast<std::size_t>(gh) * d + i] =
            k.sub(row[static_cast<std::size_t>(gh) * d + i], k.one());
        row[static_cast<std::size_t>(g) * d + i] =
            k.add(row[static_cast<std::size_t>(g) * d + i], k.one());
        eqs.push_back(std::move(row));
      }
    }
  auto is_cocycle = [&](const Vec& f) {
    for (const Vec& row : eqs) {
      Scalar acc = k.zero();
      for (std::size_t j = 0; j < cols; ++j)
        acc = k.add(acc, k.mul(row[j], f[j]));
      if (!k.is_zero(acc)) return false;
    }
    return true;
  };

  CohomologyClassSpace out{1, k, n, d, {}, {}};
  Gauss bspan(k);
  for (int j = 0; j < d; ++j) {
    Vec e(static_cast<std::size_t>(d), k.zero());
    e[static_cast<std::size_t>(j)] = k.one();
    Rows blocks;
    for (int g = 0; g < n; ++g) {
      Vec img = M.apply(g, e);
      for (int i = 0; i < d; ++i) img[static_cast<std::size_t>(i)] =
          k.sub(img[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
      blocks.push_back(std::move(img));
    }
    Vec cob = flat_block(blocks);
    if (!is_cocycle(cob))
      throw Error("cohomology", "a coboundary failed the cocycle identity");
    if (bspan.add(cob)) out.coboundaries.push_back(bspan.rows.back());
  }

  Gauss classes(k);
  for (const Vec& b : out.coboundaries) classes.add(b);
  for (Vec& z : null_space(k, eqs, cols))
    if (classes.add(z)) out.reps.push_back(classes.rows.back());

  // Cyclic cross-check against ker(Norm)/im(g - 1).
  for (int g = 0; g < n; ++g)
    if (M.G.element_order(g) == n) {
      if (cyclic_h1_dimension(M) != out.dim())
        throw Error("cohomology", "bar complex disagrees with the cyclic oracle");
      break;
    }
  return out;
}

int cyclic_h1_dimension(const GModule& M) {
  const BaseRing& k = M.k;
  const int n = M.G.order(), d = M.dim;
  int gen = -1;
  for (int g = 0; g < n && gen < 0; ++g)
    if (M.G.element_order(g) == n) gen = g;
  if (gen < 0) throw Error("cohomology", "group is not cyclic");

  std::vector<Vec> norm(static_cast<std::size_t>(d),
                        Vec(static_cast<std::size_t>(d), k.zero()));
  int g = M.G.identity();
  for (int step = 0; step < n; ++step) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        norm[i][j] = k.add(norm[i][j], M.act[static_cast<std::size_t>(g)][i][j]);
    g = M.G.mul(g, gen);
  }
  Rows norm_rows;
  for (int i = 0; i < d; ++i) norm_rows.push_back(norm[static_cast<std::size_t>(i)]);
  int ker_dim = static_cast<int>(
      null_space(k, norm_rows, static_cast<std::size_t>(d)).size());

  Gauss image(k);
  for (int j = 0; j < d; ++j) {
    Vec e(static_cast<std::size_t>(d), k.zero());
    e[static_cast<std::size_t>(j)] = k.one();
    Vec img = M.apply(gen, e);
    for (int i = 0; i < d; ++i)
      img[static_cast<std::size_t>(i)] =
          k.sub(img[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    image.add(std::move(img));
  }
  return ker_dim - image.dim();
}

bool LinearMap::is_zero() const {
  for (const auto& row : entries)
    for (const Scalar& c : row)
      if (!k.is_zero(c)) return false;
  return true;
}

bool LinearMap::is_identity() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!k.equal(entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                   i == j ? k.one() : k.zero()))
        return false;
  return true;
}

int LinearMap::rank() const {
  Gauss g(k);
  for (const auto& row : entries) g.add(row);
  return g.dim();
}

LinearMap compose(const LinearMap& f, const LinearMap& g) {
  if (f.cols != g.rows)
    throw Error("cohomology", "composition shape mismatch");
  LinearMap out{f.k, f.rows, g.cols, {}};
  out.entries.assign(static_cast<std::size_t>(f.rows),
                     Vec(static_cast<std::size_t>(g.cols), f.k.zero()));
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      Scalar acc = f.k.zero();
      for (int l = 0; l < f.cols; ++l)
        acc = f.k.add(acc, f.k.mul(f.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)],
                                   g.entries[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]));
      out.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  return out;
}

LinearMap restriction_h1(const GModule& M, const std::vector<int>& H) {
  CohomologyClassSpace dom = h_one(M);
  GModule sub = restrict_group(M, H);
  CohomologyClassSpace cod = h_one(sub);
  const int d = M.dim;

  auto restrict_cochain = [&](const Vec& f) {
    Rows blocks;
    for (int h : H) {
      Vec b(f.begin() + static_cast<std::ptrdiff_t>(h) * d,
            f.begin() + static_cast<std::ptrdiff_t>(h + 1) * d);
      blocks.push_back(std::move(b));
    }
    return flat_block(blocks);
  };

  // Class-level well-definedness: coboundaries restrict to coboundaries.
  Gauss bspan(M.k);
  for (const Vec& b : cod.coboundaries) bspan.add(b);
  for (const Vec& b : dom.coboundaries)
    if (!bspan.contains(restrict_cochain(b)))
      throw Error("cohomology", "restriction is not defined on classes");

  LinearMap out{M.k, cod.dim(), dom.dim(), {}};
  out.entries.assign(static_cast<std::size_t>(out.rows),
                     Vec(static_cast<std::size_t>(out.cols), M.k.zero()));
  for (int j = 0; j < dom.dim(); ++j) {
    Vec c = cod.coords(restrict_cochain(dom.reps[static_cast<std::size_t>(j)]));
    for (int i = 0; i < out.rows; ++i)
      out.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i)];
  }
  return out;
}

LinearMap inflation_h1(const GModule& M, const std::vector<int>& H) {
  FixedModule FM = fixed_submodule(M, H);
  CohomologyClassSpace dom = h_one(FM.module);
  CohomologyClassSpace cod = h_one(M);
  const BaseRing& k = M.k;
  const int m = FM.module.dim, d = M.dim;
  GroupQuotient quot = M.G.quotient(H);

  auto inflate = [&](const Vec& f) {
    Rows blocks;
    for (int g = 0; g < M.G.order(); ++g) {
      const int q = quot.proj[static_cast<std::size_t>(g)];
      Vec value(static_cast<std::size_t>(d), k.zero());
      for (int j = 0; j < m; ++j) {
        const Scalar& c = f[static_cast<std::size_t>(q) * m + j];
        for (int i = 0; i < d; ++i)
          value[static_cast<std::size_t>(i)] =
              k.add(value[static_cast<std::size_t>(i)],
                    k.mul(c, FM.embed[static_cast<std::size_t>(j)]
                                     [static_cast<std::size_t>(i)]));
      }
      blocks.push_back(std::move(value));
    }
    return flat_block(blocks);
  };

  Gauss bspan(k);
  for (const Vec& b : cod.coboundaries) bspan.add(b);
  for (const Vec& b : dom.coboundaries)
    if (!bspan.contains(inflate(b)))
      throw Error("cohomology", "inflation is not defined on classes");

  LinearMap out{k, cod.dim(), dom.dim(), {}};
  out.entries.assign(static_cast<std::size_t>(out.rows),
                     Vec(static_cast<std::size_t>(out.cols), k.zero()));
  for (int j = 0; j < dom.dim(); ++j) {
    Vec c = cod.coords(inflate(dom.reps[static_cast<std::size_t>(j)]));
    for (int i = 0; i < out.rows; ++i)
      out.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i)];
  }
  return out;
}

CompositeReport induction_differential_composite(const GroupAction& action,
                                                 const std::vector<int>& H,
                                                 Exec exec) {
  require_line(action);
  const Algebra& A = action.space();
  const BaseRing& k = A.base();
  const ConstantGroup& G = action.group();
  if (!G.is_normal(H))
    throw Error("cohomology", "normal subgroup required");
  Element t = A.var(A.var_name(0));

  GModule theta = theta_module(action);
  FixedModule FM = fixed_submodule(theta, H);
  CohomologyClassSpace dom = h_one(FM.module);

  // The invariant coordinate: Y = Nm_H(t), which must generate A^H in the
  // certified window.  Fixed classes above N - max conductor are artifacts
  // of the truncation (their failure to be fixed lives beyond t^N), so the
  // monogenicity test compares only below that degree.
  GroupAction on_H = subgroup_action(action, H);
  SubalgebraSpan inv = invariant_subring(on_H, exec);
  Element Y = A.one();
  int conductor = 1;
  for (int h : H) {
    Y = Y.mul(action.act(h, t));
    if (h == G.identity()) continue;
    Element moved = action.act(h, t).sub(t);
    // A kernel element inside H makes Nm_H(t) a proper power of the true
    // coordinate: genuinely not monogenic, not a truncation artifact.
    if (moved.is_zero())
      throw Error("cohomology", "Theta_Y unavailable");
    conductor = std::max(conductor, moved.valuation());
  }
  const int N = static_cast<int>(A.dim());
  Span powers = algebra_closure(A, {Y}, exec);
  const int guard = N - conductor + 1;
  if (!powers.projected_below_degree(guard).equals(
          inv.span.projected_below_degree(guard)))
    throw Error("cohomology", "Theta_Y unavailable");
  const int M0 = static_cast<int>(powers.rank());

  Rows power_coeffs;
  {
    Element p = A.one();
    for (int j = 0; j < M0; ++j) {
      power_coeffs.push_back(to_coeffs(A, p));
      p = p.mul(Y);
    }
  }
  auto in_powers = [&](const Element& e) {
    auto [ok, c] = solve_columns(k, power_coeffs, to_coeffs(A, e));
    if (!ok)
      throw Error("cohomology", "element escaped the invariant coordinate");
    return c;
  };

  // G/H acting on k[y]/(y^M0) through its action on the powers of Y.
  Algebra B = Algebra::single(k, {"y"}, {}, M0);
  Element y = B.var("y");
  GroupQuotient quot = G.quotient(H);
  std::vector<ElementHom> autos;
  for (std::size_t q = 0; q < FM.coset_reps.size(); ++q) {
    Vec c = in_powers(action.act(FM.coset_reps[q], Y));
    Element img = B.zero();
    for (int j = 0; j < M0; ++j)
      img = img.add(y.pow(j).scaled(c[static_cast<std::size_t>(j)]));
    autos.push_back(endomorphism(B, {img}));
  }
  GroupAction induced = GroupAction::constant(quot.group, B, autos);
  GModule theta_Y = theta_module(induced);
  CohomologyClassSpace cod = h_one(theta_Y);

  // An H-invariant field h(t) d/dt restricts to h(t) Y'(t) expressed in
  // powers of Y, read as a field in y.  Both modules may start at degree 1.
  const int loA = theta_shift(A);
  const int loB = theta_shift(B);
  Element Yprime = derivative(A, Y);
  Rows iota;  // columns: image of each fixed basis vector
  for (const Vec& f : FM.embed) {
    Vec padded(static_cast<std::size_t>(loA), k.zero());
    padded.insert(padded.end(), f.begin(), f.end());
    Element h = from_coeffs(A, padded);
    Vec w = in_powers(h.mul(Yprime));
    for (int j = 0; j < loB; ++j)
      if (!k.is_zero(w[static_cast<std::size_t>(j)]))
        throw Error("cohomology", "field escaped the derivation module");
    iota.push_back(Vec(w.begin() + loB, w.end()));
  }
  const int dY = theta_Y.dim;
  for (std::size_t q = 0; q < FM.coset_reps.size(); ++q)
    for (int j = 0; j < FM.module.dim; ++j) {
      Vec e(static_cast<std::size_t>(FM.module.dim), k.zero());
      e[static_cast<std::size_t>(j)] = k.one();
      Vec lhs(static_cast<std::size_t>(dY), k.zero());
      Vec qe = FM.module.apply(static_cast<int>(q), e);
      for (int l = 0; l < FM.module.dim; ++l)
        for (int i = 0; i < dY; ++i)
          lhs[static_cast<std::size_t>(i)] =
              k.add(lhs[static_cast<std::size_t>(i)],
                    k.mul(iota[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)],
                          qe[static_cast<std::size_t>(l)]));
      Vec rhs = theta_Y.apply(static_cast<int>(q),
                              iota[static_cast<std::size_t>(j)]);
      for (int i = 0; i < dY; ++i)
        if (!k.equal(lhs[static_cast<std::size_t>(i)],
                     rhs[static_cast<std::size_t>(i)]))
          throw Error("cohomology", "invariant fields do not map equivariantly");
    }

  auto push = [&](const Vec& f) {
    Rows blocks;
    for (int q = 0; q < quot.group.order(); ++q) {
      Vec value(static_cast<std::size_t>(dY), k.zero());
      for (int j = 0; j < FM.module.dim; ++j) {
        const Scalar& c = f[static_cast<std::size_t>(q) * FM.module.dim + j];
        for (int i = 0; i < dY; ++i)
          value[static_cast<std::size_t>(i)] =
              k.add(value[static_cast<std::size_t>(i)],
                    k.mul(c, iota[static_cast<std::size_t>(j)]
                                 [static_cast<std::size_t>(i)]));
      }
      blocks.push_back(std::move(value));
    }
    return flat_block(blocks);
  };

  Gauss bspan(k);
  for (const Vec& b : cod.coboundaries) bspan.add(b);
  for (const Vec& b : dom.coboundaries)
    if (!bspan.contains(push(b)))
      throw Error("cohomology", "composite is not defined on classes");

  LinearMap map{k, cod.dim(), dom.dim(), {}};
  map.entries.assign(static_cast<std::size_t>(map.rows),
                     Vec(static_cast<std::size_t>(map.cols), k.zero()));
  for (int j = 0; j < dom.dim(); ++j) {
    Vec c = cod.coords(push(dom.reps[static_cast<std::size_t>(j)]));
    for (int i = 0; i < map.rows; ++i)
      map.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i)];
  }
  return CompositeReport{std::move(map), dom.dim(), cod.dim(), M0};
}

}  // namespace invlab
