#include "invlab/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "invlab/ring.hpp"

namespace invlab {

ConstantGroup ConstantGroup::from_table(std::string name,
                                        std::vector<std::string> names,
                                        std::vector<std::vector<int>> table,
                                        int identity) {
  const int n = static_cast<int>(names.size());
  if (n == 0 || static_cast<int>(table.size()) != n)
    throw Error("group", "table size does not match element count");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw Error("group", "table row has wrong length");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("group", "table entry out of range");
  }
  if (identity < 0 || identity >= n)
    throw Error("group", "identity out of range");
  for (int a = 0; a < n; ++a)
    if (table[identity][a] != a || table[a][identity] != a)
      throw Error("group", "identity law fails");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error("group", "associativity fails");
  std::vector<int> inv(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table[a][b] == identity && table[b][a] == identity) {
        inv[a] = b;
        break;
      }
    if (inv[a] < 0) throw Error("group", "element has no inverse");
  }
  ConstantGroup g;
  g.order_ = n;
  g.id_ = identity;
  g.names_ = std::move(names);
  g.table_ = std::move(table);
  g.inv_ = std::move(inv);
  g.desc_ = std::move(name);
  return g;
}

ConstantGroup ConstantGroup::cyclic(int n) {
  if (n < 1) throw Error("group", "cyclic group needs order >= 1");
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    names[i] = i == 0 ? "e" : (i == 1 ? "g" : "g" + std::to_string(i));
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  }
  return from_table("Z/" + std::to_string(n), std::move(names), std::move(t),
                    0);
}

ConstantGroup ConstantGroup::klein_four() {
  return product(cyclic(2), cyclic(2));
}

ConstantGroup ConstantGroup::symmetric(int n) {
  if (n < 1 || n > 5) throw Error("group", "symmetric group supports n <= 5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = (int)i;
  const int m = static_cast<int>(perms.size());
  std::vector<std::string> names(m);
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i) {
    std::string nm = "p";
    for (int v : perms[i]) nm += std::to_string(v);
    names[i] = nm;
    for (int j = 0; j < m; ++j) {
      std::vector<int> comp(n);
      for (int x = 0; x < n; ++x) comp[x] = perms[i][perms[j][x]];
      t[i][j] = index.at(comp);
    }
  }
  return from_table("S" + std::to_string(n), std::move(names), std::move(t),
                    0);
}

ConstantGroup ConstantGroup::product(const ConstantGroup& a,
                                     const ConstantGroup& b) {
  const int n = a.order() * b.order();
  std::vector<std::string> names(n);
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  auto id = [&](int x, int y) { return x * b.order() + y; };
  for (int x = 0; x < a.order(); ++x)
    for (int y = 0; y < b.order(); ++y) {
      names[id(x, y)] = "(" + a.name(x) + "," + b.name(y) + ")";
      for (int u = 0; u < a.order(); ++u)
        for (int v = 0; v < b.order(); ++v)
          t[id(x, y)][id(u, v)] = id(a.mul(x, u), b.mul(y, v));
    }
  return from_table(a.describe() + "x" + b.describe(), std::move(names),
                    std::move(t), id(a.identity(), b.identity()));
}

int ConstantGroup::pow(int a, int k) const {
  int r = id_;
  int base = k >= 0 ? a : inv_[a];
  int e = k >= 0 ? k : -k;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

int ConstantGroup::element_order(int a) const {
  int r = a, n = 1;
  while (r != id_) {
    r = mul(r, a);
    ++n;
  }
  return n;
}

bool ConstantGroup::is_abelian() const {
  for (int a = 0; a < order_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

int ConstantGroup::by_name(const std::string& n) const {
  for (int i = 0; i < order_; ++i)
    if (names_[i] == n) return i;
  return -1;
}

std::vector<int> ConstantGroup::subgroup(const std::vector<int>& gens) const {
  std::set<int> seen{id_};
  std::vector<int> frontier{id_};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        for (int y : {mul(x, g), mul(x, inv_[g])})
          if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return std::vector<int>(seen.begin(), seen.end());
}

bool ConstantGroup::is_subgroup(const std::vector<int>& sub) const {
  std::set<int> s(sub.begin(), sub.end());
  if (s.size() != sub.size() || !s.count(id_)) return false;
  for (int a : sub) {
    if (a < 0 || a >= order_) return false;
    if (!s.count(inv_[a])) return false;
    for (int b : sub)
      if (!s.count(mul(a, b))) return false;
  }
  return true;
}

bool ConstantGroup::is_normal(const std::vector<int>& sub) const {
  if (!is_subgroup(sub)) return false;
  std::set<int> s(sub.begin(), sub.end());
  for (int g = 0; g < order_; ++g)
    for (int h : sub)
      if (!s.count(mul(mul(g, h), inv_[g]))) return false;
  return true;
}

std::vector<std::vector<int>> ConstantGroup::cosets(
    const std::vector<int>& sub) const {
  if (!is_subgroup(sub)) throw Error("group", "coset base is not a subgroup");
  std::vector<int> owner(order_, -1);
  std::vector<std::vector<int>> out;
  // Seed with the subgroup itself so coset 0 contains the identity.
  std::vector<int> seeds{id_};
  for (int g = 0; g < order_; ++g) seeds.push_back(g);
  for (int g : seeds) {
    if (owner[g] >= 0) continue;
    std::vector<int> coset;
    for (int h : sub) coset.push_back(mul(g, h));
    std::sort(coset.begin(), coset.end());
    for (int x : coset) owner[x] = static_cast<int>(out.size());
    out.push_back(std::move(coset));
  }
  return out;
}

std::vector<int> ConstantGroup::coset_reps(const std::vector<int>& sub) const {
  auto cs = cosets(sub);
  std::vector<int> reps(cs.size());
  reps[0] = id_;
  for (std::size_t i = 1; i < cs.size(); ++i) reps[i] = cs[i][0];
  return reps;
}

int ConstantGroup::coset_of(int g, const std::vector<int>& sub) const {
  auto cs = cosets(sub);
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (std::binary_search(cs[i].begin(), cs[i].end(), g))
      return static_cast<int>(i);
  throw Error("group", "element not covered by cosets");
}

GroupQuotient ConstantGroup::quotient(const std::vector<int>& sub) const {
  if (!is_normal(sub)) throw Error("group", "quotient needs a normal subgroup");
  auto cs = cosets(sub);
  auto reps = coset_reps(sub);
  const int m = static_cast<int>(cs.size());
  std::vector<int> proj(order_);
  for (int i = 0; i < m; ++i)
    for (int x : cs[i]) proj[x] = i;
  std::vector<std::string> names(m);
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i) {
    names[i] = "[" + names_[reps[i]] + "]";
    for (int j = 0; j < m; ++j) t[i][j] = proj[mul(reps[i], reps[j])];
  }
  GroupQuotient q;
  q.group = from_table(desc_ + "/H", std::move(names), std::move(t), proj[id_]);
  q.proj = std::move(proj);
  return q;
}

}  // namespace invlab
