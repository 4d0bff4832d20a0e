#include "loopoid/finite_structures.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>
#include <string>

#include "loopoid/random.hpp"

namespace loopoid {

CayleyTable::CayleyTable(std::vector<std::vector<int>> rows, std::optional<int> unit)
    : order_(static_cast<int>(rows.size())) {
  if (order_ == 0) throw Error(ErrorCode::MalformedTable, "empty table");
  data_.reserve(static_cast<std::size_t>(order_ * order_));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != order_)
      throw Error(ErrorCode::MalformedTable, "table is not square");
    for (int v : row) {
      if (v < 0 || v >= order_)
        throw Error(ErrorCode::MalformedTable, "entry " + std::to_string(v) + " out of range");
      data_.push_back(v);
    }
  }
  set_unit(unit);
}

void CayleyTable::set_unit(std::optional<int> u) {
  if (u) {
    if (*u < 0 || *u >= order_) throw Error(ErrorCode::MalformedTable, "unit out of range");
    for (int x = 0; x < order_; ++x)
      if ((*this)(*u, x) != x || (*this)(x, *u) != x)
        throw Error(ErrorCode::MalformedTable, "declared unit does not act trivially");
  }
  unit_ = u;
}

std::vector<std::vector<int>> CayleyTable::rows() const {
  std::vector<std::vector<int>> r(static_cast<std::size_t>(order_));
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b) r[static_cast<std::size_t>(a)].push_back((*this)(a, b));
  return r;
}

std::optional<int> find_unit(const CayleyTable& t) {
  const int n = t.order();
  for (int u = 0; u < n; ++u) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = t(u, x) == x && t(x, u) == x;
    if (ok) return u;
  }
  return std::nullopt;
}

namespace {

// Runs pred over all n^k tuples, or over random tuples when n exceeds the limit.
template <int K>
bool for_all_tuples(int n, const ClassifyOptions& opts, CounterRng& rng,
                    const std::function<bool(const std::array<int, K>&)>& pred) {
  std::array<int, K> t{};
  if (n <= opts.exhaustive_limit) {
    long long total = 1;
    for (int k = 0; k < K; ++k) total *= n;
    for (long long idx = 0; idx < total; ++idx) {
      long long r = idx;
      for (int k = 0; k < K; ++k) {
        t[static_cast<std::size_t>(k)] = static_cast<int>(r % n);
        r /= n;
      }
      if (!pred(t)) return false;
    }
    return true;
  }
  for (int s = 0; s < opts.samples; ++s) {
    for (int k = 0; k < K; ++k) t[static_cast<std::size_t>(k)] = rng.uniform_int(n);
    if (!pred(t)) return false;
  }
  return true;
}

bool rows_are_permutations(const CayleyTable& t) {
  const int n = t.order();
  for (int a = 0; a < n; ++a) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int b = 0; b < n; ++b) {
      auto& s = seen[static_cast<std::size_t>(t(a, b))];
      if (s) return false;
      s = 1;
    }
  }
  return true;
}

bool columns_are_permutations(const CayleyTable& t) {
  const int n = t.order();
  for (int b = 0; b < n; ++b) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int a = 0; a < n; ++a) {
      auto& s = seen[static_cast<std::size_t>(t(a, b))];
      if (s) return false;
      s = 1;
    }
  }
  return true;
}

// For each a, an element a' with a'(ab) = b for all b, if any.
std::vector<std::optional<int>> left_inverses(const CayleyTable& t) {
  const int n = t.order();
  std::vector<std::optional<int>> out(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      bool ok = true;
      for (int b = 0; b < n && ok; ++b) ok = t(c, t(a, b)) == b;
      if (ok) {
        out[static_cast<std::size_t>(a)] = c;
        break;
      }
    }
  }
  return out;
}

std::vector<std::optional<int>> right_inverses(const CayleyTable& t) {
  const int n = t.order();
  std::vector<std::optional<int>> out(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      bool ok = true;
      for (int b = 0; b < n && ok; ++b) ok = t(t(b, a), c) == b;
      if (ok) {
        out[static_cast<std::size_t>(a)] = c;
        break;
      }
    }
  }
  return out;
}

}  // namespace

IdentityReport validate_latin_square(const CayleyTable& t, const ClassifyOptions& opts) {
  IdentityReport rep;
  const int n = t.order();
  CounterRng rng(opts.seed);
  rep.exhaustive = n <= opts.exhaustive_limit;
  rep.left_division = rows_are_permutations(t);
  rep.right_division = columns_are_permutations(t);
  rep.is_latin_square = rep.left_division && rep.right_division;
  rep.unit = find_unit(t);

  if (rep.unit) {
    const int e = *rep.unit;
    rep.has_two_sided_inverses = true;
    for (int a = 0; a < n && rep.has_two_sided_inverses; ++a) {
      bool found = false;
      for (int b = 0; b < n && !found; ++b) found = t(a, b) == e && t(b, a) == e;
      rep.has_two_sided_inverses = found;
    }
  }

  // Inverse properties search over all candidate inverses: O(n^3).
  const auto li = left_inverses(t);
  const auto ri = right_inverses(t);
  rep.left_inverse_property = std::all_of(li.begin(), li.end(), [](auto& x) { return x.has_value(); });
  rep.right_inverse_property = std::all_of(ri.begin(), ri.end(), [](auto& x) { return x.has_value(); });
  rep.inverse_property = rep.left_inverse_property && rep.right_inverse_property;
  if (rep.inverse_property) {
    // A single element must serve on both sides.
    for (int a = 0; a < n && rep.inverse_property; ++a) {
      bool found = false;
      for (int c = 0; c < n && !found; ++c) {
        bool ok = true;
        for (int b = 0; b < n && ok; ++b) ok = t(c, t(a, b)) == b && t(t(b, a), c) == b;
        found = ok;
      }
      rep.inverse_property = found;
    }
  }

  rep.associative = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, b, c] = v;
    return t(t(a, b), c) == t(a, t(b, c));
  });

  const bool m1 = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, x, y] = v;
    return t(t(t(a, x), a), y) == t(a, t(x, t(a, y)));
  });
  const bool m2 = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, x, y] = v;
    return t(t(t(x, a), y), a) == t(x, t(a, t(y, a)));
  });
  const bool m3 = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, x, y] = v;
    return t(t(a, x), t(y, a)) == t(t(a, t(x, y)), a);
  });
  rep.moufang = m1 && m2 && m3;
  rep.moufang_consistent = m1 == m2 && m2 == m3;

  rep.left_bol = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, b, c] = v;
    return t(a, t(b, t(a, c))) == t(t(a, t(b, a)), c);
  });
  rep.right_bol = for_all_tuples<3>(n, opts, rng, [&](const std::array<int, 3>& v) {
    const auto [a, b, c] = v;
    return t(t(t(c, a), b), a) == t(c, t(t(a, b), a));
  });
  return rep;
}

namespace {

void require_group(const CayleyTable& g) {
  const auto e = find_unit(g);
  if (!e) throw Error(ErrorCode::MalformedTable, "group table has no unit");
  const int n = g.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g(g(a, b), c) != g(a, g(b, c)))
          throw Error(ErrorCode::MalformedTable, "group table is not associative");
  if (!rows_are_permutations(g) || !columns_are_permutations(g))
    throw Error(ErrorCode::MalformedTable, "group table is not a Latin square");
}

void require_indices(const std::vector<int>& v, int n, const char* what) {
  for (int x : v)
    if (x < 0 || x >= n)
      throw Error(ErrorCode::MalformedTable, std::string(what) + " element out of range");
}

}  // namespace

CayleyTable transversal_loop(const CayleyTable& group, const std::vector<int>& subgroup,
                             const std::vector<int>& transversal) {
  require_group(group);
  const int n = group.order();
  const int e = *find_unit(group);
  require_indices(subgroup, n, "subgroup");
  require_indices(transversal, n, "transversal");

  const std::set<int> H(subgroup.begin(), subgroup.end());
  if (!H.count(e)) throw Error(ErrorCode::NotSubgroup, "subgroup does not contain the unit");
  for (int a : H)
    for (int b : H)
      if (!H.count(group(a, b))) throw Error(ErrorCode::NotSubgroup, "subgroup is not closed");

  // owner[g] = position in S of the representative of gH.
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < transversal.size(); ++i) {
    for (int h : H) {
      const int g = group(transversal[i], h);
      if (owner[static_cast<std::size_t>(g)] != -1)
        throw Error(ErrorCode::NotTransversal, "two transversal elements share a coset");
      owner[static_cast<std::size_t>(g)] = static_cast<int>(i);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw Error(ErrorCode::NotTransversal, "transversal misses a coset");
  const auto e_pos = std::find(transversal.begin(), transversal.end(), e);
  if (e_pos == transversal.end()) throw Error(ErrorCode::NotTransversal, "transversal does not contain the unit");

  const auto m = transversal.size();
  std::vector<std::vector<int>> rows(m, std::vector<int>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      rows[i][j] = owner[static_cast<std::size_t>(group(transversal[i], transversal[j]))];
  return CayleyTable(std::move(rows), static_cast<int>(e_pos - transversal.begin()));
}

CayleyTable semidirect_loop(const CayleyTable& loop, const std::vector<std::vector<int>>& autos) {
  const int n = loop.order();
  const auto e = find_unit(loop);
  if (!e) throw Error(ErrorCode::MalformedTable, "loop table has no unit");
  if (autos.empty()) throw Error(ErrorCode::NotAutomorphism, "automorphism list is empty");

  for (const auto& A : autos) {
    if (static_cast<int>(A.size()) != n) throw Error(ErrorCode::NotAutomorphism, "permutation has wrong length");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int x : A) {
      if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)])
        throw Error(ErrorCode::NotAutomorphism, "map is not a permutation");
      seen[static_cast<std::size_t>(x)] = 1;
    }
    if (A[static_cast<std::size_t>(*e)] != *e) throw Error(ErrorCode::NotAutomorphism, "map does not fix the unit");
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        if (A[static_cast<std::size_t>(loop(g, h))] != loop(A[static_cast<std::size_t>(g)], A[static_cast<std::size_t>(h)]))
          throw Error(ErrorCode::NotAutomorphism, "map is not multiplicative");
  }

  const auto index_of = [&](const std::vector<int>& P) -> int {
    for (std::size_t k = 0; k < autos.size(); ++k)
      if (autos[k] == P) return static_cast<int>(k);
    return -1;
  };
  std::vector<int> identity(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)] = i;
  const int id_pos = index_of(identity);
  if (id_pos < 0) throw Error(ErrorCode::NotAutomorphism, "identity map missing");

  const auto k = autos.size();
  std::vector<std::vector<int>> compose(k, std::vector<int>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::vector<int> ab(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        ab[static_cast<std::size_t>(x)] = autos[a][static_cast<std::size_t>(autos[b][static_cast<std::size_t>(x)])];
      const int pos = index_of(ab);
      if (pos < 0) throw Error(ErrorCode::NotAutomorphism, "automorphisms are not closed under composition");
      compose[a][b] = pos;
    }
  }

  const int total = n * static_cast<int>(k);
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(total), std::vector<int>(static_cast<std::size_t>(total)));
  for (int u = 0; u < total; ++u) {
    const int g = u % n;
    const auto A = static_cast<std::size_t>(u / n);
    for (int v = 0; v < total; ++v) {
      const int h = v % n;
      const auto B = static_cast<std::size_t>(v / n);
      rows[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
          loop(g, autos[A][static_cast<std::size_t>(h)]) + n * compose[A][B];
    }
  }
  return CayleyTable(std::move(rows), *e + n * id_pos);
}

CayleyTable cyclic_group(int n) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  return CayleyTable(std::move(rows), 0);
}

CayleyTable symmetric_group_s3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> rows(6, std::vector<int>(6));
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (std::size_t i = 0; i < 3; ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
      rows[a][b] = index(c);
    }
  }
  return CayleyTable(std::move(rows), 0);
}

}  // namespace loopoid
