#include <gtest/gtest.h>

#include <functional>

#include "loopoid/finite_structures.hpp"
#include "loopoid/octonion.hpp"

using namespace loopoid;

namespace {

// All n x n Latin squares with identity first row and column.
void reduced_loops(int n, const std::function<void(const CayleyTable&)>& visit) {
  std::vector<std::vector<int>> T(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int i = 0; i < n; ++i) T[0][i] = T[i][0] = i;
  std::vector<std::pair<int, int>> cells;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) cells.emplace_back(i, j);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == cells.size()) {
      visit(CayleyTable(T, 0));
      return;
    }
    const auto [i, j] = cells[k];
    for (int v = 0; v < n; ++v) {
      bool ok = true;
      for (int c = 0; c < j && ok; ++c) ok = T[i][c] != v;
      for (int r = 0; r < i && ok; ++r) ok = T[r][j] != v;
      if (!ok) continue;
      T[i][j] = v;
      rec(k + 1);
      T[i][j] = -1;
    }
  };
  rec(0);
}

}  // namespace

TEST(FiniteStructures, Z2IsAGroup) {
  const IdentityReport r = validate_latin_square(CayleyTable({{0, 1}, {1, 0}}));
  EXPECT_TRUE(r.is_latin_square);
  ASSERT_TRUE(r.unit.has_value());
  EXPECT_EQ(*r.unit, 0);
  EXPECT_TRUE(r.associative);
  EXPECT_TRUE(r.moufang);
  EXPECT_TRUE(r.left_bol && r.right_bol);
  EXPECT_TRUE(r.inverse_property);
}

TEST(FiniteStructures, RepeatedRowIsNotLatin) {
  EXPECT_FALSE(validate_latin_square(CayleyTable({{0, 1}, {0, 1}})).is_latin_square);
}

TEST(FiniteStructures, MalformedTables) {
  EXPECT_THROW(CayleyTable({{0, 2}, {1, 0}}), Error);
  EXPECT_THROW(CayleyTable({{0, 1}, {1}}), Error);
  try {
    CayleyTable({{0, 5}, {1, 0}});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedTable);
  }
}

TEST(FiniteStructures, NoNonassociativeInverseLoopUpToOrderFive) {
  // Frozen from an exhaustive enumeration oracle: reduced loop counts and
  // nonassociative counts per order.
  const int counts[] = {1, 1, 1, 4, 56};
  const int nonassoc[] = {0, 0, 0, 0, 50};
  for (int n = 1; n <= 5; ++n) {
    int total = 0, na = 0, ip_na = 0;
    reduced_loops(n, [&](const CayleyTable& t) {
      const IdentityReport r = validate_latin_square(t);
      ++total;
      if (!r.associative) ++na;
      if (!r.associative && r.inverse_property) ++ip_na;
    });
    EXPECT_EQ(total, counts[n - 1]) << n;
    EXPECT_EQ(na, nonassoc[n - 1]) << n;
    EXPECT_EQ(ip_na, 0) << n;
  }
}

TEST(FiniteStructures, IdentityImplications) {
  reduced_loops(5, [](const CayleyTable& t) {
    const IdentityReport r = validate_latin_square(t);
    if (r.associative) EXPECT_TRUE(r.moufang);
    if (r.moufang) EXPECT_TRUE(r.left_bol && r.right_bol);
    if (r.inverse_property) EXPECT_TRUE(r.left_inverse_property && r.right_inverse_property);
  });
}

TEST(FiniteStructures, Z4TransversalIsZ2) {
  const CayleyTable t = transversal_loop(cyclic_group(4), {0, 2}, {0, 1});
  EXPECT_EQ(t.rows(), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  const IdentityReport r = validate_latin_square(t);
  EXPECT_TRUE(r.is_latin_square);
  EXPECT_TRUE(r.left_inverse_property);
}

TEST(FiniteStructures, TrivialSubgroupReturnsGroup) {
  const CayleyTable G = symmetric_group_s3();
  const CayleyTable t = transversal_loop(G, {0}, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(t.rows(), G.rows());
}

TEST(FiniteStructures, S3TransversalsMatchOracle) {
  // Coset-decomposition oracle, H = {0, 1} in lexicographic S3.
  const CayleyTable G = symmetric_group_s3();
  struct Case {
    std::vector<int> S;
    std::vector<std::vector<int>> table;
    bool latin, lip;
  };
  const std::vector<Case> cases = {
      {{0, 2, 4}, {{0, 1, 2}, {1, 0, 2}, {2, 0, 1}}, false, false},
      {{0, 2, 5}, {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}, false, true},
      {{0, 3, 4}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, true, true},
      {{0, 3, 5}, {{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}, false, false},
  };
  for (const Case& c : cases) {
    const CayleyTable t = transversal_loop(G, {0, 1}, c.S);
    EXPECT_EQ(t.rows(), c.table);
    const IdentityReport r = validate_latin_square(t);
    EXPECT_EQ(r.is_latin_square, c.latin);
    EXPECT_EQ(r.left_inverse_property, c.lip);
    EXPECT_TRUE(r.left_division);
    ASSERT_TRUE(r.unit.has_value());
    EXPECT_EQ(*r.unit, 0);
  }
}

TEST(FiniteStructures, TransversalErrors) {
  const CayleyTable G = symmetric_group_s3();
  try {
    transversal_loop(G, {0, 1}, {0, 1, 2});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTransversal);
  }
  try {
    transversal_loop(G, {0, 3}, {0, 1});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSubgroup);
  }
  try {
    transversal_loop(G, {0, 1}, {0, 2});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTransversal);
  }
}

TEST(FiniteStructures, SemidirectOfOctonionBasisLoopIsInverseLoop) {
  const CayleyTable B = octonion_basis_loop();
  // (a, b) -> (a, -b) on the quaternion split {e0..e3} + {e4..e7}.
  std::vector<int> id(16), flip(16);
  for (int i = 0; i < 16; ++i) {
    id[static_cast<std::size_t>(i)] = i;
    const int k = i % 8;
    flip[static_cast<std::size_t>(i)] = k < 4 ? i : (i + 8) % 16;
  }
  const CayleyTable S = semidirect_loop(B, {id, flip});
  EXPECT_EQ(S.order(), 32);
  const IdentityReport r = validate_latin_square(S);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_TRUE(r.is_latin_square);
  EXPECT_TRUE(r.inverse_property);
  EXPECT_FALSE(r.associative);
}

TEST(FiniteStructures, SemidirectOfZ3IsS3Sized) {
  const CayleyTable S = semidirect_loop(cyclic_group(3), {{0, 1, 2}, {0, 2, 1}});
  const IdentityReport r = validate_latin_square(S);
  EXPECT_EQ(S.order(), 6);
  EXPECT_TRUE(r.associative);
  EXPECT_TRUE(r.inverse_property);
}

TEST(FiniteStructures, SemidirectRejectsNonAutomorphism) {
  try {
    semidirect_loop(cyclic_group(4), {{0, 1, 2, 3}, {0, 2, 1, 3}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAutomorphism);
  }
}

TEST(FiniteStructures, OctonionBasisLoopIsMoufang) {
  const IdentityReport r = validate_latin_square(octonion_basis_loop());
  EXPECT_TRUE(r.is_latin_square);
  EXPECT_TRUE(r.moufang);
  EXPECT_TRUE(r.inverse_property);
  EXPECT_FALSE(r.associative);
}
