#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loopoid/core.hpp"

namespace loopoid {

/// Finite magma on {0, ..., order-1} stored as a row-major product table.
class CayleyTable {
 public:
  CayleyTable() = default;
  /// Throws MalformedTable if the table is not square or has entries out of range.
  explicit CayleyTable(std::vector<std::vector<int>> rows, std::optional<int> unit = std::nullopt);

  int order() const { return order_; }
  int operator()(int a, int b) const { return data_[static_cast<std::size_t>(a * order_ + b)]; }
  const std::optional<int>& unit() const { return unit_; }
  void set_unit(std::optional<int> u);
  std::vector<std::vector<int>> rows() const;

  bool operator==(const CayleyTable& other) const {
    return order_ == other.order_ && data_ == other.data_ && unit_ == other.unit_;
  }

 private:
  int order_ = 0;
  std::vector<int> data_;
  std::optional<int> unit_;
};

struct ClassifyOptions {
  // Tables of at most this order are checked over every tuple.
  int exhaustive_limit = 64;
  // Number of random tuples per identity above the limit.
  int samples = 200000;
  std::uint64_t seed = 0;
};

struct IdentityReport {
  bool is_latin_square = false;
  bool left_division = false;   // every row is a permutation
  bool right_division = false;  // every column is a permutation
  std::optional<int> unit;
  bool has_two_sided_inverses = false;
  bool inverse_property = false;
  bool left_inverse_property = false;
  bool right_inverse_property = false;
  bool moufang = false;
  bool moufang_consistent = true;
  bool left_bol = false;
  bool right_bol = false;
  bool associative = false;
  bool exhaustive = true;
};

IdentityReport validate_latin_square(const CayleyTable& t, const ClassifyOptions& opts = {});

/// Two-sided identity if one exists.
std::optional<int> find_unit(const CayleyTable& t);

/// Loop on a left transversal S of H in G with s o s' = p_S(s s').
/// Element i of the result is transversal[i].
CayleyTable transversal_loop(const CayleyTable& group, const std::vector<int>& subgroup,
                             const std::vector<int>& transversal);

/// Semidirect product of a loop by a composition-closed set of automorphisms,
/// (g, A)(h, B) = (g A(h), A o B). Element (g, A_k) has index g + order * k.
CayleyTable semidirect_loop(const CayleyTable& loop, const std::vector<std::vector<int>>& autos);

CayleyTable cyclic_group(int n);
/// Symmetric group on three letters; permutations listed in lexicographic order.
CayleyTable symmetric_group_s3();

}  // namespace loopoid
