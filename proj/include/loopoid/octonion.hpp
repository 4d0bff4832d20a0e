#pragma once

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "loopoid/core.hpp"
#include "loopoid/finite_structures.hpp"

namespace loopoid {

namespace detail {

struct BasisProduct {
  int index;
  int sign;
};

// e_i e_j = sign * e_index, row i, column j.
inline constexpr std::array<std::array<BasisProduct, 8>, 8> kOctonionTable = {{
    {{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}}},
    {{{1, 1}, {0, -1}, {3, 1}, {2, -1}, {5, 1}, {4, -1}, {7, -1}, {6, 1}}},
    {{{2, 1}, {3, -1}, {0, -1}, {1, 1}, {6, 1}, {7, 1}, {4, -1}, {5, -1}}},
    {{{3, 1}, {2, 1}, {1, -1}, {0, -1}, {7, 1}, {6, -1}, {5, 1}, {4, -1}}},
    {{{4, 1}, {5, -1}, {6, -1}, {7, -1}, {0, -1}, {1, 1}, {2, 1}, {3, 1}}},
    {{{5, 1}, {4, 1}, {7, -1}, {6, 1}, {1, -1}, {0, -1}, {3, -1}, {2, 1}}},
    {{{6, 1}, {7, 1}, {4, 1}, {5, -1}, {2, -1}, {3, 1}, {0, -1}, {1, -1}}},
    {{{7, 1}, {6, -1}, {5, 1}, {4, 1}, {3, -1}, {2, -1}, {1, 1}, {0, -1}}},
}};

}  // namespace detail

inline detail::BasisProduct octonion_basis_product(int i, int j) {
  return detail::kOctonionTable[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

/// Real octonion in the basis e0 (unit), e1, ..., e7.
template <typename Scalar>
class Octonion {
 public:
  using Coeffs = Eigen::Matrix<Scalar, 8, 1>;

  Octonion() : c_(Coeffs::Zero()) {}
  explicit Octonion(const Coeffs& c) : c_(c) {}
  template <typename Derived>
  static Octonion from(const Eigen::MatrixBase<Derived>& v) {
    return Octonion(Coeffs(v.template cast<Scalar>()));
  }

  static Octonion unit() { return basis(0); }
  static Octonion basis(int i) {
    Octonion o;
    o.c_[i] = Scalar(1);
    return o;
  }

  const Coeffs& coeffs() const { return c_; }
  Scalar operator[](int i) const { return c_[i]; }
  Scalar& operator[](int i) { return c_[i]; }

  Octonion conjugate() const {
    Coeffs c = -c_;
    c[0] = c_[0];
    return Octonion(c);
  }

  Scalar squared_norm() const { return c_.squaredNorm(); }
  Scalar norm() const { return c_.norm(); }

  /// Throws DivisionByZero when the norm is below min_norm.
  Octonion inverse(Scalar min_norm = Scalar(1e-300)) const {
    using std::sqrt;
    const Scalar n2 = squared_norm();
    if (!(sqrt(n2) >= min_norm)) throw Error(ErrorCode::DivisionByZero, "octonion norm below threshold");
    return Octonion(Coeffs(conjugate().c_ / n2));
  }

  Octonion operator+(const Octonion& o) const { return Octonion(Coeffs(c_ + o.c_)); }
  Octonion operator-(const Octonion& o) const { return Octonion(Coeffs(c_ - o.c_)); }
  Octonion operator-() const { return Octonion(Coeffs(-c_)); }
  Octonion operator*(Scalar s) const { return Octonion(Coeffs(c_ * s)); }

  Octonion operator*(const Octonion& o) const {
    Coeffs r = Coeffs::Zero();
    for (int i = 0; i < 8; ++i) {
      if (c_[i] == Scalar(0)) continue;
      for (int j = 0; j < 8; ++j) {
        const auto p = octonion_basis_product(i, j);
        r[p.index] += Scalar(p.sign) * c_[i] * o.c_[j];
      }
    }
    return Octonion(r);
  }

  bool operator==(const Octonion& o) const { return c_ == o.c_; }

 private:
  Coeffs c_;
};

using Octoniond = Octonion<double>;

template <typename Scalar>
Octonion<Scalar> oct_mul(const Octonion<Scalar>& a, const Octonion<Scalar>& b) {
  return a * b;
}

template <typename Scalar>
Octonion<Scalar> oct_inverse(const Octonion<Scalar>& g, Scalar min_norm = Scalar(1e-300)) {
  return g.inverse(min_norm);
}

/// (ab)c - a(bc)
template <typename Scalar>
Octonion<Scalar> oct_associator(const Octonion<Scalar>& a, const Octonion<Scalar>& b,
                                const Octonion<Scalar>& c) {
  return (a * b) * c - a * (b * c);
}

/// Real inner product of the coefficient vectors.
template <typename Scalar>
Scalar oct_dot(const Octonion<Scalar>& a, const Octonion<Scalar>& b) {
  return a.coeffs().dot(b.coeffs());
}

/// Parses sums of signed basis terms such as "e1+2e3", "-e0 + 0.5*e7".
/// Throws SchemaError on malformed input.
Octoniond parse_octonion(const std::string& text);

/// The 16 signed basis elements +-e_i under octonion multiplication, a
/// Moufang loop. Index i is +e_i and index 8 + i is -e_i.
CayleyTable octonion_basis_loop();

}  // namespace loopoid
