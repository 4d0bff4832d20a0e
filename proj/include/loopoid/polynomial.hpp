#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "loopoid/core.hpp"

namespace loopoid {

struct Monomial {
  double coef = 0.0;
  std::vector<int> exps;
};

/// Real polynomial in a fixed number of variables.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, std::vector<Monomial> terms);

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int i, double coef = 1.0);

  int nvars() const { return nvars_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double operator()(const Vec& x) const;
  Polynomial derivative(int i) const;
  Vec gradient(const Vec& x) const;
  int degree() const;

  Polynomial& add_term(double coef, std::vector<int> exps);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;

 private:
  int nvars_ = 0;
  std::vector<Monomial> terms_;
};

/// Vector of polynomials; used for polynomial maps R^n -> R^k.
struct PolynomialMap {
  std::vector<Polynomial> components;

  Vec operator()(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
};

/// Polynomial in two vector arguments (x, y), each term carrying separate
/// exponent vectors. This is the portable multiplication format.
struct BiMonomial {
  double coef = 0.0;
  std::vector<int> x_exps;
  std::vector<int> y_exps;
};

struct BiPolynomialMap {
  int dim = 0;
  std::vector<std::vector<BiMonomial>> components;

  Vec operator()(const Vec& x, const Vec& y) const;
};

/// Scalar function on a chart. Polynomial fields have exact gradients;
/// callable fields fall back to central differences.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Polynomial p);
  ScalarField(std::function<double(const Vec&)> f, double fd_step = 1e-6);

  static ScalarField zero(int nvars) { return ScalarField(Polynomial(nvars)); }

  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  bool is_polynomial() const { return poly_ != nullptr; }
  const Polynomial* polynomial() const { return poly_.get(); }

 private:
  std::shared_ptr<const Polynomial> poly_;
  std::function<double(const Vec&)> fn_;
  double fd_step_ = 1e-6;
};

}  // namespace loopoid
