#include "loopoid/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

double monomial_value(const std::vector<int>& exps, const Vec& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0) v *= ipow(x[static_cast<Eigen::Index>(i)], exps[i]);
  return v;
}

}  // namespace

Polynomial::Polynomial(int nvars, std::vector<Monomial> terms) : nvars_(nvars) {
  for (auto& t : terms) add_term(t.coef, std::move(t.exps));
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(c, std::vector<int>(static_cast<std::size_t>(nvars), 0));
  return p;
}

Polynomial Polynomial::variable(int nvars, int i, double coef) {
  Polynomial p(nvars);
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  p.add_term(coef, std::move(e));
  return p;
}

Polynomial& Polynomial::add_term(double coef, std::vector<int> exps) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw Error(ErrorCode::SchemaError, "monomial arity does not match polynomial");
  for (int e : exps)
    if (e < 0) throw Error(ErrorCode::SchemaError, "negative exponent");
  if (coef == 0.0) return *this;
  for (auto& t : terms_) {
    if (t.exps == exps) {
      t.coef += coef;
      return *this;
    }
  }
  terms_.push_back({coef, std::move(exps)});
  return *this;
}

double Polynomial::operator()(const Vec& x) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coef * monomial_value(t.exps, x);
  return s;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial d(nvars_);
  const auto k = static_cast<std::size_t>(i);
  for (const auto& t : terms_) {
    if (t.exps[k] == 0) continue;
    auto e = t.exps;
    const double c = t.coef * e[k];
    e[k] -= 1;
    d.add_term(c, std::move(e));
  }
  return d;
}

Vec Polynomial::gradient(const Vec& x) const {
  Vec g = Vec::Zero(nvars_);
  for (const auto& t : terms_) {
    for (int i = 0; i < nvars_; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (t.exps[k] == 0) continue;
      auto e = t.exps;
      e[k] -= 1;
      g[i] += t.coef * t.exps[k] * monomial_value(e, x);
    }
  }
  return g;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r = *this;
  for (const auto& t : other.terms_) r.add_term(t.coef, t.exps);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial r(nvars_);
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      std::vector<int> e(a.exps.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exps[i] + b.exps[i];
      r.add_term(a.coef * b.coef, std::move(e));
    }
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(nvars_);
  for (const auto& t : terms_) r.add_term(t.coef * s, t.exps);
  return r;
}

Vec PolynomialMap::operator()(const Vec& x) const {
  Vec y(static_cast<Eigen::Index>(components.size()));
  for (std::size_t k = 0; k < components.size(); ++k) y[static_cast<Eigen::Index>(k)] = components[k](x);
  return y;
}

Mat PolynomialMap::jacobian(const Vec& x) const {
  Mat J(static_cast<Eigen::Index>(components.size()), x.size());
  for (std::size_t k = 0; k < components.size(); ++k)
    J.row(static_cast<Eigen::Index>(k)) = components[k].gradient(x).transpose();
  return J;
}

Vec BiPolynomialMap::operator()(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (const auto& t : components[static_cast<std::size_t>(k)])
      s += t.coef * monomial_value(t.x_exps, x) * monomial_value(t.y_exps, y);
    out[k] = s;
  }
  return out;
}

ScalarField::ScalarField(Polynomial p) : poly_(std::make_shared<const Polynomial>(std::move(p))) {}

ScalarField::ScalarField(std::function<double(const Vec&)> f, double fd_step)
    : fn_(std::move(f)), fd_step_(fd_step) {}

double ScalarField::operator()(const Vec& x) const {
  if (poly_) return (*poly_)(x);
  if (fn_) return fn_(x);
  return 0.0;
}

Vec ScalarField::gradient(const Vec& x) const {
  if (poly_) return poly_->gradient(x);
  if (fn_) return numdiff::gradient(fn_, x, fd_step_);
  return Vec::Zero(x.size());
}

}  // namespace loopoid
