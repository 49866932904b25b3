#pragma once

// Dense homogeneous ternary forms in graded-lex order (x0 > x1 > x2) and
// truncated power series used for jets and line restrictions.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace cubic {

using Exponent = std::array<int, 3>;

inline int num_monomials(int degree) { return (degree + 1) * (degree + 2) / 2; }

// position of x0^a x1^b x2^c among degree-(a+b+c) monomials
inline int monomial_index(const Exponent& e) {
  const int r = e[1] + e[2];
  return r * (r + 1) / 2 + (r - e[1]);
}

std::vector<Exponent> monomials(int degree);

// a + b t + c t^2 + ... truncated after `order` terms
template <class T>
class Series {
 public:
  Series() = default;
  explicit Series(int order, T constant = T(0)) : c_(order, T(0)) {
    if (order > 0) c_[0] = constant;
  }
  static Series variable(int order, T value, T slope) {
    Series s(order, value);
    if (order > 1) s.c_[1] = slope;
    return s;
  }
  int order() const { return static_cast<int>(c_.size()); }
  T& operator[](int i) { return c_[i]; }
  const T& operator[](int i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }

  Series& operator+=(const Series& o) {
    for (int i = 0; i < order(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) {
    for (int i = 0; i < a.order(); ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend Series operator*(const Series& a, const Series& b) {
    const int n = a.order();
    Series r(n);
    for (int i = 0; i < n; ++i) {
      if (a.c_[i] == T(0)) continue;
      for (int j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend Series operator*(T s, Series a) {
    for (auto& v : a.c_) v *= s;
    return a;
  }

 private:
  std::vector<T> c_;
};

class TernaryForm {
 public:
  TernaryForm() = default;
  explicit TernaryForm(int degree) : degree_(degree), c_(Eigen::VectorXd::Zero(num_monomials(degree))) {}
  TernaryForm(int degree, Eigen::VectorXd coeffs);

  static TernaryForm monomial(const Exponent& e, double coeff = 1.0);
  static TernaryForm linear(const Eigen::Vector3d& n);

  int degree() const { return degree_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }
  double coeff(const Exponent& e) const { return c_[monomial_index(e)]; }
  double norm() const { return c_.norm(); }
  TernaryForm normalized() const;

  // generic evaluation for double, complex and Series arguments
  template <class T>
  T eval(const T& x0, const T& x1, const T& x2, const T& one) const {
    std::vector<T> p0(degree_ + 1, one), p1(degree_ + 1, one), p2(degree_ + 1, one);
    for (int k = 1; k <= degree_; ++k) {
      p0[k] = p0[k - 1] * x0;
      p1[k] = p1[k - 1] * x1;
      p2[k] = p2[k - 1] * x2;
    }
    T acc = 0.0 * one;
    int idx = 0;
    for (int a = degree_; a >= 0; --a)
      for (int b = degree_ - a; b >= 0; --b, ++idx) {
        const double co = c_[idx];
        if (co == 0.0) continue;
        acc += co * (p0[a] * (p1[b] * p2[degree_ - a - b]));
      }
    return acc;
  }

  template <class Derived>
  typename Derived::Scalar operator()(const Eigen::MatrixBase<Derived>& p) const {
    using S = typename Derived::Scalar;
    return eval<S>(p[0], p[1], p[2], S(1));
  }
  Eigen::Vector3d gradient(const Eigen::Vector3d& p) const;
  TernaryForm derivative(int var) const;

  // f(S w) as a form in w
  TernaryForm substitute(const Eigen::Matrix3d& S) const;

  TernaryForm& operator+=(const TernaryForm& o);
  TernaryForm& operator-=(const TernaryForm& o);
  TernaryForm& operator*=(double s) {
    c_ *= s;
    return *this;
  }
  friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) { return a += b; }
  friend TernaryForm operator-(TernaryForm a, const TernaryForm& b) { return a -= b; }
  friend TernaryForm operator*(double s, TernaryForm a) { return a *= s; }
  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b);
  TernaryForm pow(int n) const;

 private:
  int degree_ = 0;
  Eigen::VectorXd c_ = Eigen::VectorXd::Zero(1);
};

// ascending coefficients of t -> f(p + t v), length degree+1
std::vector<std::complex<double>> restrict_to_line(const TernaryForm& f, const Eigen::Vector3cd& p,
                                                   const Eigen::Vector3cd& v);

// unit norm, first coordinate above 1e-12 made positive
Eigen::Vector3d normalize_projective(const Eigen::Vector3d& p);
double projective_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q);

}  // namespace cubic
