#include "cubic/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace cubic {

std::vector<Exponent> monomials(int degree) {
  std::vector<Exponent> out;
  out.reserve(num_monomials(degree));
  for (int a = degree; a >= 0; --a)
    for (int b = degree - a; b >= 0; --b) out.push_back({a, b, degree - a - b});
  return out;
}

TernaryForm::TernaryForm(int degree, Eigen::VectorXd coeffs) : degree_(degree), c_(std::move(coeffs)) {
  if (c_.size() != num_monomials(degree)) throw std::invalid_argument("coefficient count does not match degree");
}

TernaryForm TernaryForm::monomial(const Exponent& e, double coeff) {
  TernaryForm f(e[0] + e[1] + e[2]);
  f.c_[monomial_index(e)] = coeff;
  return f;
}

TernaryForm TernaryForm::linear(const Eigen::Vector3d& n) {
  TernaryForm f(1);
  f.c_ = n;  // (1,0,0),(0,1,0),(0,0,1) are indices 0,1,2
  return f;
}

TernaryForm TernaryForm::normalized() const {
  TernaryForm f = *this;
  const double n = norm();
  if (n > 0) f.c_ /= n;
  for (int i = 0; i < f.c_.size(); ++i) {
    if (std::abs(f.c_[i]) > 1e-14) {
      if (f.c_[i] < 0) f.c_ = -f.c_;
      break;
    }
  }
  return f;
}

TernaryForm TernaryForm::derivative(int var) const {
  if (degree_ == 0) return TernaryForm(0);
  TernaryForm d(degree_ - 1);
  const auto mons = monomials(degree_);
  for (size_t i = 0; i < mons.size(); ++i) {
    Exponent e = mons[i];
    if (e[var] == 0 || c_[i] == 0.0) continue;
    const double f = e[var];
    e[var] -= 1;
    d.c_[monomial_index(e)] += f * c_[i];
  }
  return d;
}

Eigen::Vector3d TernaryForm::gradient(const Eigen::Vector3d& p) const {
  return {derivative(0)(p), derivative(1)(p), derivative(2)(p)};
}

TernaryForm& TernaryForm::operator+=(const TernaryForm& o) {
  if (o.degree_ != degree_) throw std::invalid_argument("degree mismatch in form addition");
  c_ += o.c_;
  return *this;
}

TernaryForm& TernaryForm::operator-=(const TernaryForm& o) {
  if (o.degree_ != degree_) throw std::invalid_argument("degree mismatch in form subtraction");
  c_ -= o.c_;
  return *this;
}

TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
  TernaryForm r(a.degree_ + b.degree_);
  const auto ma = monomials(a.degree_);
  const auto mb = monomials(b.degree_);
  for (size_t i = 0; i < ma.size(); ++i) {
    if (a.c_[i] == 0.0) continue;
    for (size_t j = 0; j < mb.size(); ++j) {
      if (b.c_[j] == 0.0) continue;
      r.c_[monomial_index({ma[i][0] + mb[j][0], ma[i][1] + mb[j][1], ma[i][2] + mb[j][2]})] += a.c_[i] * b.c_[j];
    }
  }
  return r;
}

TernaryForm TernaryForm::pow(int n) const {
  TernaryForm r = TernaryForm::monomial({0, 0, 0});
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

TernaryForm TernaryForm::substitute(const Eigen::Matrix3d& S) const {
  // x_i = sum_j S(i,j) w_j
  std::array<std::vector<TernaryForm>, 3> powers;
  for (int i = 0; i < 3; ++i) {
    const TernaryForm li = linear(S.row(i).transpose());
    powers[i].push_back(monomial({0, 0, 0}));
    for (int k = 1; k <= degree_; ++k) powers[i].push_back(powers[i].back() * li);
  }
  TernaryForm r(degree_);
  const auto mons = monomials(degree_);
  for (size_t i = 0; i < mons.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const auto& e = mons[i];
    r += c_[i] * (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]);
  }
  return r;
}

std::vector<std::complex<double>> restrict_to_line(const TernaryForm& f, const Eigen::Vector3cd& p,
                                                   const Eigen::Vector3cd& v) {
  using C = std::complex<double>;
  const int n = f.degree() + 1;
  auto lin = [&](int i) { return Series<C>::variable(n, p[i], v[i]); };
  const Series<C> val = f.eval(lin(0), lin(1), lin(2), Series<C>(n, C(1.0)));
  return val.coeffs();
}

Eigen::Vector3d normalize_projective(const Eigen::Vector3d& p) {
  Eigen::Vector3d q = p / p.norm();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(q[i]) > 1e-12) {
      if (q[i] < 0) q = -q;
      break;
    }
  }
  return q;
}

double projective_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  const Eigen::Vector3d a = p / p.norm();
  const Eigen::Vector3d b = q / q.norm();
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace cubic
