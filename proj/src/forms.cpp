#include "cubic/forms.hpp"

#include "cubic/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubic {

QForm::QForm(const TernaryForm& f, bool fix_sign) : TernaryForm(fix_sign ? f.normalized() : f) {
  if (degree() % 2 != 0) throw Error(ErrorCode::InvalidInput, "forms must have even degree");
  if (norm() == 0) throw Error(ErrorCode::InvalidInput, "zero form");
  if (!fix_sign) coeffs() /= norm();
}

TernaryForm FormSpace::combine(const Eigen::VectorXd& coords) const {
  TernaryForm f(degree);
  for (size_t i = 0; i < basis.size(); ++i) f += coords[i] * basis[i];
  return f;
}

FormSpace cubic_form_space(const PlaneCubic& c, int degree) {
  FormSpace s{degree, {}};
  for (const auto& e : monomials(degree)) {
    if (e[1] > 2) continue;
    TernaryForm b = c.to_working(TernaryForm::monomial(e));
    b.coeffs() /= b.norm();
    s.basis.push_back(std::move(b));
  }
  return s;
}

FormSpace curve_form_space(const TernaryForm& curve_eq, int degree) {
  const int n = curve_eq.degree();
  int k = 0;
  double best = -1;
  for (int i = 0; i < 3; ++i) {
    Exponent e{0, 0, 0};
    e[i] = n;
    if (std::abs(curve_eq.coeff(e)) > best) best = std::abs(curve_eq.coeff(e)), k = i;
  }
  if (best <= 1e-12 * curve_eq.norm())
    throw Error(ErrorCode::InvalidInput, "curve has no pure power term, cannot build a normal set");
  FormSpace s{degree, {}};
  for (const auto& e : monomials(degree))
    if (e[k] < n) s.basis.push_back(TernaryForm::monomial(e));
  return s;
}

Eigen::MatrixXd jet_matrix(const TernaryForm& curve_eq, const FormSpace& space, const Eigen::Vector3d& p, int order) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(p[i]) > std::abs(p[k])) k = i;
  const Eigen::Vector3d q = p / p[k];
  const Eigen::Vector3d g = curve_eq.gradient(q);
  int i1 = (k + 1) % 3, i2 = (k + 2) % 3;
  if (std::max(std::abs(g[i1]), std::abs(g[i2])) <= 1e-10 * curve_eq.norm())
    throw Error(ErrorCode::JetFailure, "curve is singular at the requested point");
  if (std::abs(g[i1]) > std::abs(g[i2])) std::swap(i1, i2);
  const int free = i1, dep = i2;

  using S = Series<double>;
  std::array<S, 3> x;
  x[k] = S(order, 1.0);
  x[free] = S::variable(order, q[free], 1.0);
  x[dep] = S(order, q[dep]);
  const S one(order, 1.0);
  for (int n = 1; n < order; ++n) {
    const S r = curve_eq.eval(x[0], x[1], x[2], one);
    x[dep][n] = -r[n] / g[dep];
  }
  if (std::abs(curve_eq.eval(x[0], x[1], x[2], one)[order - 1]) > 1e-6 * (1 + curve_eq.norm()))
    throw Error(ErrorCode::JetFailure, "local parametrization did not converge");

  Eigen::MatrixXd J(order, space.basis.size());
  for (size_t j = 0; j < space.basis.size(); ++j) {
    const S v = space.basis[j].eval(x[0], x[1], x[2], one);
    for (int n = 0; n < order; ++n) J(n, j) = v[n];
  }
  return J;
}

std::vector<Eigen::VectorXd> double_vanishing_kernel(const TernaryForm& curve_eq, const FormSpace& space,
                                                     const std::vector<std::pair<Eigen::Vector3d, int>>& points,
                                                     double rank_tol) {
  const int n = static_cast<int>(space.basis.size());
  std::vector<Eigen::VectorXd> rows;
  for (const auto& [p, m] : points) {
    const Eigen::MatrixXd J = jet_matrix(curve_eq, space, p, 2 * m);
    for (int r = 0; r < J.rows(); ++r) {
      const double nr = J.row(r).norm();
      if (nr > 0) rows.push_back(J.row(r).transpose() / nr);
    }
  }
  std::vector<Eigen::VectorXd> out;
  if (rows.empty()) {
    for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Unit(n, i));
    return out;
  }
  Eigen::MatrixXd K(std::max<int>(rows.size(), n), n);
  K.setZero();
  for (size_t r = 0; r < rows.size(); ++r) K.row(r) = rows[r].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * sv[0]) ++rank;
  for (int i = rank; i < n; ++i) out.push_back(svd.matrixV().col(i));
  return out;
}

namespace {

std::vector<std::pair<Eigen::Vector3d, int>> real_points_of(const Divisor& D) {
  if (!D.totally_real()) throw Error(ErrorCode::NotTotallyReal, "divisor has complex support");
  std::vector<std::pair<Eigen::Vector3d, int>> pts;
  for (const auto& e : D.entries()) pts.emplace_back(normalize_projective(e.point.real()), e.mult);
  return pts;
}

std::vector<QForm> to_forms(const FormSpace& space, const std::vector<Eigen::VectorXd>& ker) {
  std::vector<QForm> out;
  for (const auto& v : ker) out.emplace_back(space.combine(v));
  return out;
}

}  // namespace

std::vector<QForm> interpolate_double_vanishing(const PlaneCubic& c, const Divisor& D, int twod) {
  if (twod < 2 || twod % 2) throw Error(ErrorCode::InvalidInput, "degree must be even and positive");
  if (2 * D.degree() > 3 * twod) throw Error(ErrorCode::OutOfRange, "double zeros exceed the Bezout bound");
  const FormSpace space = cubic_form_space(c, twod);
  return to_forms(space, double_vanishing_kernel(c.working_equation(), space, real_points_of(D)));
}

std::vector<QForm> interpolate_double_vanishing(const TernaryForm& curve_eq, const Divisor& D, int twod) {
  if (twod < 2 || twod % 2) throw Error(ErrorCode::InvalidInput, "degree must be even and positive");
  if (2 * D.degree() > curve_eq.degree() * twod) throw Error(ErrorCode::OutOfRange, "double zeros exceed the Bezout bound");
  const FormSpace space = curve_form_space(curve_eq, twod);
  return to_forms(space, double_vanishing_kernel(curve_eq, space, real_points_of(D)));
}

double value_on_component(const PlaneCubic& c, const TernaryForm& q, Component comp, double t) {
  const Eigen::Vector3d w = c.transform() * c.lift(comp, t);
  return q(w / w.norm());
}

ExtremeQuadric extreme_quadric(const PlaneCubic& c, const std::vector<CurvePoint>& atoms, int d) {
  if (d < 1) throw Error(ErrorCode::OutOfRange, "half-degree must be at least 1");
  if (static_cast<int>(atoms.size()) != 3 * d) throw Error(ErrorCode::Precondition, "expected 3d atoms");
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (same_point(atoms[i], atoms[j])) throw Error(ErrorCode::Precondition, "atoms must be distinct");
  ExtremeQuadric r;
  r.torsion_class = classify_torsion(c, sum_points(c, atoms));
  if (r.torsion_class == TorsionClass::NonTorsion)
    throw Error(ErrorCode::NoQuadric, "atom sum is not a 2-torsion point");
  const auto ker = interpolate_double_vanishing(c, Divisor::from_points(atoms), 2 * d);
  if (ker.empty()) throw Error(ErrorCode::NoQuadric, "double-vanishing system has only the zero solution");
  if (ker.size() >= 2) throw Error(ErrorCode::RankAmbiguous, "double-vanishing kernel has dimension >= 2");
  TernaryForm q = ker[0];
  const Component comp = c.component_of(atoms[0]);
  double best = 0;
  for (int i = 0; i < 512; ++i) {
    const double v = value_on_component(c, q, comp, (i + 0.5) / 512 * c.period(comp));
    if (std::abs(v) > std::abs(best)) best = v;
  }
  if (best < 0) q *= -1;
  r.form = QForm(q, false);
  r.nonnegative = r.torsion_class == TorsionClass::O || r.torsion_class == TorsionClass::T1;
  return r;
}

namespace {

struct SignScan {
  double min = 1e300, max = -1e300;
  Eigen::Vector3d argmin;
  int count = 0;
  void add(double v, const Eigen::Vector3d& w) {
    ++count;
    max = std::max(max, v);
    if (v < min) min = v, argmin = w;
  }
};

void finish(NonnegReport& r, const SignScan& s) {
  r.min_sampled_value = s.min;
  r.max_sampled_value = s.max;
  r.samples = s.count;
  r.nonneg = r.even_multiplicities && s.min >= -1e-10 && s.max > 1e-10;
  if (!r.nonneg) r.witness = s.argmin;
}

// 512 quasi-uniform parameters plus midpoints between consecutive zeros (cyclic)
std::vector<double> scan_parameters(std::vector<double> zeros, double period) {
  std::vector<double> ts;
  for (int i = 0; i < 512; ++i) ts.push_back((i + 0.5) / 512 * period);
  std::sort(zeros.begin(), zeros.end());
  for (size_t i = 0; i < zeros.size(); ++i) {
    const double a = zeros[i], b = i + 1 < zeros.size() ? zeros[i + 1] : zeros[0] + period;
    ts.push_back(std::fmod((a + b) / 2, period));
  }
  return ts;
}

}  // namespace

NonnegReport nonnegativity_check(const PlaneCubic& c, const TernaryForm& q) {
  NonnegReport r;
  r.real_zero_divisor = real_part(intersection_divisor(c.working_equation(), q));
  r.even_multiplicities = true;
  for (const auto& e : r.real_zero_divisor.entries()) r.even_multiplicities &= e.mult % 2 == 0;
  const Topology topo = topology(c);
  SignScan scan;
  for (const Component comp : topo.components) {
    std::vector<double> zeros;
    for (const auto& p : r.real_zero_divisor.real_support()) {
      const Eigen::Vector3d x = c.inverse_transform() * p;
      const CurvePoint P = std::abs(x[0]) <= 1e-12 * x.norm() ? c.identity() : c.project(x[1] / x[0], x[2] / x[0]);
      if (c.component_of(P) == comp) zeros.push_back(c.parameter_of(comp, P));
    }
    const double T = c.period(comp);
    for (const double t : scan_parameters(zeros, T)) {
      Eigen::Vector3d w = c.transform() * c.lift(comp, t);
      w.normalize();
      scan.add(q(w), w);
    }
  }
  finish(r, scan);
  return r;
}

NonnegReport nonnegativity_check(const TernaryForm& curve_eq, const TernaryForm& q) {
  NonnegReport r;
  r.real_zero_divisor = real_part(intersection_divisor(curve_eq, q));
  r.even_multiplicities = true;
  for (const auto& e : r.real_zero_divisor.entries()) r.even_multiplicities &= e.mult % 2 == 0;

  // pencil of lines through a point off the curve
  Eigen::Vector3d P0(0.3127, -0.2281, 0.9211);
  P0.normalize();
  for (int tries = 0; std::abs(curve_eq(P0)) < 1e-3 * curve_eq.norm() && tries < 16; ++tries)
    P0 = Eigen::Vector3d(P0[0] + 0.137, P0[1] - 0.071, P0[2]).normalized();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(P0)};
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::Vector3d e1 = Q.col(1), e2 = Q.col(2);
  Eigen::Matrix3d Bm;
  Bm << P0, e1, e2;

  std::vector<double> zeros;
  for (const auto& p : r.real_zero_divisor.real_support()) {
    const Eigen::Vector3d co = Bm.colPivHouseholderQr().solve(p);
    zeros.push_back(std::fmod(std::atan2(co[2], co[1]) + 2 * M_PI, M_PI));
  }
  SignScan scan;
  for (const double psi : scan_parameters(zeros, M_PI)) {
    const Eigen::Vector3d v = std::cos(psi) * e1 + std::sin(psi) * e2;
    const auto lc = restrict_to_line(curve_eq, P0.cast<cplx>(), v.cast<cplx>());
    std::vector<double> re(lc.size());
    for (size_t i = 0; i < lc.size(); ++i) re[i] = lc[i].real();
    for (const auto& root : real_roots(re)) {
      Eigen::Vector3d w = P0 + root.x * v;
      w.normalize();
      scan.add(q(w), w);
    }
  }
  finish(r, scan);
  return r;
}

double certificate_identity_error(const Certificate& cert, const Eigen::Vector3d& w, double* scale) {
  const double l12 = cert.l_a1a2.dot(w), ls = cert.l_sum_a3.dot(w), lv = cert.l_vertical.dot(w);
  const double lt = cert.l_t1.dot(w);
  const double num = l12 * l12 * ls * ls * cert.aux_numerator(w);
  const double den = lv * lv * lt * lt * cert.aux_denominator(w);
  const double qd = cert.q(w) * den;
  if (scale) *scale = std::abs(qd);
  return qd - cert.alpha * num;
}

Certificate artin_certificate(const PlaneCubic& c, const std::vector<CurvePoint>& atoms, std::uint64_t seed) {
  if (atoms.size() != 3) throw Error(ErrorCode::Precondition, "a certificate needs exactly 3 atoms");
  const TorsionClass cls = classify_torsion(c, sum_points(c, atoms));
  if (cls != TorsionClass::T1)
    throw Error(ErrorCode::WrongTorsionClass, std::string("atom sum is ") + torsion_name(cls) + ", the certificate needs T1");
  Certificate cert;
  // first ordering whose construction points are pairwise distinct
  std::array<int, 3> perm{0, 1, 2};
  bool found = false;
  do {
    const CurvePoint &A1 = atoms[perm[0]], &A2 = atoms[perm[1]], &A3 = atoms[perm[2]];
    const CurvePoint P12 = add(c, A1, A2), N12 = neg(c, P12);
    if (same_point(A1, A2) || same_point(P12, A3) || same_point(N12, P12)) continue;
    cert.atoms = {A1, A2, A3};
    cert.l_a1a2 = line_through(c, A1, A2);
    cert.l_sum_a3 = line_through(c, P12, A3);
    cert.l_vertical = line_through(c, N12, P12);
    found = true;
    break;
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!found) throw Error(ErrorCode::DegenerateLine, "construction points coincide for every atom ordering");

  const auto& w = c.data();
  const Eigen::Matrix3d& Mi = c.inverse_transform();
  cert.l_o = Mi.row(0).transpose();
  cert.l_t1 = (Mi.row(1) - w.a1 * Mi.row(0)).transpose();
  const TernaryForm lO = TernaryForm::linear(cert.l_o), lT = TernaryForm::linear(cert.l_t1);
  const TernaryForm X2 = TernaryForm::linear(Mi.row(2).transpose());
  cert.p_plus_r = w.p_plus_r();
  cert.p_times_r = w.p_times_r();
  cert.manifestly_nonnegative = cert.p_plus_r >= 0 && cert.p_times_r >= 0;
  cert.aux_numerator = X2 * X2 * lO * lO + cert.p_plus_r * (lO * lO * lT * lT);
  cert.aux_denominator = lT * lT + cert.p_times_r * (lO * lO);
  cert.q = extreme_quadric(c, atoms, 1).form;

  const auto pts = sample_real_locus(c, 200, std::nullopt, false, seed);
  std::vector<double> num(pts.size()), den(pts.size());
  double den_max = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector3d& x = pts[i].working();
    const double l12 = cert.l_a1a2.dot(x), ls = cert.l_sum_a3.dot(x), lv = cert.l_vertical.dot(x), lt = cert.l_t1.dot(x);
    num[i] = l12 * l12 * ls * ls * cert.aux_numerator(x);
    den[i] = lv * lv * lt * lt * cert.aux_denominator(x);
    den_max = std::max(den_max, std::abs(den[i]));
  }
  std::vector<size_t> keep;
  for (size_t i = 0; i < pts.size(); ++i)
    if (std::abs(den[i]) >= 1e-6 * den_max) keep.push_back(i);
  if (keep.empty()) throw Error(ErrorCode::VerificationFailed, "no usable samples");
  const size_t ref = *std::max_element(keep.begin(), keep.end(),
                                       [&](size_t a, size_t b) { return std::abs(num[a]) < std::abs(num[b]); });
  cert.alpha = cert.q(pts[ref].working()) * den[ref] / num[ref];
  double err = 0, scale = 0;
  for (const size_t i : keep) {
    const double qd = cert.q(pts[i].working()) * den[i];
    err = std::max(err, std::abs(qd - cert.alpha * num[i]));
    scale = std::max(scale, std::abs(qd));
  }
  cert.residual = err / scale;
  cert.samples_used = static_cast<int>(keep.size());
  if (!(cert.alpha > 0)) throw Error(ErrorCode::VerificationFailed, "certificate constant is not positive");
  if (!(cert.residual <= 1e-7))
    throw Error(ErrorCode::VerificationFailed, "certificate identity residual " + std::to_string(cert.residual));
  return cert;
}

SeparatingQuadric separating_quadric(const PlaneCubic& c, const std::vector<CurvePoint>& B) {
  if (topology(c).kind != TopologyKind::TwoComponents)
    throw Error(ErrorCode::Precondition, "separating quadric needs a disconnected real locus");
  if (B.size() != 2) throw Error(ErrorCode::Precondition, "expected two oval points");
  for (const auto& b : B)
    if (b.is_identity() || c.component_of(b) != Component::Oval)
      throw Error(ErrorCode::Precondition, "points must lie on the oval");
  if (same_point(B[0], B[1])) throw Error(ErrorCode::Precondition, "oval points must be distinct");
  const auto tors = two_torsion(c);
  const CurvePoint s = neg(c, add(c, B[0], B[1]));
  SeparatingQuadric r;
  r.a2 = add(c, tors.all_real[2], s);
  r.a3 = add(c, tors.all_real[3], s);
  for (const auto* a : {&r.a2, &r.a3})
    if (same_point(*a, B[0], 1e-6) || same_point(*a, B[1], 1e-6))
      throw Error(ErrorCode::AtomCollision, "auxiliary point coincides with an input point");
  if (same_point(r.a2, r.a3, 1e-6)) throw Error(ErrorCode::AtomCollision, "auxiliary points coincide");
  r.q2 = extreme_quadric(c, {B[0], B[1], r.a2}, 1).form;
  r.q3 = extreme_quadric(c, {B[0], B[1], r.a3}, 1).form;
  r.form = QForm(r.q2 + r.q3, false);
  double worst = -1e300, oval_min = 1e300;
  for (int i = 0; i < 512; ++i) {
    worst = std::max(worst, value_on_component(c, r.form, Component::Unbounded, (i + 0.5) / 512 * M_PI));
    oval_min = std::min(oval_min, value_on_component(c, r.form, Component::Oval, (i + 0.5) / 512 * 2 * M_PI));
  }
  r.delta = -worst;
  if (!(r.delta > 0) || oval_min < -1e-9)
    throw Error(ErrorCode::VerificationFailed, "sum of the auxiliary quadrics does not separate the components");
  return r;
}

}  // namespace cubic
