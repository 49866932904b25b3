#include "cubic/curve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>

#include "cubic/roots.hpp"

namespace cubic {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::RepeatedRoot: return "RepeatedRoot";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::OffCurve: return "OffCurve";
    case ErrorCode::EmptyComponent: return "EmptyComponent";
    case ErrorCode::DegenerateLine: return "DegenerateLine";
    case ErrorCode::CommonComponent: return "CommonComponent";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotTotallyReal: return "NotTotallyReal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::JetFailure: return "JetFailure";
    case ErrorCode::NoQuadric: return "NoQuadric";
    case ErrorCode::RankAmbiguous: return "RankAmbiguous";
    case ErrorCode::WrongTorsionClass: return "WrongTorsionClass";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::AtomCollision: return "AtomCollision";
    case ErrorCode::AtomAtInfinity: return "AtomAtInfinity";
    case ErrorCode::CurveMismatch: return "CurveMismatch";
    case ErrorCode::RankNotStabilized: return "RankNotStabilized";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::ComplexAtoms: return "ComplexAtoms";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

WeierstrassData WeierstrassData::make(double a1, const RootPair& pair) {
  WeierstrassData w;
  w.a1 = a1;
  w.pair = pair;
  if (const auto* rp = std::get_if<RealPair>(&pair)) {
    const double a2 = rp->a2, a3 = rp->a3;
    if (std::abs(a1 - a2) <= 1e-10 || std::abs(a1 - a3) <= 1e-10 || std::abs(a2 - a3) <= 1e-10)
      throw Error(ErrorCode::RepeatedRoot, "two roots coincide, the cubic is singular");
    if (!(a1 < a2 && a2 < a3)) throw Error(ErrorCode::OrderViolation, "real roots must satisfy a1 < a2 < a3");
    w.A = -(a1 + a2 + a3);
    w.B = a1 * a2 + a1 * a3 + a2 * a3;
    w.C = -a1 * a2 * a3;
  } else {
    const auto& cp = std::get<ComplexPair>(pair);
    if (std::abs(cp.im) <= 1e-10) throw Error(ErrorCode::RepeatedRoot, "complex pair collapses to a double real root");
    const double n2 = cp.re * cp.re + cp.im * cp.im;
    w.A = -(a1 + 2 * cp.re);
    w.B = 2 * a1 * cp.re + n2;
    w.C = -a1 * n2;
  }
  return w;
}

std::complex<double> WeierstrassData::a2() const {
  if (const auto* rp = std::get_if<RealPair>(&pair)) return rp->a2;
  const auto& cp = std::get<ComplexPair>(pair);
  return {cp.re, cp.im};
}

std::complex<double> WeierstrassData::a3() const {
  if (const auto* rp = std::get_if<RealPair>(&pair)) return rp->a3;
  const auto& cp = std::get<ComplexPair>(pair);
  return {cp.re, -cp.im};
}

double WeierstrassData::p_plus_r() const { return (a2() + a3()).real() - 2 * a1; }
double WeierstrassData::p_times_r() const { return ((a2() - a1) * (a3() - a1)).real(); }

const char* component_name(Component c) {
  switch (c) {
    case Component::Oval: return "Oval";
    case Component::Unbounded: return "Unbounded";
    case Component::Whole: return "Whole";
  }
  return "?";
}

std::optional<Component> parse_component(const std::string& label) {
  std::string l = label;
  for (auto& ch : l) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (l == "oval") return Component::Oval;
  if (l == "unbounded") return Component::Unbounded;
  if (l == "whole") return Component::Whole;
  return std::nullopt;
}

const char* torsion_name(TorsionClass t) {
  switch (t) {
    case TorsionClass::NotApplicable: return "NotApplicable";
    case TorsionClass::O: return "O";
    case TorsionClass::T1: return "T1";
    case TorsionClass::T2: return "T2";
    case TorsionClass::T3: return "T3";
    case TorsionClass::NonTorsion: return "NonTorsion";
  }
  return "?";
}

CurvePoint CurvePoint::identity(const Eigen::Matrix3d& M) {
  CurvePoint p;
  p.at_infinity_ = true;
  p.working_ = normalize_projective(M.col(2));
  return p;
}

CurvePoint CurvePoint::affine(double x, double y, const Eigen::Matrix3d& M) {
  CurvePoint p;
  p.at_infinity_ = false;
  p.x_ = x;
  p.y_ = y;
  p.working_ = normalize_projective(M * Eigen::Vector3d(1, x, y));
  return p;
}

Eigen::Vector3d CurvePoint::weierstrass() const {
  if (at_infinity_) return Eigen::Vector3d::UnitZ();
  return {1, x_, y_};
}

bool same_point(const CurvePoint& p, const CurvePoint& q, double tol) {
  return projective_distance(p.working(), q.working()) <= tol;
}

PlaneCubic::PlaneCubic(const WeierstrassData& w, const Eigen::Matrix3d& transform) : w_(w), M_(transform) {
  if (std::abs(M_.determinant()) <= 1e-10) throw Error(ErrorCode::InvalidInput, "transform is not invertible");
  Minv_ = M_.inverse();
  h_work_ = to_working(weierstrass_equation());
  h_work_.coeffs() /= h_work_.norm();
}

TernaryForm PlaneCubic::weierstrass_equation() const {
  TernaryForm h(3);
  h.coeffs()[monomial_index({1, 0, 2})] = 1;
  h.coeffs()[monomial_index({0, 3, 0})] = -1;
  h.coeffs()[monomial_index({1, 2, 0})] = -w_.A;
  h.coeffs()[monomial_index({2, 1, 0})] = -w_.B;
  h.coeffs()[monomial_index({3, 0, 0})] = -w_.C;
  return h;
}

double PlaneCubic::residual(double x, double y) const {
  return std::abs(y * y - w_.f(x)) / (1 + std::abs(x * x * x));
}

CurvePoint PlaneCubic::point(double x, double y, double tol) const {
  if (!std::isfinite(x) || !std::isfinite(y) || residual(x, y) > tol)
    throw Error(ErrorCode::OffCurve, "point (" + std::to_string(x) + ", " + std::to_string(y) + ") is not on the curve");
  return CurvePoint::affine(x, y, M_);
}

CurvePoint PlaneCubic::from_weierstrass(const Eigen::Vector3d& p, double tol) const {
  const double n = p.norm();
  if (std::abs(p[0]) <= 1e-12 * n) {
    if (std::abs(p[1]) > 1e-6 * n) throw Error(ErrorCode::OffCurve, "point at infinity other than O");
    return identity();
  }
  return point(p[1] / p[0], p[2] / p[0], tol);
}

CurvePoint PlaneCubic::from_working(const Eigen::Vector3d& w, double tol) const {
  return from_weierstrass(Minv_ * w, tol);
}

CurvePoint PlaneCubic::project(double x, double y) const {
  for (int it = 0; it < 4; ++it) {
    const double g = y * y - w_.f(x);
    const double gx = -w_.df(x), gy = 2 * y;
    const double n2 = gx * gx + gy * gy;
    if (n2 == 0 || g == 0) break;
    x -= g * gx / n2;
    y -= g * gy / n2;
  }
  return CurvePoint::affine(x, y, M_);
}

bool PlaneCubic::same_model(const PlaneCubic& o, double tol) const {
  if (w_.real_pair() != o.w_.real_pair()) return false;
  if (std::abs(w_.a1 - o.w_.a1) > tol || std::abs(w_.a2() - o.w_.a2()) > tol) return false;
  return (M_ - o.M_).norm() <= tol * (1 + M_.norm());
}

double PlaneCubic::period(Component comp) const { return comp == Component::Oval ? 2 * M_PI : M_PI; }

Eigen::Vector3d PlaneCubic::lift(Component comp, double t, Eigen::Vector3d* dlift) const {
  if (comp == Component::Oval) {
    if (!w_.real_pair()) throw Error(ErrorCode::EmptyComponent, "connected curve has no oval");
    const double a2 = w_.a2().real(), a3 = w_.a3().real();
    const double h = (a2 - w_.a1) / 2;
    const double c = std::cos(t), s = std::sin(t);
    const double x = w_.a1 + h * (1 - c);
    const double r = std::sqrt(a3 - x);
    const double y = h * s * r;
    if (dlift) {
      const double dx = h * s;
      *dlift = {0, dx, h * (c * r - s * dx / (2 * r))};
    }
    return {1, x, y};
  }
  if (comp == Component::Unbounded && !w_.real_pair())
    throw Error(ErrorCode::EmptyComponent, "the connected curve has the single component Whole");
  if (comp == Component::Whole && w_.real_pair())
    throw Error(ErrorCode::EmptyComponent, "the disconnected curve has components Oval and Unbounded");
  const double a = comp == Component::Whole ? w_.a1 : w_.a3().real();
  const double beta = w_.A + a, gamma = w_.B + a * w_.A + a * a;
  const double c = std::cos(t), s = std::sin(t);
  const double p = a * c * c + s * s;
  const double G = p * p + beta * p * c * c + gamma * c * c * c * c;
  const double sg = std::sqrt(G);
  if (dlift) {
    const double dp = 2 * s * c * (1 - a);
    const double dG = 2 * p * dp + beta * (dp * c * c - 2 * p * c * s) - 4 * gamma * c * c * c * s;
    *dlift = {-3 * c * c * s, dp * c - p * s, c * sg + s * dG / (2 * sg)};
  }
  return {c * c * c, p * c, s * sg};
}

Component PlaneCubic::component_of(const CurvePoint& p) const {
  if (!w_.real_pair()) return Component::Whole;
  if (p.is_identity()) return Component::Unbounded;
  const double a2 = w_.a2().real(), a3 = w_.a3().real();
  return p.x() <= (a2 + a3) / 2 ? Component::Oval : Component::Unbounded;
}

double PlaneCubic::parameter_of(Component comp, const CurvePoint& p) const {
  if (comp == Component::Oval) {
    const double h = (w_.a2().real() - w_.a1) / 2;
    const double cs = std::clamp(1 - (p.x() - w_.a1) / h, -1.0, 1.0);
    double th = std::acos(cs);
    if (p.y() < 0) th = 2 * M_PI - th;
    return th;
  }
  if (p.is_identity()) return M_PI / 2;
  const double a = comp == Component::Whole ? w_.a1 : w_.a3().real();
  double ph = std::atan(std::sqrt(std::max(0.0, p.x() - a)));
  if (p.y() < 0) ph = M_PI - ph;
  return ph;
}

PlaneCubic new_weierstrass(double a1, const RootPair& pair, const Eigen::Matrix3d& transform) {
  return PlaneCubic(WeierstrassData::make(a1, pair), transform);
}

Topology topology(const PlaneCubic& c) {
  const auto& w = c.data();
  const double inf = std::numeric_limits<double>::infinity();
  if (w.real_pair())
    return {TopologyKind::TwoComponents,
            {Component::Oval, Component::Unbounded},
            {{w.a1, w.a2().real()}, {w.a3().real(), inf}}};
  return {TopologyKind::Connected, {Component::Whole}, {{w.a1, inf}}};
}

namespace {

void check_on_curve(const PlaneCubic& c, const CurvePoint& P) {
  if (!P.is_identity() && c.residual(P.x(), P.y()) > 1e-6)
    throw Error(ErrorCode::OffCurve, "input point is not on the curve");
}

}  // namespace

CurvePoint add(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q) {
  check_on_curve(c, P);
  check_on_curve(c, Q);
  if (P.is_identity()) return Q;
  if (Q.is_identity()) return P;
  const auto& w = c.data();
  const double xp = P.x(), yp = P.y(), xq = Q.x(), yq = Q.y();
  if (std::max(std::abs(xp), std::abs(xq)) > 4 * (1 + std::min(std::abs(xp), std::abs(xq)))) {
    // one summand far out: lambda^2 - x_far expanded with y_far^2 = f(x_far), so the
    // leading x_far^3 terms cancel symbolically
    const bool p_far = std::abs(xp) > std::abs(xq);
    const double xf = p_far ? xp : xq, yf = p_far ? yp : yq, xn = p_far ? xq : xp, yn = p_far ? yq : yp;
    const double dx = xn - xf, lambda = (yn - yf) / dx;
    const double N = yn * yn - 2 * yf * yn + (w.A * xf + w.B) * xf + w.C - xf * xn * xn + 2 * xf * xf * xn;
    const double x3 = N / (dx * dx) - w.A - xn;
    return CurvePoint::affine(x3, lambda * (xn - x3) - yn, c.transform());
  }
  double lambda;
  if (std::abs(xp - xq) <= 1e-12 * (1 + std::abs(xp) + std::abs(xq))) {
    if (std::abs(yp + yq) <= 1e-12 * (1 + std::abs(yp) + std::abs(yq))) return c.identity();
    lambda = w.df(xp) / (2 * yp);
  } else if (std::abs(yp + yq) > std::abs(yq - yp)) {
    // divided difference of f over yp + yq, no cancellation when P and Q are close
    lambda = (xp * xp + xp * xq + xq * xq + w.A * (xp + xq) + w.B) / (yp + yq);
  } else {
    lambda = (yq - yp) / (xq - xp);
  }
  const double x3 = lambda * lambda - w.A - xp - xq;
  const double y3 = lambda * (xp - x3) - yp;
  return CurvePoint::affine(x3, y3, c.transform());
}

CurvePoint neg(const PlaneCubic& c, const CurvePoint& P) {
  check_on_curve(c, P);
  if (P.is_identity()) return P;
  return CurvePoint::affine(P.x(), -P.y(), c.transform());
}

CurvePoint sum_points(const PlaneCubic& c, const std::vector<CurvePoint>& pts) {
  CurvePoint s = c.identity();
  for (const auto& p : pts) s = add(c, s, p);
  return s;
}

TorsionSet two_torsion(const PlaneCubic& c) {
  const auto& w = c.data();
  TorsionSet t;
  const CurvePoint O = c.identity();
  const CurvePoint T1 = CurvePoint::affine(w.a1, 0, c.transform());
  t.all_real = {O, T1};
  if (w.real_pair()) {
    t.all_real.push_back(CurvePoint::affine(w.a2().real(), 0, c.transform()));
    t.all_real.push_back(CurvePoint::affine(w.a3().real(), 0, c.transform()));
  }
  t.positive = {O, T1};
  return t;
}

TorsionClass classify_torsion(const PlaneCubic& c, const CurvePoint& s, double tol) {
  const auto t = two_torsion(c);
  if (s.is_identity() || same_point(s, t.all_real[0], tol)) return TorsionClass::O;
  static const TorsionClass names[] = {TorsionClass::O, TorsionClass::T1, TorsionClass::T2, TorsionClass::T3};
  for (size_t i = 1; i < t.all_real.size(); ++i)
    if (same_point(s, t.all_real[i], tol)) return names[i];
  return TorsionClass::NonTorsion;
}

std::vector<CurvePoint> sample_real_locus(const PlaneCubic& c, int n, std::optional<Component> component,
                                          bool affine_only, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "sample count must be positive");
  const Topology topo = topology(c);
  if (component && std::find(topo.components.begin(), topo.components.end(), *component) == topo.components.end())
    throw Error(ErrorCode::EmptyComponent, std::string("no component ") + component_name(*component));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto& w = c.data();
  std::vector<CurvePoint> out;
  out.reserve(n);
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (++attempts > 1000 * n) throw Error(ErrorCode::EmptyComponent, "could not draw affine samples");
    const int i = static_cast<int>(out.size());
    const Component comp = component ? *component : topo.components[i % topo.components.size()];
    const double sign = (i / topo.components.size()) % 2 == 0 ? 1.0 : -1.0;
    CurvePoint p;
    if (comp == Component::Oval) {
      const Eigen::Vector3d l = c.lift(comp, M_PI * U(rng));
      p = CurvePoint::affine(l[1], sign * l[2], c.transform());
    } else {
      const double a = comp == Component::Whole ? w.a1 : w.a3().real();
      const double t = 0.999 * U(rng);
      const double x = a + t * t / (1 - t);
      p = CurvePoint::affine(x, sign * std::sqrt(std::max(0.0, w.f(x))), c.transform());
    }
    if (affine_only && std::abs(p.working()[0]) <= 1e-9) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<CurvePoint> sample_real_locus(const PlaneCubic& c, int n, const std::string& component_label,
                                          bool affine_only, std::uint64_t seed) {
  const auto comp = parse_component(component_label);
  if (!comp) throw Error(ErrorCode::EmptyComponent, "unknown component label '" + component_label + "'");
  return sample_real_locus(c, n, comp, affine_only, seed);
}

Eigen::Vector3d line_through(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q) {
  Eigen::Vector3d n;
  if (same_point(P, Q, 1e-10)) n = c.working_equation().gradient(P.working());
  else n = P.working().cross(Q.working());
  return n / n.norm();
}

PlaneCubic transform_line_to_infinity(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q) {
  if (same_point(P, Q, 1e-10)) throw Error(ErrorCode::DegenerateLine, "P and Q coincide, no unique line");
  const Eigen::Vector3d n = line_through(c, P, Q);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(n)};
  const Eigen::MatrixXd Qm = qr.householderQ();
  Eigen::Matrix3d N;
  N.row(0) = n.transpose();
  N.row(1) = Qm.col(1).transpose();
  N.row(2) = Qm.col(2).transpose();
  return PlaneCubic(c.data(), N * c.transform());
}

std::vector<InfinityPoint> points_at_infinity(const PlaneCubic& c) {
  const auto& w = c.data();
  Eigen::Vector3d n = c.transform().row(0).transpose();
  n /= n.norm();
  std::vector<InfinityPoint> out;
  if (std::abs(n[2]) <= 1e-12) {
    if (std::abs(n[1]) <= 1e-12) return {{c.identity(), 3}};
    const double x = -n[0] / n[1];
    const double fx = w.f(x);
    if (std::abs(fx) <= 1e-12 * (1 + std::abs(x * x * x))) {
      out.push_back({CurvePoint::affine(x, 0, c.transform()), 2});
    } else if (fx > 0) {
      out.push_back({CurvePoint::affine(x, std::sqrt(fx), c.transform()), 1});
      out.push_back({CurvePoint::affine(x, -std::sqrt(fx), c.transform()), 1});
    }
    out.push_back({c.identity(), 1});
    return out;
  }
  const double alpha = -n[1] / n[2], beta = -n[0] / n[2];
  const std::vector<double> cub = {w.C - beta * beta, w.B - 2 * alpha * beta, w.A - alpha * alpha, 1.0};
  for (const auto& r : real_roots(cub)) {
    const CurvePoint p = c.project(r.x, alpha * r.x + beta);
    out.push_back({p, r.multiplicity});
  }
  return out;
}

}  // namespace cubic
