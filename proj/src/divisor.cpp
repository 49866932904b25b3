#include "cubic/divisor.hpp"

#include <cmath>
#include <random>

#include "cubic/roots.hpp"

namespace cubic {

Eigen::Vector3cd normalize_complex_point(const Eigen::Vector3cd& p) {
  // phase fixed by the largest coordinate (ties to the first), unit norm
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(p[i]) > std::abs(p[k]) * (1 + 1e-9)) k = i;
  Eigen::Vector3cd q = p / p[k];
  q /= q.norm();
  if (q.imag().norm() <= 1e-7) return normalize_projective(q.real()).cast<cplx>();
  return q;
}

double complex_point_distance(const Eigen::Vector3cd& p, const Eigen::Vector3cd& q) {
  const Eigen::Vector3cd a = p / p.norm(), b = q / q.norm();
  const cplx ip = b.dot(a);  // conj(b)^T a
  const double c = std::abs(ip);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, c)));
}

Divisor Divisor::from_points(const std::vector<CurvePoint>& pts) {
  Divisor D;
  for (const auto& p : pts) D.add(p, 1);
  return D;
}

void Divisor::add(const Eigen::Vector3cd& p, int mult, bool real) {
  const Eigen::Vector3cd q = normalize_complex_point(p);
  for (auto& e : entries_) {
    if (complex_point_distance(e.point, q) <= 1e-8) {
      e.mult += mult;
      return;
    }
  }
  entries_.push_back({q, mult, real});
}

void Divisor::add(const CurvePoint& p, int mult) { add(p.working().cast<cplx>(), mult, true); }

int Divisor::degree() const {
  int d = 0;
  for (const auto& e : entries_) d += e.mult;
  return d;
}

bool Divisor::totally_real() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const DivisorEntry& e) { return e.real; });
}

std::vector<Eigen::Vector3d> Divisor::real_support() const {
  std::vector<Eigen::Vector3d> out;
  for (const auto& e : entries_)
    if (e.real) out.push_back(normalize_projective(e.point.real()));
  return out;
}

Divisor real_part(const Divisor& D) {
  Divisor R;
  for (const auto& e : D.entries())
    if (e.real) R.add(e.point, e.mult, true);
  return R;
}

bool divisor_equal(const Divisor& a, const Divisor& b, double tol) {
  if (a.entries().size() != b.entries().size() || a.degree() != b.degree()) return false;
  for (const auto& e : a.entries()) {
    bool found = false;
    for (const auto& f : b.entries())
      if (e.mult == f.mult && complex_point_distance(e.point, f.point) <= tol) found = true;
    if (!found) return false;
  }
  return true;
}

namespace {

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::Matrix3d G;
  for (int i = 0; i < 9; ++i) G.data()[i] = N(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(G);
  return qr.householderQ();
}

// coefficients (ascending in x2) of F(1, z, x2)
std::vector<cplx> fiber_poly(const TernaryForm& F, cplx z) {
  const int m = F.degree();
  std::vector<cplx> out(m + 1, 0.0);
  const auto mons = monomials(m);
  for (size_t i = 0; i < mons.size(); ++i) {
    const double co = F.coeffs()[i];
    if (co == 0.0) continue;
    out[mons[i][2]] += co * std::pow(z, mons[i][1]);
  }
  return out;
}

cplx sylvester_det(const std::vector<cplx>& f, const std::vector<cplx>& g, double* hadamard) {
  const int m = static_cast<int>(f.size()) - 1, k = static_cast<int>(g.size()) - 1;
  const int n = m + k;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < k; ++r)
    for (int j = 0; j <= m; ++j) S(r, r + j) = f[m - j];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= k; ++j) S(k + r, r + j) = g[k - j];
  if (hadamard) {
    double h = 1;
    for (int r = 0; r < n; ++r) h *= S.row(r).norm();
    *hadamard = h;
  }
  return S.partialPivLu().determinant();
}

double rel_value(const TernaryForm& F, const Eigen::Vector3cd& p) {
  return std::abs(F(p)) / (F.norm() * std::pow(p.norm(), F.degree()));
}

struct Attempt {
  bool ok = false;
  bool common = false;
  Divisor D;
};

Attempt try_rotation(const TernaryForm& curve_eq, const TernaryForm& q, const Eigen::Matrix3d& R,
                     const IntersectionOptions& opts) {
  Attempt res;
  const TernaryForm F = curve_eq.substitute(R).normalized();
  const TernaryForm G = q.substitute(R).normalized();
  const int m = F.degree(), k = G.degree();
  // the projection centre (0:0:1) must lie on neither curve
  if (std::abs(F.coeff({0, 0, m})) < 1e-3 || std::abs(G.coeff({0, 0, k})) < 1e-3) return res;

  const int N = m * k + 1;
  std::vector<cplx> vals(N);
  double hmax = 0;
  for (int j = 0; j < N; ++j) {
    const cplx z = std::polar(1.0, 2 * M_PI * j / N);
    double h;
    vals[j] = sylvester_det(fiber_poly(F, z), fiber_poly(G, z), &h);
    hmax = std::max(hmax, h);
  }
  std::vector<cplx> coeffs(N);
  double cmax = 0;
  for (int n = 0; n < N; ++n) {
    cplx s = 0;
    for (int j = 0; j < N; ++j) s += vals[j] * std::polar(1.0, -2 * M_PI * double(j) * n / N);
    coeffs[n] = s / double(N);
    cmax = std::max(cmax, std::abs(coeffs[n]));
  }
  if (cmax <= 1e-11 * hmax) {
    res.common = true;
    return res;
  }
  // a small leading coefficient means an intersection on x0 = 0 after rotation
  if (std::abs(coeffs[m * k]) <= 1e-6 * cmax) return res;
  for (int n = 0; n < N; ++n)
    if (std::abs(coeffs[n]) <= 1e-15 * cmax) coeffs[n] = 0;

  const auto roots = polynomial_roots(coeffs);
  const auto clusters = cluster_roots(coeffs, roots, opts.cluster_radius);
  int total = 0;
  Divisor D;
  for (const auto& cl : clusters) {
    auto cand = polynomial_roots(fiber_poly(F, cl.z));
    const auto cg = polynomial_roots(fiber_poly(G, cl.z));
    cand.insert(cand.end(), cg.begin(), cg.end());
    double best = 1e300;
    Eigen::Vector3cd p;
    for (const auto& zeta : cand) {
      const Eigen::Vector3cd t(1.0, cl.z, zeta);
      const double s = rel_value(F, t) + rel_value(G, t);
      if (s < best) best = s, p = t;
    }
    if (cl.multiplicity == 1) {
      // Newton on (F, G) in the affine chart x0 = 1
      for (int it = 0; it < 4; ++it) {
        const cplx f = F(p), g = G(p);
        Eigen::Matrix2cd J;
        const TernaryForm F1 = F.derivative(1), F2 = F.derivative(2), G1 = G.derivative(1), G2 = G.derivative(2);
        J << F1(p), F2(p), G1(p), G2(p);
        if (std::abs(J.determinant()) == 0) break;
        const Eigen::Vector2cd step = J.partialPivLu().solve(Eigen::Vector2cd(f, g));
        Eigen::Vector3cd pn = p;
        pn[1] -= step[0];
        pn[2] -= step[1];
        if (rel_value(F, pn) + rel_value(G, pn) < rel_value(F, p) + rel_value(G, p)) p = pn;
        else break;
      }
      best = rel_value(F, p) + rel_value(G, p);
    }
    if (best > opts.residual_tol) return res;
    Eigen::Vector3cd x = R.cast<cplx>() * p;
    x = normalize_complex_point(x);
    const bool real = x.imag().norm() <= 1e-7;
    if (real) x = x.real().cast<cplx>();
    D.add(x, cl.multiplicity, real);
    total += cl.multiplicity;
  }
  if (total != m * k || D.degree() != m * k) return res;
  res.ok = true;
  res.D = std::move(D);
  return res;
}

}  // namespace

Divisor intersection_divisor(const TernaryForm& curve_eq, const TernaryForm& q, const IntersectionOptions& opts) {
  if (q.norm() == 0) throw Error(ErrorCode::CommonComponent, "form is identically zero");
  int common = 0;
  for (int a = 0; a < opts.max_rotations; ++a) {
    const Attempt at = try_rotation(curve_eq, q, random_rotation(opts.seed + 7919 * a), opts);
    if (at.ok) return at.D;
    if (at.common) ++common;
    if (common >= 2) throw Error(ErrorCode::CommonComponent, "elimination polynomial vanishes identically");
  }
  throw Error(ErrorCode::IllConditioned, "root clustering did not produce a consistent divisor");
}

std::vector<std::pair<CurvePoint, int>> curve_support(const PlaneCubic& c, const Divisor& D) {
  std::vector<std::pair<CurvePoint, int>> out;
  for (const auto& e : D.entries()) {
    if (!e.real || e.point.imag().norm() > 1e-7) throw Error(ErrorCode::NotTotallyReal, "divisor has a complex point");
    out.emplace_back(c.from_working(e.point.real()), e.mult);
  }
  return out;
}

CurvePoint divisor_sum(const PlaneCubic& c, const Divisor& D) {
  CurvePoint s = c.identity();
  for (const auto& [p, m] : curve_support(c, D))
    for (int i = 0; i < m; ++i) s = add(c, s, p);
  return s;
}

FaceReport face_divisor_check(const PlaneCubic& c, const Divisor& D, int d) {
  if (d < 1) throw Error(ErrorCode::OutOfRange, "half-degree must be at least 1");
  const CurvePoint s = divisor_sum(c, D);
  const int deg = D.degree();
  FaceReport r;
  if (deg <= 3 * d - 1) {
    r.is_face_divisor = true;
    r.face_dim = 2 * (3 * d - deg);
    return r;
  }
  if (deg > 3 * d) return r;
  r.torsion_class = classify_torsion(c, s);
  switch (r.torsion_class) {
    case TorsionClass::O:
      r.is_face_divisor = r.quadric_exists = r.is_square = true;
      r.face_dim = 1;
      break;
    case TorsionClass::T1:
      r.is_face_divisor = r.quadric_exists = true;
      r.face_dim = 1;
      break;
    case TorsionClass::T2:
    case TorsionClass::T3:
      r.quadric_exists = true;
      break;
    default:
      break;
  }
  return r;
}

int face_dimension(FaceKind kind, int d, int degD) {
  if (kind == FaceKind::Rational) {
    if (d < 1 || degD < 0 || degD > d) throw Error(ErrorCode::OutOfRange, "rational face dimension needs 0 <= deg D <= d");
    return 2 * (d - degD) + 1;
  }
  if (d < 1 || degD < 1 || degD > 3 * d - 1)
    throw Error(ErrorCode::OutOfRange, "cubic face dimension needs 1 <= deg D <= 3d-1");
  return 2 * (3 * d - degD);
}

}  // namespace cubic
