#include "cubic/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace cubic {

namespace {

CurvePoint draw_atom(const PlaneCubic& c, Component comp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double t = U(rng) * c.period(comp);
    const Eigen::Vector3d w = c.transform() * c.lift(comp, t);
    // stay away from the line at infinity so the affine moments stay moderate
    if (std::abs(w[0]) < 0.05 * w.norm()) continue;
    return c.from_weierstrass(c.lift(comp, t), 1e-6);
  }
}

bool distinct(const std::vector<CurvePoint>& pts, const CurvePoint& p, double tol) {
  for (const auto& q : pts)
    if (same_point(p, q, tol)) return false;
  return true;
}

bool well_spread(const std::vector<CurvePoint>& atoms) {
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (std::abs(atoms[i].y()) < 0.15) return false;
    for (size_t j = 0; j < i; ++j)
      if (std::hypot(atoms[i].x() - atoms[j].x(), atoms[i].y() - atoms[j].y()) < 0.45) return false;
  }
  return true;
}

}  // namespace

AtomicFunctional random_atomic_functional(const PlaneCubic& c, int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto comps = topology(c).components;
  AtomicFunctional out;
  while (static_cast<int>(out.atoms.size()) < n) {
    const Component comp = comps[std::min<size_t>(comps.size() - 1, size_t(U(rng) * comps.size()))];
    const CurvePoint p = draw_atom(c, comp, rng);
    if (!distinct(out.atoms, p, 1e-3)) continue;
    out.atoms.push_back(p);
    out.weights.push_back(0.5 + U(rng));
  }
  out.L = from_atoms(c, out.atoms, out.weights, d);
  return out;
}

AtomicFunctional random_interior_functional(const PlaneCubic& c, int d, std::uint64_t seed, double sep) {
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 100000) throw Error(ErrorCode::NotFound, "no interior functional with the requested separation");
    auto f = random_atomic_functional(c, d, 3 * d, seed + 7919ull * attempt);
    bool spread = true;
    for (size_t i = 0; i < f.atoms.size() && spread; ++i) {
      spread = std::abs(f.atoms[i].working().normalized()[0]) >= sep;
      for (size_t j = i + 1; j < f.atoms.size() && spread; ++j)
        spread = projective_distance(f.atoms[i].working(), f.atoms[j].working()) >= sep;
    }
    if (!spread) continue;
    const TorsionClass cls = classify_torsion(c, sum_points(c, f.atoms), 1e-4);
    if (cls == TorsionClass::NonTorsion) return f;
  }
}

bool CounterexampleReport::passes(double fail_threshold) const {
  return !degenerate && certificate_value < 0 && !k_short.success && k_short.best.residual > fail_threshold &&
         k_long.success;
}

CounterexampleReport caratheodory_counterexample(const PlaneCubic& c, int d, std::uint64_t seed, double eps,
                                                 const DecomposeOptions& opts) {
  if (topology(c).kind != TopologyKind::TwoComponents)
    throw Error(ErrorCode::Precondition, "the counterexample needs a disconnected real locus");
  if (d < 1) throw Error(ErrorCode::InvalidInput, "d must be positive");
  const CurvePoint T2 = c.point(c.data().a2().real(), 0.0);
  std::mt19937_64 rng(seed);
  CounterexampleReport r;
  bool found = false;
  for (int draw = 0; draw < 100 && !found; ++draw) {
    std::vector<CurvePoint> atoms;
    while (static_cast<int>(atoms.size()) < 3 * d - 1) {
      const CurvePoint p = draw_atom(c, Component::Oval, rng);
      if (distinct(atoms, p, 1e-3)) atoms.push_back(p);
    }
    const CurvePoint last = add(c, T2, neg(c, sum_points(c, atoms)));
    if (last.is_identity() || c.component_of(last) != Component::Oval) continue;
    atoms.push_back(last);
    // near-coincident atoms or atoms next to a 2-torsion point shrink the neighbourhood
    // in which the 3-atom cone is one-sided, so require a well spread configuration
    if (!well_spread(atoms)) continue;
    ExtremeQuadric eq;
    try {
      eq = extreme_quadric(c, atoms, d);
    } catch (const Error&) {
      continue;
    }
    // B near the vertex of the unbounded branch, where eps ev_B stays a small perturbation
    const double reach = 0.3;
    const double x0 = c.data().a3().real();
    double best = 0;
    CurvePoint B;
    for (int i = 0; i < 64; ++i) {
      const double x = x0 + reach * (i + 0.5) / 64;
      for (double sgn : {1.0, -1.0}) {
        const CurvePoint s = c.point(x, sgn * std::sqrt(std::max(0.0, c.data().f(x))));
        const Eigen::Vector3d w = s.working();
        const double v = eq.form(Eigen::Vector3d(w / w[0]));
        if (v < best) best = v, B = s;
      }
    }
    if (best >= 0) continue;
    r.atoms = atoms;
    r.q = eq.form;
    r.B = B;
    found = true;
  }
  if (!found) throw Error(ErrorCode::RetriesExhausted, "no valid counterexample configuration in 100 draws");

  r.degenerate = eps == 0;
  const int tries = r.degenerate ? 1 : 7;
  for (int h = 0; h < tries; ++h) {
    r.eps = eps * std::ldexp(1.0, -h);
    r.halvings = h;
    std::vector<CurvePoint> pts = r.atoms;
    std::vector<double> w(r.atoms.size(), 1.0);
    pts.push_back(r.B);
    w.push_back(r.eps);
    r.L = from_atoms(c, pts, w, d);
    r.q_at_B = r.q(Eigen::Vector3d(r.B.working() / r.B.working()[0]));
    r.certificate_value = r.L.apply(r.q);
    r.k_long = decompose(c, r.L, 3 * d + 1, opts);
    if (r.k_long.success) break;
  }
  r.k_short = decompose(c, r.L, 3 * d, opts);
  return r;
}

bool EscapeReport::passes(double fail_threshold) const {
  return real_points_at_infinity >= 2 && !k_short.success && k_short.best.residual > fail_threshold && k_long.success;
}

const std::vector<double>& default_escape_margins() {
  static const std::vector<double> m{0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3};
  return m;
}

EscapeReport infinity_escape_example(const PlaneCubic& c, std::uint64_t seed, const DecomposeOptions& opts,
                                     const std::vector<double>& margins) {
  if (topology(c).kind != TopologyKind::Connected)
    throw Error(ErrorCode::Precondition, "the escape example needs a connected real locus");
  if (!c.transform().isIdentity(1e-12)) throw Error(ErrorCode::Precondition, "the escape example needs the identity transform");
  EscapeReport r;
  r.original = c;
  DecomposeOptions search = opts;
  search.infinity_margin = 1e-6;
  for (int redraw = 0;; ++redraw) {
    if (redraw >= 20) throw Error(ErrorCode::NotFound, "no usable configuration after 20 redraws");
    r.redraws = redraw;
    // clustered atoms put B next to A and the chosen line close to a tangent
    const auto f = random_interior_functional(c, 1, seed + 104729ull * redraw, 0.2);
    Decomposition B;
    try {
      B = second_representation(c, f.L, f.atoms, search);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotFound || redraw == 19) throw;
      continue;
    }
    // send the pair (A_i, B_j) whose line stays farthest from the remaining four atoms;
    // a close pair spans a near tangent and is scored by its separation instead
    double best = -1;
    int bi = 0, bj = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (same_point(f.atoms[i], B.atoms[j], 1e-4)) continue;
        const Eigen::Vector3d n = line_through(c, f.atoms[i], B.atoms[j]).normalized();
        double m = projective_distance(f.atoms[i].working(), B.atoms[j].working());
        for (int k = 0; k < 3; ++k) {
          if (k != i) m = std::min(m, std::abs(n.dot(f.atoms[k].working().normalized())));
          if (k != j) m = std::min(m, std::abs(n.dot(B.atoms[k].working().normalized())));
        }
        if (m > best) best = m, bi = i, bj = j;
      }
    if (best < 0) continue;
    r.L = f.L;
    r.atoms_a = f.atoms;
    r.weights_a = f.weights;
    r.atoms_b = B.atoms;
    std::swap(r.atoms_a[0], r.atoms_a[bi]);
    std::swap(r.weights_a[0], r.weights_a[bi]);
    std::swap(r.atoms_b[0], r.atoms_b[bj]);
    break;
  }
  r.transformed = transform_line_to_infinity(c, r.atoms_a[0], r.atoms_b[0]);
  r.infinity = points_at_infinity(r.transformed);
  for (const auto& p : r.infinity) r.real_points_at_infinity += p.multiplicity;

  // the same measure seen in the new coordinates: lifts at w0 = 1 of the old chart
  std::vector<Eigen::Vector3d> lifts;
  const Eigen::Matrix3d N = r.transformed.transform() * c.inverse_transform();
  for (const auto& a : r.atoms_a) {
    const Eigen::Vector3d w = a.working();
    lifts.push_back(N * (w / w[0]));
  }
  r.L_transformed = from_lifts(r.transformed, lifts, r.weights_a, r.L.d);
  // the affine 3-atom infimum is zero (atoms can run off to infinity), so both budgets are
  // compared at the widest margin from the ladder at which 4 atoms still reproduce L
  std::vector<double> ladder = margins;
  if (ladder.empty()) ladder.push_back(opts.infinity_margin);
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  DecomposeOptions o = opts;
  for (double mu : ladder) {
    o.infinity_margin = mu;
    r.k_long = decompose(r.transformed, r.L_transformed, 4, o);
    r.margin = mu;
    if (r.k_long.success) break;
  }
  r.k_short = decompose(r.transformed, r.L_transformed, 3, o);
  return r;
}

}  // namespace cubic
