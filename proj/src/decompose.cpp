#include "cubic/decompose.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nnls.hpp"

namespace cubic {

std::uint64_t start_seed(std::uint64_t seed, int index) {
  // splitmix64
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

struct Problem {
  const PlaneCubic* c;
  MomentFrame frame;
  int K;  // 2d
  Eigen::VectorXd L;
  double scale;  // 1 + ||L||
  std::vector<Component> comps;
  double margin;
  std::vector<Eigen::Vector3d> exclude;
  double exclude_radius, disjoint_radius;

  Problem(const PlaneCubic& curve, const MomentFunctional& Lf, double margin_, const DecomposeOptions* opts)
      : c(&curve), frame(curve), K(2 * Lf.d), L(Lf.values), scale(1 + Lf.norm()), margin(margin_) {
    comps = topology(curve).components;
    exclude_radius = opts ? opts->exclude_radius : 0;
    disjoint_radius = opts ? opts->disjoint_radius : 0;
    if (opts)
      for (const auto& p : opts->exclude) exclude.push_back(p.working());
  }

  // unit working lift, moment vector and its parameter derivative
  Eigen::Vector3d atom(Component comp, double t, Eigen::Ref<Eigen::VectorXd> m, Eigen::Ref<Eigen::VectorXd> dm) const {
    Eigen::Vector3d dl;
    const Eigen::Vector3d l = c->lift(comp, t, &dl);
    const Eigen::Vector3d w = c->transform() * l, dw = c->transform() * dl;
    const double nw = w.norm();
    const Eigen::Vector3d wh = w / nw;
    const Eigen::Vector3d dwh = (dw - wh * wh.dot(dw)) / nw;
    frame.homogeneous_values(wh, dwh, K, m, dm);
    return wh;
  }
};

struct Fit {
  std::vector<Component> comp;
  std::vector<double> t, om;
  double rel = 1e300;
};

struct Eval {
  Eigen::MatrixXd V, dV;
  std::vector<Eigen::Vector3d> wh;
};

bool evaluate(const Problem& P, const Fit& f, Eval& e) {
  const int k = static_cast<int>(f.t.size()), n = static_cast<int>(P.L.size());
  e.V.resize(n, k);
  e.dV.resize(n, k);
  e.wh.resize(k);
  for (int j = 0; j < k; ++j) {
    e.wh[j] = P.atom(f.comp[j], f.t[j], e.V.col(j), e.dV.col(j));
    if (std::abs(e.wh[j][0]) < P.margin) return false;
  }
  return true;
}

double residual_norm(const Problem& P, const Eval& e, const std::vector<double>& om) {
  Eigen::VectorXd r = -P.L;
  for (size_t j = 0; j < om.size(); ++j) r += om[j] * e.V.col(j);
  return r.norm();
}

void levenberg_marquardt(const Problem& P, Fit& f, int max_iter, double tol) {
  const int k = static_cast<int>(f.t.size());
  Eval e;
  evaluate(P, f, e);
  double cost = residual_norm(P, e, f.om);
  double lambda = 1e-3;
  std::vector<double> history;
  for (int it = 0; it < max_iter && k > 0; ++it) {
    if (cost / P.scale <= 1e-2 * tol) break;
    history.push_back(cost);
    if (history.size() > 10 && cost > 0.9 * history[history.size() - 11]) break;
    Eigen::MatrixXd J(P.L.size(), 2 * k);
    Eigen::VectorXd r = -P.L;
    for (int j = 0; j < k; ++j) {
      J.col(j) = f.om[j] * e.dV.col(j);
      J.col(k + j) = e.V.col(j);
      r += f.om[j] * e.V.col(j);
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const double dmax = std::max(A.diagonal().maxCoeff(), 1e-300);
    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd As = A;
      for (int i = 0; i < 2 * k; ++i) As(i, i) += lambda * (A(i, i) + 1e-9 * dmax);
      const Eigen::VectorXd step = As.ldlt().solve(-g);
      Fit trial = f;
      for (int j = 0; j < k; ++j) {
        const double T = P.c->period(f.comp[j]);
        trial.t[j] = std::fmod(f.t[j] + step[j], T);
        if (trial.t[j] < 0) trial.t[j] += T;
        trial.om[j] = std::max(0.0, f.om[j] + step[k + j]);
      }
      Eval et;
      if (!evaluate(P, trial, et)) {
        lambda *= 10;
        continue;
      }
      const double c2 = residual_norm(P, et, trial.om);
      if (c2 < cost) {
        f = std::move(trial);
        e = std::move(et);
        cost = c2;
        lambda = std::max(lambda / 3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4;
    }
    if (!accepted) break;
  }
  // final weights by nonnegative least squares
  const Eigen::VectorXd om = detail::nnls(e.V, P.L);
  std::vector<double> omv(om.data(), om.data() + k);
  const double c2 = residual_norm(P, e, omv);
  if (c2 <= cost) f.om = omv, cost = c2;
  f.rel = cost / P.scale;
}

bool disjoint(const Problem& P, const Fit& f) {
  if (P.exclude.empty()) return true;
  const double wmax = f.om.empty() ? 0 : *std::max_element(f.om.begin(), f.om.end());
  Eigen::VectorXd m(P.L.size()), dm(P.L.size());
  for (size_t j = 0; j < f.t.size(); ++j) {
    if (f.om[j] <= 1e-12 * wmax) continue;
    const Eigen::Vector3d wh = P.atom(f.comp[j], f.t[j], m, dm);
    for (const auto& x : P.exclude)
      if (projective_distance(wh, x) <= P.disjoint_radius) return false;
  }
  return true;
}

Fit run_start(const Problem& P, int k, std::uint64_t seed, int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Fit f;
  f.comp.resize(k);
  f.t.resize(k);
  Eigen::VectorXd m(P.L.size()), dm(P.L.size());
  for (int j = 0; j < k; ++j) {
    for (int tries = 0; tries < 200; ++tries) {
      f.comp[j] = P.comps[std::min<size_t>(P.comps.size() - 1, size_t(U(rng) * P.comps.size()))];
      f.t[j] = U(rng) * P.c->period(f.comp[j]);
      const Eigen::Vector3d wh = P.atom(f.comp[j], f.t[j], m, dm);
      bool ok = std::abs(wh[0]) >= P.margin;
      for (const auto& x : P.exclude) ok = ok && projective_distance(wh, x) > P.exclude_radius;
      if (ok) break;
    }
  }
  Eval e;
  evaluate(P, f, e);
  const Eigen::VectorXd om = detail::nnls(e.V, P.L);
  f.om.assign(om.data(), om.data() + k);
  levenberg_marquardt(P, f, max_iter, tol);
  return f;
}

Decomposition to_decomposition(const Problem& P, const Fit& f) {
  Decomposition d;
  Eigen::VectorXd m(P.L.size()), dm(P.L.size());
  for (size_t j = 0; j < f.t.size(); ++j) {
    const Eigen::Vector3d wh = P.atom(f.comp[j], f.t[j], m, dm);
    d.atoms.push_back(P.c->from_weierstrass(P.c->lift(f.comp[j], f.t[j]), 1e-6));
    d.weights.push_back(f.om[j] * std::pow(wh[0], P.K));
  }
  d.residual = f.rel;
  return d;
}

DecomposeResult run_decompose(const PlaneCubic& c, const MomentFunctional& L, int k, const DecomposeOptions& opts,
                              bool parallel) {
  if (!c.same_model(L.curve)) throw Error(ErrorCode::CurveMismatch, "functional belongs to a different curve");
  if (k < 1) throw Error(ErrorCode::InvalidInput, "atom budget must be positive");
  const Problem P(c, L, opts.infinity_margin, &opts);
  DecomposeResult res;
  std::vector<Fit> fits(opts.starts);
  std::vector<char> ok(opts.starts, 0);
  const int batch = std::max(1, opts.batch);
  int done = 0;
  while (done < opts.starts) {
    const int end = std::min(opts.starts, done + batch);
#pragma omp parallel for schedule(dynamic) if (parallel) num_threads(opts.threads > 0 ? opts.threads : omp_get_max_threads())
    for (int i = done; i < end; ++i) {
      fits[i] = run_start(P, k, start_seed(opts.seed, i), opts.max_iterations, opts.tol);
      ok[i] = fits[i].rel <= opts.tol && disjoint(P, fits[i]);
    }
    bool any = false;
    for (int i = done; i < end; ++i) any |= ok[i] != 0;
    done = end;
    if (any && opts.stop_at_first_success) break;
  }
  res.starts_run = done;
  int best = -1;
  for (int i = 0; i < done; ++i) {
    res.seeds.push_back(start_seed(opts.seed, i));
    res.start_residuals.push_back(fits[i].rel);
    if (ok[i] && opts.keep_successes) res.successes.push_back(to_decomposition(P, fits[i]));
    // successes first, then smallest residual, then lowest index
    auto key = [&](int j) { return std::make_pair(ok[j] ? 0 : 1, fits[j].rel); };
    if (best < 0 || key(i) < key(best)) best = i;
  }
  res.best_start = best;
  res.success = best >= 0 && ok[best];
  if (best >= 0) res.best = to_decomposition(P, fits[best]);
  return res;
}

}  // namespace

DecomposeResult decompose(const PlaneCubic& c, const MomentFunctional& L, int k, const DecomposeOptions& opts) {
  return run_decompose(c, L, k, opts, true);
}

DecomposeResult decompose_serial(const PlaneCubic& c, const MomentFunctional& L, int k,
                                 const DecomposeOptions& opts) {
  return run_decompose(c, L, k, opts, false);
}

Decomposition refine_decomposition(const MomentFunctional& L, const Decomposition& start, int iterations) {
  const Problem P(L.curve, L, 0.0, nullptr);
  Fit f;
  Eigen::VectorXd m(P.L.size()), dm(P.L.size());
  for (size_t j = 0; j < start.atoms.size(); ++j) {
    const Component comp = L.curve.component_of(start.atoms[j]);
    f.comp.push_back(comp);
    f.t.push_back(L.curve.parameter_of(comp, start.atoms[j]));
    const Eigen::Vector3d wh = P.atom(comp, f.t.back(), m, dm);
    f.om.push_back(start.weights[j] / std::pow(wh[0], P.K));
  }
  levenberg_marquardt(P, f, iterations, 1e-14);
  return to_decomposition(P, f);
}

bool same_representation(const Decomposition& a, const Decomposition& b, double tol) {
  auto covered = [&](const Decomposition& x, const Decomposition& y) {
    double wmax = 0;
    for (double w : x.weights) wmax = std::max(wmax, w);
    for (size_t i = 0; i < x.atoms.size(); ++i) {
      if (x.weights[i] <= 1e-9 * wmax) continue;
      bool hit = false;
      for (size_t j = 0; j < y.atoms.size(); ++j) hit |= same_point(x.atoms[i], y.atoms[j], tol);
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

std::vector<Decomposition> distinct_representations(const std::vector<Decomposition>& decs, double tol) {
  std::vector<Decomposition> out;
  for (const auto& d : decs) {
    bool seen = false;
    for (const auto& o : out) seen |= same_representation(d, o, tol);
    if (!seen) out.push_back(d);
  }
  return out;
}

const char* extension_name(ExtensionKind k) {
  switch (k) {
    case ExtensionKind::Flat: return "Flat";
    case ExtensionKind::AlmostFlat: return "AlmostFlat";
    case ExtensionKind::None: return "None";
  }
  return "?";
}

MembershipReport membership(const PlaneCubic& c, const MomentFunctional& L, const MembershipOptions& opts) {
  MembershipReport r;
  const auto M = moment_matrix(L, L.d, opts.tol);
  r.psd = M.psd;
  r.rank = M.rank;
  r.min_eig = M.min_eig;
  if (!M.psd) {
    const MomentFrame frame(c);
    const QuotientBasis B(L.d);
    TernaryForm p(L.d);
    for (int n = 0; n < B.size(); ++n) p += M.min_eigvec[n] * frame.homogenized(B.monomials()[n][0], B.monomials()[n][1], L.d);
    r.certificate = QForm(p * p, false);
    r.certificate_value = L.apply(*r.certificate);
    return r;
  }
  for (int k = std::max(1, M.rank); k <= 3 * L.d + 1; ++k) {
    const auto res = decompose(c, L, k, opts.decompose);
    r.budget_trace.emplace_back(k, res.best.residual);
    if (!res.success) continue;
    r.member = true;
    r.decomposition = res.best;
    const auto& dec = res.best;
    const auto L1 = from_atoms(c, dec.atoms, dec.weights, L.d + 1);
    const auto L2 = from_atoms(c, dec.atoms, dec.weights, L.d + 2);
    // compare against L itself: the found measure reproduces it only up to the fit tolerance
    MomentFunctional Lfit = L1.truncate(L.d);
    if (check_flat_extension(Lfit, L1, opts.tol).passes()) r.extension_kind = ExtensionKind::Flat;
    else if (check_almost_flat_extension(Lfit, L2, opts.tol).passes()) r.extension_kind = ExtensionKind::AlmostFlat;
    break;
  }
  return r;
}

namespace {

// A + B is the zero divisor of a form q of degree 2d, and the Euler-Jacobi relation
// sum_P ev_P / mu_q(P) = 0 over div q (with grad F x grad q = mu_q P at P) fixes q by
// requiring a_i mu_q(A_i) to be constant; B = div q - A then carries L as well.
std::optional<Decomposition> residue_representation(const PlaneCubic& c, const MomentFunctional& L,
                                                    const std::vector<CurvePoint>& atomsA, double tol) {
  const int n = static_cast<int>(atomsA.size()), K = 2 * L.d;
  const MomentFrame frame(c);
  std::vector<Eigen::Vector3d> lifts;
  Eigen::MatrixXd Vm(L.values.size(), n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& w = atomsA[i].working();
    if (std::abs(w[0]) < 1e-9) return std::nullopt;
    lifts.push_back(w / w[0]);
    Vm.col(i) = frame.homogeneous_values(lifts.back(), K);
  }
  const Eigen::VectorXd a = detail::nnls(Vm, L.values);
  if (a.minCoeff() <= 0) return std::nullopt;

  const FormSpace space = cubic_form_space(c, K);
  const int m = static_cast<int>(space.basis.size());
  Eigen::MatrixXd E(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) E(i, j) = space.basis[j](lifts[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svdE(E, Eigen::ComputeFullV);
  const Eigen::MatrixXd N = svdE.matrixV().rightCols(m - n);

  const TernaryForm& F = c.working_equation();
  std::vector<TernaryForm> g;
  for (int k = 0; k < N.cols(); ++k) g.push_back(space.combine(N.col(k)));
  Eigen::MatrixXd mu(n, g.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d gF = F.gradient(lifts[i]);
    for (size_t k = 0; k < g.size(); ++k)
      mu(i, k) = gF.cross(g[k].gradient(lifts[i])).dot(lifts[i]) / lifts[i].squaredNorm();
  }
  Eigen::MatrixXd C(n - 1, g.size());
  for (int i = 1; i < n; ++i) C.row(i - 1) = a[i] * mu.row(i) - a[0] * mu.row(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svdC(C, Eigen::ComputeFullV);
  const Eigen::VectorXd coef = svdC.matrixV().col(g.size() - 1);
  TernaryForm q(K);
  for (size_t k = 0; k < g.size(); ++k) q.coeffs() += coef[k] * g[k].coeffs();

  Divisor D;
  try {
    D = intersection_divisor(F, q.normalized());
  } catch (const Error&) {
    return std::nullopt;
  }
  Decomposition B;
  for (const auto& e : D.entries()) {
    if (!e.real) return std::nullopt;
    const Eigen::Vector3d p = e.point.real();
    bool in_a = false;
    for (const auto& A : atomsA) in_a |= projective_distance(p, A.working()) < 1e-6;
    if (in_a) continue;
    if (e.mult != 1 || std::abs(p[0]) < 1e-9) return std::nullopt;
    B.atoms.push_back(c.from_working(p, 1e-4));
  }
  if (static_cast<int>(B.atoms.size()) != n) return std::nullopt;
  Eigen::MatrixXd Vb(L.values.size(), n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& w = B.atoms[i].working();
    Vb.col(i) = frame.homogeneous_values(w / w[0], K);
  }
  const Eigen::VectorXd b = detail::nnls(Vb, L.values);
  B.weights.assign(b.data(), b.data() + n);
  B.residual = decomposition_residual(L, B.atoms, B.weights);
  Decomposition polished = refine_decomposition(L, B);
  if (polished.residual < B.residual) B = std::move(polished);
  if (!(B.residual <= tol)) return std::nullopt;
  return B;
}

}  // namespace

Decomposition second_representation(const PlaneCubic& c, const MomentFunctional& L,
                                    const std::vector<CurvePoint>& atomsA, const DecomposeOptions& opts) {
  if (static_cast<int>(atomsA.size()) != 3 * L.d) throw Error(ErrorCode::Precondition, "expected 3d atoms");
  DecomposeOptions o = opts;
  o.starts = 4 * opts.starts;
  o.exclude = atomsA;
  const auto res = decompose(c, L, 3 * L.d, o);
  if (res.success) {
    // the multistart stops at the fit tolerance; the sum relation needs the atoms tighter
    Decomposition polished = refine_decomposition(L, res.best, 100);
    return polished.residual < res.best.residual ? polished : res.best;
  }
  // the multistart keeps falling back into the basin of A; construct B from the residue relation
  if (auto B = residue_representation(c, L, atomsA, opts.tol)) {
    bool disjoint = true;
    for (const auto& x : B->atoms)
      for (const auto& y : atomsA) disjoint = disjoint && projective_distance(x.working(), y.working()) > o.disjoint_radius;
    if (disjoint) return *B;
  }
  throw Error(ErrorCode::NotFound, "no disjoint representation, best residual " + std::to_string(res.best.residual));
}

}  // namespace cubic
