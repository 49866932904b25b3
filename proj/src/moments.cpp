#include "cubic/moments.hpp"

#include <cmath>
#include <random>

#include "cubic/decompose.hpp"
#include "nnls.hpp"

namespace cubic {

QuotientBasis::QuotientBasis(int k) : k_(k) {
  for (int t = 0; t <= k; ++t)
    for (int i = 0; i <= std::min(2, t); ++i) mons_.push_back({i, t - i});
}

int QuotientBasis::index(int i, int j) const {
  const int t = i + j;
  if (i < 0 || j < 0 || i > 2 || t > k_) return -1;
  if (t == 0) return 0;
  if (t == 1) return 1 + i;
  return 3 * t - 3 + i;
}

namespace {

Eigen::Matrix3d shear_matrix(double s) {
  Eigen::Matrix3d S = Eigen::Matrix3d::Identity();
  S(2, 1) = s;
  return S;
}

}  // namespace

MomentFrame::MomentFrame(const PlaneCubic& c) {
  const TernaryForm& h = c.working_equation();
  auto kappa = [&](double s) { return h(Eigen::Vector3d(0, 1, s)) / std::pow(1 + s * s, 1.5); };
  s_ = 0;
  if (std::abs(kappa(0)) < 1e-3 * h.norm()) {
    double best = 0;
    for (const double s : {1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.25, -0.25, 3.0, -3.0})
      if (std::abs(kappa(s)) > best) best = std::abs(kappa(s)), s_ = s;
  }
  const TernaryForm g = h.substitute(shear_matrix(s_));
  const double lead = g.coeff({0, 3, 0});
  const auto mons = monomials(3);
  for (size_t k = 0; k < mons.size(); ++k) {
    const auto& e = mons[k];
    if ((e[1] == 3 && e[2] == 0) || g.coeffs()[k] == 0.0) continue;
    tail_.push_back({double(e[1]), double(e[2]), -g.coeffs()[k] / lead});
  }
}

std::vector<Eigen::VectorXd> MomentFrame::normal_forms(int D) const {
  const QuotientBasis basis(D);
  const int n = basis.size();
  // nf[i * (D + 1) + j]
  std::vector<Eigen::VectorXd> nf((D + 1) * (D + 1));
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      if (i <= 2) {
        v[basis.index(i, j)] = 1;
      } else {
        for (const auto& t : tail_) {
          const int a = i - 3 + int(t[0]), b = j + int(t[1]);
          v += t[2] * nf[a * (D + 1) + b];
        }
      }
      nf[i * (D + 1) + j] = std::move(v);
    }
  return nf;
}

Eigen::VectorXd MomentFrame::reduce(const std::vector<std::array<double, 3>>& poly, int D) const {
  const auto nf = normal_forms(D);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(QuotientBasis(D).size());
  for (const auto& t : poly) {
    const int i = int(t[0]), j = int(t[1]);
    if (i + j > D) throw Error(ErrorCode::OutOfRange, "polynomial degree exceeds the basis degree");
    out += t[2] * nf[i * (D + 1) + j];
  }
  return out;
}

Eigen::VectorXd MomentFrame::homogeneous_values(const Eigen::Vector3d& w, int k) const {
  const QuotientBasis basis(k);
  Eigen::VectorXd val(basis.size());
  const double z = w[2] - s_ * w[1];
  for (int n = 0; n < basis.size(); ++n) {
    const auto [i, j] = basis.monomials()[n];
    val[n] = std::pow(w[0], k - i - j) * std::pow(w[1], i) * std::pow(z, j);
  }
  return val;
}

void MomentFrame::homogeneous_values(const Eigen::Vector3d& w, const Eigen::Vector3d& dw, int k,
                                     Eigen::Ref<Eigen::VectorXd> val, Eigen::Ref<Eigen::VectorXd> dval) const {
  const double z = w[2] - s_ * w[1], dz = dw[2] - s_ * dw[1];
  std::vector<double> p0(k + 1, 1.0), p1(k + 1, 1.0), pz(k + 1, 1.0);
  for (int e = 1; e <= k; ++e) {
    p0[e] = p0[e - 1] * w[0];
    p1[e] = p1[e - 1] * w[1];
    pz[e] = pz[e - 1] * z;
  }
  int n = 0;
  for (int t = 0; t <= k; ++t)
    for (int i = 0; i <= std::min(2, t); ++i, ++n) {
      const int j = t - i, a = k - t;
      val[n] = p0[a] * p1[i] * pz[j];
      double d = 0;
      if (a > 0) d += a * p0[a - 1] * dw[0] * p1[i] * pz[j];
      if (i > 0) d += i * p0[a] * p1[i - 1] * dw[1] * pz[j];
      if (j > 0) d += j * p0[a] * p1[i] * pz[j - 1] * dz;
      dval[n] = d;
    }
}

TernaryForm MomentFrame::homogenized(int i, int j, int k) const {
  const TernaryForm x0 = TernaryForm::linear({1, 0, 0}), x1 = TernaryForm::linear({0, 1, 0});
  const TernaryForm z = TernaryForm::linear({0, -s_, 1});
  return x0.pow(k - i - j) * x1.pow(i) * z.pow(j);
}

double MomentFunctional::apply(const TernaryForm& f) const {
  if (f.degree() > 2 * d) throw Error(ErrorCode::OutOfRange, "form degree exceeds the functional degree");
  const MomentFrame frame(curve);
  const TernaryForm g = f.substitute(shear_matrix(frame.shear()));
  std::vector<std::array<double, 3>> poly;
  const auto mons = monomials(g.degree());
  for (size_t k = 0; k < mons.size(); ++k)
    if (g.coeffs()[k] != 0.0) poly.push_back({double(mons[k][1]), double(mons[k][2]), g.coeffs()[k]});
  return frame.reduce(poly, 2 * d).dot(values);
}

MomentFunctional MomentFunctional::truncate(int dprime) const {
  if (dprime < 1 || dprime > d) throw Error(ErrorCode::OutOfRange, "truncation degree out of range");
  return {curve, dprime, values.head(6 * dprime)};
}

MomentFunctional from_atoms(const PlaneCubic& c, const std::vector<CurvePoint>& atoms,
                            const std::vector<double>& weights, int d) {
  if (atoms.size() != weights.size()) throw Error(ErrorCode::InvalidInput, "atoms and weights differ in length");
  if (d < 1) throw Error(ErrorCode::OutOfRange, "half-degree must be at least 1");
  const MomentFrame frame(c);
  MomentFunctional L{c, d, Eigen::VectorXd::Zero(6 * d)};
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (weights[i] < 0) throw Error(ErrorCode::InvalidInput, "weights must be nonnegative");
    const Eigen::Vector3d& w = atoms[i].working();
    if (std::abs(w[0]) <= 1e-12) throw Error(ErrorCode::AtomAtInfinity, "atom lies on the working line at infinity");
    L.values += weights[i] * frame.homogeneous_values(w / w[0], 2 * d);
  }
  return L;
}

MomentFunctional from_lifts(const PlaneCubic& c, const std::vector<Eigen::Vector3d>& lifts,
                            const std::vector<double>& weights, int d) {
  if (lifts.size() != weights.size()) throw Error(ErrorCode::InvalidInput, "lifts and weights differ in length");
  const MomentFrame frame(c);
  MomentFunctional L{c, d, Eigen::VectorXd::Zero(6 * d)};
  for (size_t i = 0; i < lifts.size(); ++i) L.values += weights[i] * frame.homogeneous_values(lifts[i], 2 * d);
  return L;
}

namespace {

Eigen::MatrixXd build_matrix(const MomentFunctional& L, const MomentFrame& frame, int dprime,
                             const std::vector<Eigen::VectorXd>& nf, int D) {
  const QuotientBasis B(dprime);
  const int n = B.size();
  Eigen::MatrixXd M(n, n);
  const Eigen::VectorXd vals = L.values.head(QuotientBasis(D).size());
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      const auto& a = B.monomials()[p];
      const auto& b = B.monomials()[q];
      M(p, q) = M(q, p) = nf[(a[0] + b[0]) * (D + 1) + a[1] + b[1]].dot(vals);
    }
  (void)frame;
  return M;
}

MomentMatrixReport analyze(Eigen::MatrixXd M, const MomentTolerances& tol) {
  MomentMatrixReport r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd ev = es.eigenvalues();
  r.max_singular = ev.cwiseAbs().maxCoeff();
  // the rank is read off the matrix with unit diagonal: monomial moments span many
  // orders of magnitude and a raw relative cut mixes that spread into the rank
  const Eigen::VectorXd diag = M.diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  if (dmax > 0) {
    const Eigen::VectorXd s = diag.cwiseMax(1e-300 + tol.rank * tol.rank * dmax).cwiseSqrt().cwiseInverse();
    const Eigen::VectorXd es_ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.asDiagonal() * M * s.asDiagonal(), Eigen::EigenvaluesOnly)
            .eigenvalues();
    const double top = es_ev.cwiseAbs().maxCoeff();
    for (int i = 0; i < es_ev.size(); ++i)
      if (std::abs(es_ev[i]) > tol.rank * top) ++r.rank;
  }
  r.min_eig = ev[0];
  r.min_eigvec = es.eigenvectors().col(0);
  r.psd = r.min_eig >= -tol.psd * std::abs(M.trace());
  r.matrix = std::move(M);
  return r;
}

}  // namespace

MomentMatrixReport moment_matrix(const MomentFunctional& L, int dprime, const MomentTolerances& tol) {
  if (dprime < 1 || dprime > L.d) throw Error(ErrorCode::OutOfRange, "moment matrix order out of range");
  const MomentFrame frame(L.curve);
  const auto nf = frame.normal_forms(2 * dprime);
  return analyze(build_matrix(L, frame, dprime, nf, 2 * dprime), tol);
}

namespace {

bool restriction_agrees(const MomentFunctional& L, const MomentFunctional& Lext) {
  for (int b = 0; b < L.values.size(); ++b)
    if (std::abs(Lext.values[b] - L.values[b]) > 1e-10 * (1 + std::abs(L.values[b]))) return false;
  return true;
}

}  // namespace

ExtensionReport check_flat_extension(const MomentFunctional& L, const MomentFunctional& Lext,
                                     const MomentTolerances& tol) {
  if (!L.curve.same_model(Lext.curve)) throw Error(ErrorCode::CurveMismatch, "functionals live on different curves");
  if (Lext.d != L.d + 1) throw Error(ErrorCode::InvalidInput, "flat extension must have degree 2d+2");
  ExtensionReport r;
  r.restriction_ok = restriction_agrees(L, Lext);
  const auto base = moment_matrix(L, L.d, tol);
  const auto ext = moment_matrix(Lext, Lext.d, tol);
  r.rank_base = base.rank;
  r.rank_ext = ext.rank;
  r.rank_ok = ext.rank == base.rank;
  r.psd_ok = ext.psd;
  return r;
}

ExtensionReport check_almost_flat_extension(const MomentFunctional& L, const MomentFunctional& Lext,
                                            const MomentTolerances& tol) {
  if (!L.curve.same_model(Lext.curve)) throw Error(ErrorCode::CurveMismatch, "functionals live on different curves");
  if (Lext.d != L.d + 2) throw Error(ErrorCode::InvalidInput, "almost flat extension must have degree 2d+4");
  ExtensionReport r;
  r.restriction_ok = restriction_agrees(L, Lext);
  const auto base = moment_matrix(L, L.d, tol);
  const auto ext = moment_matrix(Lext, Lext.d, tol);
  r.rank_base = base.rank;
  r.rank_ext = ext.rank;
  r.rank_ok = ext.rank <= base.rank + 1;
  r.psd_ok = ext.psd;
  return r;
}

double decomposition_residual(const MomentFunctional& L, const std::vector<CurvePoint>& atoms,
                              const std::vector<double>& weights) {
  const MomentFrame frame(L.curve);
  Eigen::VectorXd r = -L.values;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Eigen::Vector3d& w = atoms[i].working();
    r += weights[i] * frame.homogeneous_values(w / w[0], 2 * L.d);
  }
  return r.norm() / (1 + L.norm());
}

Decomposition extract_atoms(const MomentFunctional& Lext, const ExtractOptions& opts) {
  const int K = Lext.d;
  const PlaneCubic& c = Lext.curve;
  const MomentFrame frame(c);
  const auto top = moment_matrix(Lext, K, opts.tol);
  if (!top.psd) throw Error(ErrorCode::NotPositive, "moment matrix is not positive semidefinite");
  Eigen::MatrixXd low;
  int low_rank;
  if (K >= 2) {
    const auto r = moment_matrix(Lext, K - 1, opts.tol);
    low = r.matrix;
    low_rank = r.rank;
  } else {
    low = Eigen::MatrixXd::Constant(1, 1, Lext.values[0]);
    low_rank = std::abs(Lext.values[0]) > opts.tol.rank * top.max_singular ? 1 : 0;
  }
  const int r = top.rank;
  if (r != low_rank)
    throw Error(ErrorCode::RankNotStabilized,
                "rank " + std::to_string(low_rank) + " at level " + std::to_string(K - 1) + " vs " + std::to_string(r));
  Decomposition out;
  if (r == 0) return out;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(low);
  std::vector<int> piv(r);
  for (int i = 0; i < r; ++i) piv[i] = qr.colsPermutation().indices()[i];
  const QuotientBasis Bl(std::max(K - 1, 0));
  const int D = 2 * K;
  const auto nf = frame.normal_forms(D);
  auto Lval = [&](int i, int j) { return nf[i * (D + 1) + j].dot(Lext.values); };
  Eigen::MatrixXd G(r, r), Hu(r, r), Hv(r, r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) {
      const auto a = Bl.monomials()[piv[p]], b = Bl.monomials()[piv[q]];
      const int i = a[0] + b[0], j = a[1] + b[1];
      G(p, q) = Lval(i, j);
      Hu(p, q) = Lval(i + 1, j);
      Hv(p, q) = Lval(i, j + 1);
    }
  std::mt19937_64 rng(opts.seed);
  const double psi = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
  const auto Glu = G.partialPivLu();
  const Eigen::MatrixXd A = Glu.solve(std::cos(psi) * Hu + std::sin(psi) * Hv);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  const auto lam = es.eigenvalues();
  for (int i = 0; i < r; ++i)
    if (std::abs(lam[i].imag()) > 1e-6 * (1 + std::abs(lam[i])))
      throw Error(ErrorCode::ComplexAtoms, "multiplication operator has non-real eigenvalues");
  const Eigen::MatrixXd V = es.eigenvectors().real();

  const double s = frame.shear();
  for (int i = 0; i < r; ++i) {
    const Eigen::VectorXd x = V.col(i);
    const double g = x.dot(G * x);
    const double u = x.dot(Hu * x) / g, v = x.dot(Hv * x) / g;
    const Eigen::Vector3d w(1, u, v + s * u);
    if (std::abs(c.working_equation()(w.normalized())) > 1e-6)
      throw Error(ErrorCode::ComplexAtoms, "recovered atom is not on the curve");
    const CurvePoint P = c.from_working(w, 1e-2);
    out.atoms.push_back(P.is_identity() ? P : c.project(P.x(), P.y()));
  }
  Eigen::MatrixXd Amat(Lext.values.size(), r);
  for (int i = 0; i < r; ++i) {
    const Eigen::Vector3d& w = out.atoms[i].working();
    Amat.col(i) = frame.homogeneous_values(w / w[0], D);
  }
  const Eigen::VectorXd wts = detail::nnls(Amat, Lext.values);
  out.weights.assign(wts.data(), wts.data() + r);
  out.residual = decomposition_residual(Lext, out.atoms, out.weights);
  if (opts.polish) {
    Decomposition pol = refine_decomposition(Lext, out);
    if (pol.residual < out.residual) out = std::move(pol);
  }
  return out;
}

}  // namespace cubic
