#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cubic/curve.hpp"
#include "cubic/forms.hpp"

namespace cubic {

// u^i v^j with i <= 2 and i + j <= k, sorted by degree, then i, then j
class QuotientBasis {
 public:
  explicit QuotientBasis(int k);
  int degree() const { return k_; }
  int size() const { return static_cast<int>(mons_.size()); }
  const std::vector<std::array<int, 2>>& monomials() const { return mons_; }
  int index(int i, int j) const;

 private:
  int k_;
  std::vector<std::array<int, 2>> mons_;
};

// Affine frame of the working cubic: u = X, v = Y - s X with X = w1/w0, Y = w2/w0 and the
// shear s chosen so that the dehomogenized cubic has a nonzero u^3 term, scaled to 1.
class MomentFrame {
 public:
  explicit MomentFrame(const PlaneCubic& c);
  double shear() const { return s_; }
  // u^3 = sum of coeff * u^a v^b over the tail
  const std::vector<std::array<double, 3>>& cubic_tail() const { return tail_; }

  // normal forms of every u^i v^j with i + j <= D, as coordinates on QuotientBasis(D)
  std::vector<Eigen::VectorXd> normal_forms(int D) const;
  Eigen::VectorXd reduce(const std::vector<std::array<double, 3>>& poly, int D) const;

  // basis values w0^(k - deg b) w1^i (w2 - s w1)^j; for w0 = 1 these are the affine values
  Eigen::VectorXd homogeneous_values(const Eigen::Vector3d& w, int k) const;
  // the same with the derivative along dw
  void homogeneous_values(const Eigen::Vector3d& w, const Eigen::Vector3d& dw, int k, Eigen::Ref<Eigen::VectorXd> val,
                          Eigen::Ref<Eigen::VectorXd> dval) const;
  // basis element as a form of degree k in working coordinates
  TernaryForm homogenized(int i, int j, int k) const;

 private:
  double s_ = 0;
  std::vector<std::array<double, 3>> tail_;
};

struct MomentFunctional {
  PlaneCubic curve;
  int d = 1;
  Eigen::VectorXd values;  // on QuotientBasis(2d)

  // L applied to a form of degree <= 2d in working coordinates (dehomogenized at w0 = 1)
  double apply(const TernaryForm& f) const;
  MomentFunctional truncate(int dprime) const;
  double norm() const { return values.norm(); }
};

MomentFunctional from_atoms(const PlaneCubic& c, const std::vector<CurvePoint>& atoms,
                            const std::vector<double>& weights, int d);
// sum of weights times homogeneous basis values at the given working lifts (atoms at infinity allowed)
MomentFunctional from_lifts(const PlaneCubic& c, const std::vector<Eigen::Vector3d>& lifts,
                            const std::vector<double>& weights, int d);

struct MomentTolerances {
  double rank = 1e-8;
  double psd = 1e-9;
};

struct MomentMatrixReport {
  Eigen::MatrixXd matrix;
  int rank = 0;
  double min_eig = 0;
  double max_singular = 0;
  bool psd = false;
  Eigen::VectorXd min_eigvec;
};

MomentMatrixReport moment_matrix(const MomentFunctional& L, int dprime, const MomentTolerances& tol = {});

struct ExtensionReport {
  bool restriction_ok = false;
  bool rank_ok = false;
  bool psd_ok = false;
  int rank_base = 0;
  int rank_ext = 0;
  bool passes() const { return restriction_ok && rank_ok && psd_ok; }
};

ExtensionReport check_flat_extension(const MomentFunctional& L, const MomentFunctional& Lext,
                                     const MomentTolerances& tol = {});
ExtensionReport check_almost_flat_extension(const MomentFunctional& L, const MomentFunctional& Lext,
                                            const MomentTolerances& tol = {});

struct Decomposition {
  std::vector<CurvePoint> atoms;
  std::vector<double> weights;  // affine weights
  double residual = 0;          // ||sum w_i m(A_i) - L|| / (1 + ||L||)
};

double decomposition_residual(const MomentFunctional& L, const std::vector<CurvePoint>& atoms,
                              const std::vector<double>& weights);

struct ExtractOptions {
  MomentTolerances tol;
  std::uint64_t seed = 3;
  bool polish = true;
};

Decomposition extract_atoms(const MomentFunctional& Lext, const ExtractOptions& opts = {});

}  // namespace cubic
