#include <doctest.h>

#include <cmath>
#include <random>

#include "cubic/moments.hpp"

using namespace cubic;

namespace {

PlaneCubic disc() { return new_weierstrass(-1, RealPair{0, 1}); }
PlaneCubic skewed() {
  Eigen::Matrix3d M;
  M << 1, 0.2, -0.1, 0.3, 1, 0.4, -0.2, 0.1, 1;
  return new_weierstrass(0, ComplexPair{0.5, 1.5}, M);
}

TernaryForm random_form(int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TernaryForm f(degree);
  for (int i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = g(rng);
  return f;
}

std::vector<double> weights_for(size_t n) {
  std::vector<double> w;
  for (size_t i = 0; i < n; ++i) w.push_back(0.5 + 0.25 * static_cast<double>(i));
  return w;
}

// samples with |x| <= 3, keeping the moment matrices well scaled
std::vector<CurvePoint> moderate(const PlaneCubic& c, int n, std::uint64_t seed) {
  std::vector<CurvePoint> out;
  for (const auto& p : sample_real_locus(c, 20 * n, std::nullopt, true, seed))
    if (std::abs(p.x()) <= 3 && static_cast<int>(out.size()) < n) out.push_back(p);
  return out;
}

}  // namespace

TEST_CASE("quotient basis") {
  CHECK(QuotientBasis(0).size() == 1);
  for (int k = 1; k <= 8; ++k) CHECK(QuotientBasis(k).size() == 3 * k);
  const QuotientBasis B(4);
  for (int p = 0; p < B.size(); ++p) CHECK(B.index(B.monomials()[p][0], B.monomials()[p][1]) == p);
  CHECK(B.index(3, 0) == -1);
}

TEST_CASE("functional of atoms agrees with direct evaluation") {
  std::mt19937_64 rng(5);
  for (const auto& c : {disc(), skewed()}) {
    const auto atoms = sample_real_locus(c, 5, std::nullopt, true, 12);
    const auto w = weights_for(atoms.size());
    for (int d = 1; d <= 3; ++d) {
      const auto L = from_atoms(c, atoms, w, d);
      CHECK(L.values.size() == 6 * d);
      for (int deg = 0; deg <= 2 * d; ++deg) {
        const auto f = random_form(deg, rng);
        double direct = 0;
        for (size_t i = 0; i < atoms.size(); ++i) {
          const Eigen::Vector3d a = atoms[i].working() / atoms[i].working()[0];
          direct += w[i] * f(a);
        }
        CHECK(L.apply(f) == doctest::Approx(direct).epsilon(1e-9));
      }
      if (d > 1) CHECK((L.truncate(1).values - from_atoms(c, atoms, w, 1).values).norm() < 1e-12);
    }
  }
}

TEST_CASE("the curve equation is annihilated") {
  const auto c = skewed();
  const auto L = from_atoms(c, sample_real_locus(c, 4, std::nullopt, true, 2), weights_for(4), 2);
  const TernaryForm x0 = TernaryForm::linear(Eigen::Vector3d(1, 0, 0));
  CHECK(std::abs(L.apply(c.working_equation() * x0)) < 1e-10);
}

TEST_CASE("derivative of homogeneous values") {
  const MomentFrame frame(skewed());
  const Eigen::Vector3d w(0.7, -0.3, 0.5), dw(0.1, 0.4, -0.2);
  Eigen::VectorXd v(6), dv(6);
  frame.homogeneous_values(w, dw, 2, v, dv);
  const double h = 1e-6;
  const Eigen::VectorXd fd = (frame.homogeneous_values(w + h * dw, 2) - frame.homogeneous_values(w - h * dw, 2)) / (2 * h);
  CHECK((fd - dv).norm() < 1e-7);
  CHECK((v - frame.homogeneous_values(w, 2)).norm() == 0);
}

TEST_CASE("moment matrix rank and psd") {
  const auto c = disc();
  for (int d = 1; d <= 3; ++d)
    for (int k = 1; k <= 3 * d + 1; ++k) {
      const auto L = from_atoms(c, moderate(c, k, 100 + k), weights_for(k), d);
      const auto M = moment_matrix(L, d);
      CHECK(M.psd);
      CHECK(M.rank == std::min(k, 3 * d));
      CHECK((M.matrix - M.matrix.transpose()).norm() == 0);
    }
  auto L = from_atoms(c, moderate(c, 3, 1), weights_for(3), 1);
  L.values = -L.values;
  CHECK_FALSE(moment_matrix(L, 1).psd);
  CHECK_THROWS_AS(moment_matrix(L, 2), Error);
}

TEST_CASE("flat extension of an atomic functional") {
  const auto c = skewed();
  const auto atoms = moderate(c, 3, 77);
  const auto L = from_atoms(c, atoms, weights_for(3), 2);
  const auto Lx = from_atoms(c, atoms, weights_for(3), 3);
  CHECK(check_flat_extension(L, Lx).passes());
  auto bad = Lx;
  bad.values[0] += 1e-3;
  CHECK_FALSE(check_flat_extension(L, bad).restriction_ok);
  CHECK_THROWS_AS(check_flat_extension(L, from_atoms(c, atoms, weights_for(3), 4)), Error);
  CHECK_THROWS_AS(check_flat_extension(L, from_atoms(disc(), sample_real_locus(disc(), 3, std::nullopt, true, 1),
                                                     weights_for(3), 3)),
                  Error);
  CHECK(check_almost_flat_extension(L, from_atoms(c, atoms, weights_for(3), 4)).passes());
}

TEST_CASE("extraction recovers atoms and weights") {
  const auto c = disc();
  const auto atoms = moderate(c, 4, 31);
  const auto w = weights_for(4);
  const auto Lx = from_atoms(c, atoms, w, 3);
  const auto dec = extract_atoms(Lx);
  REQUIRE(dec.atoms.size() == 4);
  for (size_t i = 0; i < atoms.size(); ++i) {
    bool hit = false;
    for (size_t j = 0; j < dec.atoms.size(); ++j)
      if (same_point(atoms[i], dec.atoms[j], 1e-7) && std::abs(w[i] - dec.weights[j]) < 1e-7) hit = true;
    CHECK(hit);
  }
  // moments of an atom at x ~ 6 dwarf those of one near the origin
  const auto cc = new_weierstrass(0, ComplexPair{0, 1});
  const std::vector<CurvePoint> far{cc.point(6.1, -std::sqrt(6.1 * 6.1 * 6.1 + 6.1)),
                                    cc.point(0.8, -std::sqrt(0.8 * 0.8 * 0.8 + 0.8))};
  const auto Lf = from_atoms(cc, far, {1.2, 0.6}, 4);
  for (int l = 1; l <= 4; ++l) CHECK(moment_matrix(Lf, l).rank == 2);
  const auto df = extract_atoms(Lf);
  REQUIRE(df.atoms.size() == 2);
  for (size_t j = 0; j < 2; ++j) {
    const size_t i = same_point(far[0], df.atoms[j], 1e-7) ? 0 : 1;
    CHECK(same_point(far[i], df.atoms[j], 1e-7));
    CHECK(df.weights[j] == doctest::Approx(i == 0 ? 1.2 : 0.6).epsilon(1e-7));
  }
  // rank grows from level 1 to 2 for seven atoms
  CHECK_THROWS_AS(extract_atoms(from_atoms(c, moderate(c, 7, 3), weights_for(7), 2)),
                  Error);
}
