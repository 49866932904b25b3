#include "cubic/roots.hpp"

#include <unsupported/Eigen/Polynomials>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubic {

namespace {

double coeff_scale(const std::vector<cplx>& c, double r) {
  double s = 0, rk = 1;
  for (const auto& v : c) {
    s += std::abs(v) * rk;
    rk *= std::max(1.0, r);
  }
  return s;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
  double big = 0;
  for (const auto& v : coeffs) big = std::max(big, std::abs(v));
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-14 * big) coeffs.pop_back();
  if (coeffs.size() <= 1) return {};
  if (coeffs.size() == 2) return {-coeffs[0] / coeffs[1]};
  Eigen::VectorXcd c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i];
  Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(c);
  const auto& r = solver.roots();
  std::vector<cplx> out(r.data(), r.data() + r.size());
  // one Newton polish step per root, kept only if it lowers |p|
  std::vector<cplx> dc(coeffs.size() - 1);
  for (size_t i = 1; i < coeffs.size(); ++i) dc[i - 1] = double(i) * coeffs[i];
  for (auto& z : out) {
    for (int it = 0; it < 3; ++it) {
      const cplx pz = horner(coeffs, z), dz = horner(dc, z);
      if (std::abs(dz) == 0) break;
      const cplx zn = z - pz / dz;
      if (std::abs(horner(coeffs, zn)) < std::abs(pz)) z = zn;
      else break;
    }
  }
  return out;
}

std::vector<cplx> taylor_shift(const std::vector<cplx>& coeffs, cplx z) {
  std::vector<cplx> t = coeffs;
  const int n = static_cast<int>(t.size());
  for (int k = 0; k < n; ++k)
    for (int i = n - 2; i >= k; --i) t[i] += z * t[i + 1];
  return t;
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& coeffs, const std::vector<cplx>& roots,
                                       double tight, double loose, double taylor_tol) {
  struct Group {
    std::vector<cplx> members;
    cplx mean() const { return std::accumulate(members.begin(), members.end(), cplx(0)) / double(members.size()); }
    double spread() const {
      const cplx m = mean();
      double s = 0;
      for (const auto& z : members) s = std::max(s, std::abs(z - m));
      return s;
    }
  };
  std::vector<Group> groups;
  for (const auto& z : roots) groups.push_back({{z}});

  auto merge_pass = [&](double radius, bool check) {
    std::vector<std::pair<size_t, size_t>> refused;
    for (;;) {
      double best = 1e300;
      size_t bi = 0, bj = 0;
      for (size_t i = 0; i < groups.size(); ++i)
        for (size_t j = i + 1; j < groups.size(); ++j) {
          const cplx mi = groups[i].mean(), mj = groups[j].mean();
          const double dist = std::abs(mi - mj);
          if (dist > radius * (1 + std::abs(mi))) continue;
          if (std::find(refused.begin(), refused.end(), std::make_pair(i, j)) != refused.end()) continue;
          if (dist < best) best = dist, bi = i, bj = j;
        }
      if (best == 1e300) return;
      Group merged = groups[bi];
      merged.members.insert(merged.members.end(), groups[bj].members.begin(), groups[bj].members.end());
      bool ok = true;
      if (check) {
        const cplx zb = merged.mean();
        const double sigma = merged.spread();
        const auto tau = taylor_shift(coeffs, zb);
        const double scale = coeff_scale(coeffs, std::abs(zb));
        double lhs = 0, sp = 1;
        for (size_t j = 0; j < merged.members.size() && j < tau.size(); ++j, sp *= sigma) lhs += std::abs(tau[j]) * sp;
        ok = lhs <= taylor_tol * scale;
      }
      if (!ok) {
        refused.emplace_back(bi, bj);
        continue;
      }
      groups[bi] = std::move(merged);
      groups.erase(groups.begin() + bj);
      refused.clear();
    }
  };
  merge_pass(tight, false);
  merge_pass(loose, true);

  std::vector<RootCluster> out;
  for (const auto& g : groups) out.push_back({g.mean(), static_cast<int>(g.members.size())});
  return out;
}

std::vector<RootCluster> roots_with_multiplicity(const std::vector<cplx>& coeffs) {
  return cluster_roots(coeffs, polynomial_roots(coeffs));
}

std::vector<RealRoot> real_roots(const std::vector<double>& coeffs, double imag_tol) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  std::vector<RealRoot> out;
  for (const auto& r : roots_with_multiplicity(c))
    if (std::abs(r.z.imag()) <= imag_tol * (1 + std::abs(r.z))) out.push_back({r.z.real(), r.multiplicity});
  std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.x < b.x; });
  return out;
}

}  // namespace cubic
