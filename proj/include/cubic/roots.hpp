#pragma once

#include <complex>
#include <vector>

namespace cubic {

using cplx = std::complex<double>;

struct RootCluster {
  cplx z;
  int multiplicity = 1;
};

// coefficients ascending; leading zeros are trimmed relative to 1e-14 of the largest
std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs);

// Groups roots into multiple roots. Roots within `tight`*(1+|z|) always merge; roots
// within `loose`*(1+|z|) merge when the shifted Taylor coefficients of p at the cluster
// mean look like a genuine multiple root.
std::vector<RootCluster> cluster_roots(const std::vector<cplx>& coeffs, const std::vector<cplx>& roots,
                                       double tight = 1e-6, double loose = 1e-2, double taylor_tol = 1e-10);

std::vector<RootCluster> roots_with_multiplicity(const std::vector<cplx>& coeffs);

// Taylor coefficients of p(z + t)
std::vector<cplx> taylor_shift(const std::vector<cplx>& coeffs, cplx z);

// real roots of a real polynomial with multiplicity, imaginary parts below tol*(1+|z|)
struct RealRoot {
  double x;
  int multiplicity;
};
std::vector<RealRoot> real_roots(const std::vector<double>& coeffs, double imag_tol = 1e-7);

}  // namespace cubic
