// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, or when the only failures are the ones named
// with --expect-fail (a comma list of criterion numbers). Expected failures are still printed
// as FAIL; a criterion listed there that passes is printed as PASS and reported as unexpected.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cubic/constructions.hpp"
#include "cubic/fixtures.hpp"

using namespace cubic;

namespace {

// tolerances of the criteria
constexpr double kClosureTol = 1e-8;
constexpr double kAssocTol = 1e-7;
constexpr double kFixtureTol = 1e-6;
constexpr double kCertTol = 1e-7;
constexpr double kFitTol = 1e-8;
constexpr double kFailThreshold = 1e-3;
constexpr double kSumTol = 1e-8;
constexpr double kExtractTol = 1e-7;

PlaneCubic disc() { return new_weierstrass(-1, RealPair{0, 1}); }
PlaneCubic conn() { return new_weierstrass(0, ComplexPair{0, 1}); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// n - 1 random affine atoms plus the one closing the sum to `target`, redrawn when atoms collide
std::vector<CurvePoint> closing_atoms(const PlaneCubic& c, int n, const CurvePoint& target, std::uint64_t seed) {
  for (std::uint64_t s = seed;; s += 1000003) {
    auto pts = random_atomic_functional(c, 1, n - 1, s).atoms;
    const CurvePoint last = add(c, target, neg(c, sum_points(c, pts)));
    if (last.is_identity() || std::abs(last.working()[0]) < 0.05) continue;
    bool ok = true;
    for (const auto& p : pts) ok = ok && !same_point(p, last, 1e-3);
    if (!ok) continue;
    pts.push_back(last);
    return pts;
  }
}

// random affine atoms with pairwise projective distance >= sep
std::vector<CurvePoint> spread_atoms(const PlaneCubic& c, int n, double sep, std::mt19937_64& rng) {
  for (;;) {
    auto pts = random_atomic_functional(c, 1, n, rng()).atoms;
    bool ok = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) ok = ok && projective_distance(pts[i].working(), pts[j].working()) >= sep;
    if (ok) return pts;
  }
}

double sampled_min(const PlaneCubic& c, const TernaryForm& q) {
  double lo = 1e300;
  for (Component comp : topology(c).components)
    for (int i = 0; i < 1000; ++i) lo = std::min(lo, value_on_component(c, q, comp, c.period(comp) * (i + 0.5) / 1000));
  return lo;
}

Outcome group_law() {
  Outcome o;
  int closure = 0, assoc = 0;
  double worst_closure = 0, worst_assoc = 0;
  for (const auto& c : {disc(), conn()}) {
    const auto pts = sample_real_locus(c, 2000, std::nullopt, true, 2024);
    for (int i = 0; i < 1000; ++i) {
      const auto R = add(c, pts[2 * i], pts[2 * i + 1]);
      ++closure;
      if (!R.is_identity()) worst_closure = std::max(worst_closure, c.residual(R.x(), R.y()));
    }
    const auto more = sample_real_locus(c, 1500, std::nullopt, true, 77);
    for (int i = 0; i < 500; ++i) {
      const auto &P = more[3 * i], &Q = more[3 * i + 1], &S = more[3 * i + 2];
      const double e = projective_distance(add(c, add(c, P, Q), S).working(), add(c, P, add(c, Q, S)).working());
      worst_assoc = std::max(worst_assoc, e);
      ++assoc;
    }
    const CurvePoint O = c.identity();
    for (int i = 0; i < 100; ++i) {
      const auto& P = pts[i];
      const auto R = add(c, P, O), L = add(c, O, P);
      o.pass = o.pass && R.x() == P.x() && R.y() == P.y() && L.x() == P.x() && L.y() == P.y();
      o.pass = o.pass && add(c, P, neg(c, P)).is_identity();
    }
  }
  const auto c = disc();
  const bool t3 = same_point(add(c, c.point(-1, 0), c.point(0, 0)), c.point(1, 0), 1e-12);
  o.pass = o.pass && t3 && worst_closure <= kClosureTol && worst_assoc <= kAssocTol;
  o.detail = std::to_string(closure) + " closure (max " + fmt("%.1e", worst_closure) + "), " + std::to_string(assoc) +
             " associativity (max " + fmt("%.1e", worst_assoc) + "), T1+T2=T3 " + (t3 ? "yes" : "no");
  return o;
}

Outcome torsion_signs() {
  Outcome o;
  int draws = 0, wrong = 0;
  for (const auto& c : {disc(), conn()}) {
    const auto tt = two_torsion(c);
    o.pass = o.pass && tt.positive.size() == 2 && tt.positive[0].is_identity() &&
             same_point(tt.positive[1], c.point(c.data().a1, 0));
    for (size_t cls = 0; cls < tt.all_real.size(); ++cls)
      for (int i = 0; i < 100; ++i) {
        const auto atoms = closing_atoms(c, 3, tt.all_real[cls], 1000 * cls + i);
        const auto eq = extreme_quadric(c, atoms, 1);
        const bool expect = cls < 2;
        const bool sampled = sampled_min(c, eq.form) > -1e-9;
        ++draws;
        if (eq.nonnegative != expect || sampled != expect) ++wrong;
      }
  }
  o.pass = o.pass && wrong == 0;
  o.detail = std::to_string(draws) + " draws, " + std::to_string(wrong) + " with the wrong sign";
  return o;
}

Outcome face_dimensions() {
  // supports are kept 0.2 apart: closer points make the 1e-7 rank cut ambiguous
  constexpr double sep = 0.2;
  Outcome o;
  int cases = 0, bad = 0;
  std::mt19937_64 rng(31);
  for (const auto& c : {disc(), conn()})
    for (int d = 1; d <= 2; ++d) {
      for (int deg = 1; deg <= 3 * d - 1; ++deg)
        for (int t = 0; t < 50; ++t) {
          // multiplicities 1 or 2 adding up to deg
          Divisor D;
          const auto pts = spread_atoms(c, deg, sep, rng);
          int left = deg;
          for (size_t i = 0; left > 0; ++i) {
            const int m = left >= 2 && rng() % 3 == 0 ? 2 : 1;
            D.add(pts[i], m);
            left -= m;
          }
          ++cases;
          if (static_cast<int>(interpolate_double_vanishing(c, D, 2 * d).size()) != 2 * (3 * d - deg)) ++bad;
        }
      const auto tt = two_torsion(c);
      for (int t = 0; t < 50; ++t) {
        std::vector<CurvePoint> atoms;
        while (atoms.empty()) {
          auto p = spread_atoms(c, 3 * d - 1, sep, rng);
          const CurvePoint last = add(c, tt.all_real[t % tt.all_real.size()], neg(c, sum_points(c, p)));
          if (last.is_identity() || std::abs(last.working()[0]) < 0.05) continue;
          bool ok = true;
          for (const auto& q : p) ok = ok && projective_distance(q.working(), last.working()) >= sep;
          if (!ok) continue;
          p.push_back(last);
          atoms = p;
        }
        ++cases;
        if (interpolate_double_vanishing(c, Divisor::from_points(atoms), 2 * d).size() != 1) ++bad;
        std::vector<CurvePoint> generic;
        do generic = spread_atoms(c, 3 * d, sep, rng);
        while (classify_torsion(c, sum_points(c, generic), 1e-4) != TorsionClass::NonTorsion);
        ++cases;
        if (!interpolate_double_vanishing(c, Divisor::from_points(generic), 2 * d).empty()) ++bad;
      }
    }
  o.pass = bad == 0;
  o.detail = std::to_string(cases) + " divisors, " + std::to_string(bad) + " with the wrong kernel dimension";
  return o;
}

Outcome nolowerset() {
  const auto r = reproduce_nolowerset();
  Outcome o;
  const int n = static_cast<int>(r.tangencies.size());
  o.pass = n == 4 && r.all_double && r.max_point_error <= kFixtureTol && r.same_kernel && r.lower_set_violated;
  o.detail = std::to_string(n) + " double points, max error " + fmt("%.1e", r.max_point_error) + ", kernels " +
             std::to_string(r.kernel_dim_three) + "/" + std::to_string(r.kernel_dim_four) + " gap " +
             fmt("%.1e", r.kernel_gap);
  return o;
}

Outcome sextic() {
  const auto r = reproduce_sextic();
  Outcome o;
  o.pass = r.real_points.size() == 4 && r.real_part_doubled && r.max_point_error <= kFixtureTol && r.complex_pair &&
           r.kernel_dim == 1;
  o.detail = std::to_string(r.real_points.size()) + " real double points, max error " + fmt("%.1e", r.max_point_error) +
             ", complex pair " + (r.complex_pair ? "yes" : "no") + ", kernel dim " + std::to_string(r.kernel_dim);
  return o;
}

Outcome certificates() {
  Outcome o;
  double worst = 0;
  int made = 0;
  for (const auto& c : {disc(), conn()}) {
    const CurvePoint T1 = c.point(c.data().a1, 0);
    for (int i = 0; i < 100; ++i) {
      const auto cert = artin_certificate(c, closing_atoms(c, 3, T1, 7000 + i), 17 + i);
      ++made;
      // the identity q den = alpha num, rechecked at samples the constructor has not seen
      double err = 0, scale = 0;
      for (const auto& P : sample_real_locus(c, 200, std::nullopt, false, 55555 + i)) {
        const Eigen::Vector3d& x = P.working();
        const double l12 = cert.l_a1a2.dot(x), ls = cert.l_sum_a3.dot(x), lv = cert.l_vertical.dot(x),
                     lt = cert.l_t1.dot(x);
        const double lhs = cert.q(x) * lv * lv * lt * lt * cert.aux_denominator(x);
        const double rhs = cert.alpha * l12 * l12 * ls * ls * cert.aux_numerator(x);
        err = std::max(err, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(lhs));
      }
      worst = std::max(worst, err / scale);
      o.pass = o.pass && cert.alpha > 0;
    }
  }
  o.pass = o.pass && worst <= kCertTol;
  o.detail = std::to_string(made) + " certificates, max relative identity error " + fmt("%.1e", worst);
  return o;
}

Outcome caratheodory_connected() {
  Outcome o;
  const auto c = conn();
  int ok = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const auto f = random_atomic_functional(c, 1, 5, start_seed(2718, t));
    DecomposeOptions opts;
    opts.seed = start_seed(99, t);
    const auto r = decompose(c, f.L, 3, opts);
    const double res = decomposition_residual(f.L, r.best.atoms, r.best.weights);
    worst = std::max(worst, res);
    if (r.success && res <= kFitTol) ++ok;
  }
  o.pass = ok == 200;
  o.detail = std::to_string(ok) + "/200 functionals of 5 atoms fitted with 3, max residual " + fmt("%.1e", worst);
  return o;
}

Outcome caratheodory_disconnected() {
  Outcome o;
  const auto c = disc();
  int ok = 0;
  double short_min = 1e300, long_max = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto r = caratheodory_counterexample(c, 1, s);
    const double cert = r.L.apply(r.q);
    const double long_res = decomposition_residual(r.L, r.k_long.best.atoms, r.k_long.best.weights);
    short_min = std::min(short_min, r.k_short.best.residual);
    long_max = std::max(long_max, long_res);
    if (!r.degenerate && cert < 0 && r.k_short.starts_run == 64 && r.k_short.best.residual > kFailThreshold &&
        r.k_long.success && long_res <= kFitTol)
      ++ok;
  }
  o.pass = ok == 20;
  o.detail = std::to_string(ok) + "/20 seeds; min k=3 residual " + fmt("%.1e", short_min) + ", max k=4 residual " +
             fmt("%.1e", long_max) + " (k=3 failure is optimizer evidence)";
  return o;
}

Outcome flat_vs_almost_flat() {
  Outcome o;
  const auto c = disc();
  const std::vector<CurvePoint> T{c.point(-1, 0), c.point(0, 0), c.point(1, 0)};
  const std::vector<double> ones{1, 1, 1};
  const auto L = from_atoms(c, T, ones, 1);
  const int rank = moment_matrix(L, 1).rank;
  // L(y^2) = 0 forces the support into the real points with y = 0, which are T1, T2, T3;
  // every representation with at most two of them misses L
  TernaryForm y2(2);
  y2.coeffs()[monomial_index({0, 0, 2})] = 1;
  const double Ly2 = L.apply(y2);
  double best_two = 1e300;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      // least squares weights on the pair, clamped at zero
      const MomentFrame frame(c);
      Eigen::MatrixXd A(6, 2);
      A.col(0) = frame.homogeneous_values(T[i].working() / T[i].working()[0], 2);
      A.col(1) = frame.homogeneous_values(T[j].working() / T[j].working()[0], 2);
      const Eigen::VectorXd w = A.colPivHouseholderQr().solve(L.values).cwiseMax(0.0);
      best_two = std::min(best_two, (A * w - L.values).norm() / (1 + L.norm()));
    }
  const auto Lext = from_atoms(c, T, ones, 3);
  const auto almost = check_almost_flat_extension(L, Lext);
  o.pass = rank == 2 && std::abs(Ly2) < 1e-14 && best_two > kFailThreshold && almost.passes();
  o.detail = "rank M1 = " + std::to_string(rank) + ", L(y^2) = " + fmt("%.0e", Ly2) + ", best 2-atom residual " +
             fmt("%.2f", best_two) + ", almost flat ranks " + std::to_string(almost.rank_base) + " -> " +
             std::to_string(almost.rank_ext);
  return o;
}

Outcome two_representations() {
  Outcome o;
  int ok = 0, third = 0;
  for (const auto& c : {conn(), disc()})
    for (int t = 0; t < 50; ++t) {
      // near coincident atoms of A force B to within the disjointness radius of A
      const auto f = random_interior_functional(c, 1, start_seed(4242, t), 0.2);
      DecomposeOptions opts;
      opts.seed = start_seed(17, t);
      Decomposition B;
      try {
        B = second_representation(c, f.L, f.atoms, opts);
      } catch (const Error&) {
        continue;
      }
      const double res = decomposition_residual(f.L, B.atoms, B.weights);
      bool disjoint = true;
      for (const auto& a : f.atoms)
        for (const auto& b : B.atoms) disjoint = disjoint && !same_point(a, b, 1e-4);
      const bool sums = same_point(sum_points(c, B.atoms), neg(c, sum_points(c, f.atoms)), kSumTol);
      // 256 further starts: every successful fit must be A or B
      DecomposeOptions more;
      more.seed = start_seed(31337, t);
      more.starts = 256;
      more.stop_at_first_success = false;
      more.keep_successes = true;
      const Decomposition A{f.atoms, f.weights, 0};
      bool unique = true;
      for (const auto& s : decompose(c, f.L, 3, more).successes)
        if (!same_representation(s, A) && !same_representation(s, B)) unique = false;
      if (!unique) ++third;
      if (res <= kFitTol && disjoint && sums && unique) ++ok;
    }
  o.pass = ok == 100;
  o.detail = std::to_string(ok) + "/100 functionals, " + std::to_string(third) + " with a third representation";
  return o;
}

Outcome infinity_escape() {
  Outcome o;
  const auto c = conn();
  int ok = 0, inf_ok = 0, short_fail = 0, long_ok = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto r = infinity_escape_example(c, s);
    const bool a = r.real_points_at_infinity >= 2;
    const bool b = r.k_short.best.residual > kFailThreshold;
    const bool l = r.k_long.success && r.k_long.best.residual <= kFitTol;
    inf_ok += a, short_fail += b, long_ok += l;
    if (a && b && l) ++ok;
  }
  o.pass = ok == 10;
  o.detail = std::to_string(ok) + "/10 seeds; >=2 real points at infinity " + std::to_string(inf_ok) +
             ", k=3 fails " + std::to_string(short_fail) + ", k=4 fits " + std::to_string(long_ok);
  return o;
}

Outcome extraction() {
  Outcome o;
  double worst = 0;
  int runs = 0;
  for (const auto& c : {disc(), conn()})
    for (int d = 1; d <= 3; ++d)
      for (int k = 1; k <= 3; ++k) {
        const auto f = random_atomic_functional(c, d + 1, k, 100 * d + k);
        const auto dec = extract_atoms(f.L);
        ++runs;
        if (dec.atoms.size() != f.atoms.size()) {
          o.pass = false;
          continue;
        }
        for (size_t i = 0; i < f.atoms.size(); ++i) {
          double e = 1e300;
          for (size_t j = 0; j < dec.atoms.size(); ++j)
            e = std::min(e, std::max(projective_distance(f.atoms[i].working(), dec.atoms[j].working()),
                                     std::abs(f.weights[i] - dec.weights[j])));
          worst = std::max(worst, e);
        }
      }
  o.pass = o.pass && worst <= kExtractTol;
  o.detail = std::to_string(runs) + " round trips, max atom/weight error " + fmt("%.1e", worst);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) expected.insert(std::stoi(tok));
    }
  }
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"group law", group_law},
      {"torsion and extreme quadric signs", torsion_signs},
      {"face dimensions", face_dimensions},
      {"quartic lower-set fixture", nolowerset},
      {"sextic extreme ray fixture", sextic},
      {"certificate residuals", certificates},
      {"Caratheodory number, connected", caratheodory_connected},
      {"Caratheodory number, disconnected", caratheodory_disconnected},
      {"flat vs almost flat", flat_vs_almost_flat},
      {"two representations", two_representations},
      {"infinity escape", infinity_escape},
      {"extraction round trip", extraction},
  };
  int failed = 0, unexpected = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-36s %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].name, o.detail.c_str(), secs,
                !o.pass && expected.count(id) ? " (expected)" : "");
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!expected.count(id)) ++unexpected;
    } else if (expected.count(id)) {
      std::printf("     %2d passed although listed as an expected failure\n", id);
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return unexpected == 0 ? 0 : 1;
}
