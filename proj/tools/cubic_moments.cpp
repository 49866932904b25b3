// cubic-moments: command-line front end for the cubic moment library.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "cubic/io.hpp"

using namespace cubic;

namespace {

constexpr int kOk = 0, kVerification = 2, kInput = 3;

struct Args {
  std::string curve, divisor, points, functional, out, csv, fixture;
  int d = 1, trials = 200, starts = 64;
  std::uint64_t seed = 1;
  double tol_rank = 1e-8, tol_psd = 1e-9, tol_fit = 1e-8, eps = 1e-2;
};

const char* kSchema = R"(input schemas:
  curve     {"a1": x, "pair": {"real": [a2, a3]} | {"complex": [re, im]}, "transform": [[3x3]] optional}
  divisor   {"entries": [{"point": [p0, p1, p2], "imag": [..] optional, "mult": m, "real": bool}]}
  points    {"points": [[x, y], ...] or "O" for the identity, "weights": [...] optional}
  functional {"d": d, "values": [6d numbers]}
)";

int threads_from_env() {
  const char* s = std::getenv("CUBIC_MOMENTS_THREADS");
  if (!s) return 0;
  const int n = std::atoi(s);
  return n > 0 ? n : 0;
}

PlaneCubic require_curve(const Args& a) {
  if (a.curve.empty()) throw Error(ErrorCode::InvalidInput, "--curve is required");
  return load_curve(a.curve);
}

struct PointSet {
  std::vector<CurvePoint> points;
  std::vector<double> weights;
};

PointSet read_points(const PlaneCubic& c, const std::string& path) {
  const Json j = read_json_file(path);
  PointSet ps;
  try {
    for (const auto& p : j.at("points")) {
      if (p.is_string() && p.get<std::string>() == "O") ps.points.push_back(c.identity());
      else ps.points.push_back(c.point(p.at(0).get<double>(), p.at(1).get<double>()));
    }
    if (j.contains("weights"))
      for (const auto& w : j["weights"]) ps.weights.push_back(w.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("points: ") + e.what());
  }
  if (ps.weights.empty()) ps.weights.assign(ps.points.size(), 1.0);
  if (ps.weights.size() != ps.points.size()) throw Error(ErrorCode::InvalidInput, "weights and points differ in length");
  return ps;
}

DecomposeOptions decompose_options(const Args& a) {
  DecomposeOptions o;
  o.starts = a.starts;
  o.seed = a.seed;
  o.tol = a.tol_fit;
  o.threads = threads_from_env();
  return o;
}

MomentTolerances moment_tolerances(const Args& a) { return {a.tol_rank, a.tol_psd}; }

Json tolerances(const Args& a) {
  return Json{{"rank", a.tol_rank}, {"psd", a.tol_psd}, {"fit", a.tol_fit}};
}

// n - 1 random affine atoms and a last one closing the sum to T1
std::vector<CurvePoint> random_t1_atoms(const PlaneCubic& c, int n, std::uint64_t seed) {
  const CurvePoint T1 = c.point(c.data().a1, 0.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto pts = sample_real_locus(c, n - 1, std::nullopt, true, seed + attempt);
    const CurvePoint last = add(c, T1, neg(c, sum_points(c, pts)));
    pts.push_back(last);
    bool ok = !last.is_identity();
    for (int i = 0; ok && i < n; ++i)
      for (int j = i + 1; ok && j < n; ++j) ok = !same_point(pts[i], pts[j], 1e-6);
    if (ok) return pts;
  }
  throw Error(ErrorCode::RetriesExhausted, "could not draw atoms summing to T1");
}

struct Outcome {
  Json result;
  int code = kOk;
  Json metadata = Json::object();
};

Outcome curve_info(const Args& a) {
  const auto c = require_curve(a);
  Outcome o;
  o.result["curve"] = to_json(c);
  const auto tt = two_torsion(c);
  Json all = Json::array(), pos = Json::array();
  for (const auto& p : tt.all_real) all.push_back(to_json(p));
  for (const auto& p : tt.positive) pos.push_back(to_json(p));
  o.result["two_torsion"] = all;
  o.result["positive_two_torsion"] = pos;
  Json inf = Json::array();
  for (const auto& p : points_at_infinity(c)) {
    Json x = to_json(p.point);
    x["multiplicity"] = p.multiplicity;
    inf.push_back(x);
  }
  o.result["points_at_infinity"] = inf;
  return o;
}

Outcome face_check(const Args& a) {
  const auto c = require_curve(a);
  if (a.divisor.empty()) throw Error(ErrorCode::InvalidInput, "--divisor is required");
  const Divisor D = divisor_from_json(read_json_file(a.divisor));
  Outcome o;
  o.result["divisor"] = to_json(D);
  o.result["report"] = to_json(face_divisor_check(c, D, a.d));
  return o;
}

Outcome extreme_ray(const Args& a) {
  const auto c = require_curve(a);
  std::vector<CurvePoint> atoms;
  if (!a.points.empty()) atoms = read_points(c, a.points).points;
  else atoms = random_t1_atoms(c, 3 * a.d, a.seed);
  const auto eq = extreme_quadric(c, atoms, a.d);
  Outcome o;
  Json at = Json::array();
  for (const auto& p : atoms) at.push_back(to_json(p));
  o.result["atoms"] = at;
  o.result["extreme_quadric"] = to_json(eq);
  const auto nn = nonnegativity_check(c, eq.form);
  o.result["nonnegativity"] = to_json(nn);
  if (nn.nonneg != eq.nonnegative) o.code = kVerification;
  return o;
}

Outcome certify(const Args& a) {
  const auto c = require_curve(a);
  const auto atoms = a.points.empty() ? random_t1_atoms(c, 3, a.seed) : read_points(c, a.points).points;
  Outcome o;
  try {
    o.result["certificate"] = to_json(artin_certificate(c, atoms, a.seed));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::VerificationFailed) throw;
    o.result["error"] = e.what();
    o.code = kVerification;
  }
  return o;
}

Outcome moment_check(const Args& a) {
  const auto c = require_curve(a);
  MomentFunctional L;
  if (!a.functional.empty()) L = functional_from_json(read_json_file(a.functional), c);
  else if (!a.points.empty()) {
    const auto ps = read_points(c, a.points);
    L = from_atoms(c, ps.points, ps.weights, a.d);
  } else throw Error(ErrorCode::InvalidInput, "--functional or --points is required");
  MembershipOptions mo;
  mo.decompose = decompose_options(a);
  mo.tol = moment_tolerances(a);
  Outcome o;
  o.result["functional"] = to_json(L);
  o.result["moment_matrix"] = to_json(moment_matrix(L, L.d, mo.tol));
  o.result["membership"] = to_json(membership(c, L, mo));
  return o;
}

Outcome second_rep(const Args& a) {
  const auto c = require_curve(a);
  std::vector<CurvePoint> atoms;
  std::vector<double> weights;
  if (!a.points.empty()) {
    auto ps = read_points(c, a.points);
    atoms = ps.points, weights = ps.weights;
  } else {
    auto f = random_interior_functional(c, a.d, a.seed);
    atoms = f.atoms, weights = f.weights;
  }
  const auto L = from_atoms(c, atoms, weights, a.d);
  Outcome o;
  Json at = Json::array();
  for (const auto& p : atoms) at.push_back(to_json(p));
  o.result["atoms_a"] = at;
  o.result["functional"] = to_json(L);
  try {
    const auto B = second_representation(c, L, atoms, decompose_options(a));
    o.result["second"] = to_json(B);
    const CurvePoint sa = sum_points(c, atoms), sb = sum_points(c, B.atoms);
    o.result["sum_a"] = to_json(sa);
    o.result["sum_b"] = to_json(sb);
    o.result["sum_relation"] = same_point(sb, neg(c, sa), 1e-8);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    o.result["error"] = e.what();
    o.code = kVerification;
  }
  return o;
}

Outcome cara_experiment(const Args& a) {
  const auto c = require_curve(a);
  ExperimentConfig cfg;
  cfg.d = a.d;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.starts = a.starts;
  cfg.tol = moment_tolerances(a);
  cfg.fit_tol = a.tol_fit;
  cfg.threads = threads_from_env();
  const auto r = caratheodory_experiment(c, cfg);
  Outcome o;
  o.result = to_json(r);
  Json secs = Json::array();
  for (const auto& t : r.records) secs.push_back(t.seconds);
  o.metadata["trial_seconds"] = secs;
  std::string csv = a.csv;
  if (csv.empty() && !a.out.empty()) csv = a.out + ".csv";
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + csv);
    f << histogram_csv(r);
    o.result["csv"] = csv;
  } else {
    o.result["csv_histogram"] = histogram_csv(r);
  }
  o.code = r.pass ? kOk : kVerification;
  return o;
}

Outcome counterexample(const Args& a) {
  const auto c = a.curve.empty() ? new_weierstrass(-1, RealPair{0, 1}) : load_curve(a.curve);
  const auto r = caratheodory_counterexample(c, a.d, a.seed, a.eps, decompose_options(a));
  Outcome o;
  o.result = to_json(r);
  o.code = r.passes() || r.degenerate ? kOk : kVerification;
  return o;
}

Outcome infinity_escape(const Args& a) {
  const auto c = a.curve.empty() ? new_weierstrass(0, ComplexPair{0, 1}) : load_curve(a.curve);
  const auto r = infinity_escape_example(c, a.seed, decompose_options(a));
  Outcome o;
  o.result = to_json(r);
  o.code = r.passes() ? kOk : kVerification;
  return o;
}

Outcome reproduce(const Args& a) {
  Outcome o;
  if (a.fixture == "nolowerset") {
    const auto r = reproduce_nolowerset();
    o.result = to_json(r);
    o.code = r.lower_set_violated && r.max_point_error < 1e-6 ? kOk : kVerification;
  } else if (a.fixture == "sextic") {
    const auto r = reproduce_sextic();
    o.result = to_json(r);
    o.code = r.extreme_ray && r.complex_pair && r.real_part_doubled ? kOk : kVerification;
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown fixture '" + a.fixture + "' (nolowerset or sextic)");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegativity, face divisors and truncated moments on real plane cubics"};
  app.footer(kSchema);
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* s) {
    s->add_option("--curve", a.curve, "curve description (JSON)");
    s->add_option("--d", a.d, "half degree");
    s->add_option("--seed", a.seed, "random seed");
    s->add_option("--starts", a.starts, "multistart count");
    s->add_option("--trials", a.trials, "experiment trials");
    s->add_option("--tol-rank", a.tol_rank, "relative rank threshold");
    s->add_option("--tol-psd", a.tol_psd, "psd threshold relative to the trace");
    s->add_option("--tol-fit", a.tol_fit, "relative fit residual for a successful decomposition");
    s->add_option("--out", a.out, "write the JSON report here instead of stdout");
    s->add_option("--divisor", a.divisor, "divisor (JSON)");
    s->add_option("--points", a.points, "curve points (JSON)");
    s->add_option("--functional", a.functional, "moment functional (JSON)");
    s->add_option("--csv", a.csv, "histogram CSV path (default: <out>.csv)");
    s->add_option("--eps", a.eps, "perturbation weight of the counterexample");
  };
  struct Cmd {
    const char* name;
    const char* help;
    Outcome (*run)(const Args&);
  };
  const Cmd cmds[] = {
      {"curve-info", "topology, 2-torsion and points at infinity", curve_info},
      {"face-check", "face-divisor test for a divisor", face_check},
      {"extreme-ray", "extreme quadric through 3d atoms", extreme_ray},
      {"certify", "Artin-type certificate for a T1 triple", certify},
      {"moment-check", "moment matrix and membership", moment_check},
      {"second-rep", "second 3d-atom representation", second_rep},
      {"cara-experiment", "Caratheodory experiment with CSV histogram", cara_experiment},
      {"counterexample", "3d-atom counterexample on a disconnected curve", counterexample},
      {"infinity-escape", "affine representation escaping to infinity", infinity_escape},
      {"reproduce", "reference fixtures: nolowerset or sextic", reproduce},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    common(s);
    if (std::string(c.name) == "reproduce") s->add_option("fixture", a.fixture, "nolowerset | sextic")->required();
    subs.emplace_back(s, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() == 0) return kOk;
    std::cerr << kSchema;
    return kInput;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  std::string command;
  try {
    for (const auto& [s, c] : subs)
      if (s->parsed()) {
        command = c->name;
        out = c->run(a);
      }
  } catch (const Error& e) {
    const bool verification = e.code() == ErrorCode::VerificationFailed || e.code() == ErrorCode::NotFound ||
                              e.code() == ErrorCode::RetriesExhausted;
    std::cerr << "error: " << e.what() << "\n";
    if (!verification) std::cerr << kSchema;
    out.result = Json{{"error", error_name(e.code())}, {"message", e.what()}};
    out.code = verification ? kVerification : kInput;
  }
  Json doc;
  doc["command"] = command;
  doc["seed"] = a.seed;
  doc["tolerances"] = tolerances(a);
  doc["result"] = out.result;
  doc["exit_code"] = out.code;
  out.metadata["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc["metadata"] = out.metadata;
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty()) std::cout << text;
  else {
    std::ofstream f(a.out);
    if (!f) {
      std::cerr << "cannot write " << a.out << "\n";
      return kInput;
    }
    f << text;
  }
  return out.code;
}
