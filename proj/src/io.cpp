#include "cubic/io.hpp"

#include <fstream>

namespace cubic {

namespace {

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json vec3(const Eigen::Vector3d& v) { return Json::array({v[0], v[1], v[2]}); }

Eigen::VectorXd to_vector(const Json& a) {
  if (!a.is_array()) throw Error(ErrorCode::InvalidInput, "expected a numeric array");
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

Json matrix(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

Json to_json(const PlaneCubic& c) {
  const auto& w = c.data();
  Json j;
  j["a1"] = w.a1;
  if (w.real_pair()) {
    const auto p = std::get<RealPair>(w.pair);
    j["pair"] = {{"real", {p.a2, p.a3}}};
  } else {
    const auto p = std::get<ComplexPair>(w.pair);
    j["pair"] = {{"complex", {p.re, p.im}}};
  }
  j["transform"] = matrix(c.transform());
  j["weierstrass"] = {{"A", w.A}, {"B", w.B}, {"C", w.C}};
  const auto topo = topology(c);
  j["topology"] = topo.kind == TopologyKind::Connected ? "Connected" : "TwoComponents";
  Json comps = Json::array();
  for (auto comp : topo.components) comps.push_back(component_name(comp));
  j["components"] = comps;
  j["working_equation"] = to_json(c.working_equation());
  return j;
}

PlaneCubic curve_from_json(const Json& j) {
  try {
    const double a1 = j.at("a1").get<double>();
    const Json& pair = j.at("pair");
    RootPair rp;
    if (pair.contains("real")) rp = RealPair{pair["real"].at(0).get<double>(), pair["real"].at(1).get<double>()};
    else if (pair.contains("complex"))
      rp = ComplexPair{pair["complex"].at(0).get<double>(), pair["complex"].at(1).get<double>()};
    else throw Error(ErrorCode::InvalidInput, "pair must hold \"real\" or \"complex\"");
    Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
    if (j.contains("transform")) {
      const Json& t = j["transform"];
      if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::InvalidInput, "transform must be 3x3");
      for (int r = 0; r < 3; ++r) {
        if (!t[r].is_array() || t[r].size() != 3) throw Error(ErrorCode::InvalidInput, "transform must be 3x3");
        for (int s = 0; s < 3; ++s) M(r, s) = t[r][s].get<double>();
      }
    }
    return new_weierstrass(a1, rp, M);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("curve description: ") + e.what());
  }
}

PlaneCubic load_curve(const std::string& path) { return curve_from_json(read_json_file(path)); }

Json to_json(const CurvePoint& p) {
  Json j;
  j["at_infinity"] = p.is_identity();
  if (!p.is_identity()) {
    j["wx"] = p.x();
    j["wy"] = p.y();
  }
  j["working"] = vec3(p.working());
  return j;
}

Json to_json(const Divisor& D) {
  Json entries = Json::array();
  for (const auto& e : D.entries()) {
    Json x;
    x["point"] = vec3(e.point.real());
    if (!e.real) x["imag"] = vec3(e.point.imag());
    x["mult"] = e.mult;
    x["real"] = e.real;
    entries.push_back(x);
  }
  return Json{{"degree", D.degree()}, {"totally_real", D.totally_real()}, {"entries", entries}};
}

Divisor divisor_from_json(const Json& j) {
  Divisor D;
  try {
    for (const auto& e : j.at("entries")) {
      const Eigen::VectorXd re = to_vector(e.at("point"));
      if (re.size() != 3) throw Error(ErrorCode::InvalidInput, "divisor points need 3 coordinates");
      Eigen::Vector3cd p = re.cast<std::complex<double>>();
      const bool real = e.value("real", true);
      if (e.contains("imag")) {
        const Eigen::VectorXd im = to_vector(e["imag"]);
        if (im.size() != 3) throw Error(ErrorCode::InvalidInput, "divisor points need 3 coordinates");
        for (int i = 0; i < 3; ++i) p[i] = {re[i], im[i]};
      }
      const int mult = e.value("mult", 1);
      if (mult < 1) throw Error(ErrorCode::InvalidInput, "multiplicities must be positive");
      D.add(p, mult, real);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("divisor: ") + e.what());
  }
  return D;
}

Json to_json(const TernaryForm& f) { return Json{{"degree", f.degree()}, {"coeffs", vec(f.coeffs())}}; }

TernaryForm form_from_json(const Json& j) {
  try {
    const int deg = j.at("degree").get<int>();
    const Eigen::VectorXd c = to_vector(j.at("coeffs"));
    if (deg < 0 || c.size() != (deg + 1) * (deg + 2) / 2)
      throw Error(ErrorCode::InvalidInput, "coefficient count does not match the degree");
    TernaryForm f(deg);
    f.coeffs() = c;
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("form: ") + e.what());
  }
}

QForm qform_from_json(const Json& j) { return QForm(form_from_json(j), false); }

Json to_json(const MomentFunctional& L) { return Json{{"d", L.d}, {"values", vec(L.values)}}; }

MomentFunctional functional_from_json(const Json& j, const PlaneCubic& c) {
  try {
    MomentFunctional L{c, j.at("d").get<int>(), to_vector(j.at("values"))};
    if (L.d < 1 || L.values.size() != 6 * L.d)
      throw Error(ErrorCode::InvalidInput, "a functional of level d needs 6d values");
    return L;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("functional: ") + e.what());
  }
}

Json to_json(const FaceReport& r) {
  return Json{{"is_face_divisor", r.is_face_divisor},
              {"face_dim", r.face_dim},
              {"torsion_class", torsion_name(r.torsion_class)},
              {"quadric_exists", r.quadric_exists},
              {"is_square", r.is_square}};
}

Json to_json(const ExtremeQuadric& q) {
  return Json{{"form", to_json(q.form)},
              {"nonnegative", q.nonnegative},
              {"torsion_class", torsion_name(q.torsion_class)}};
}

Json to_json(const NonnegReport& r) {
  Json j{{"nonneg", r.nonneg},
         {"even_multiplicities", r.even_multiplicities},
         {"real_zero_divisor", to_json(r.real_zero_divisor)},
         {"min_sampled_value", r.min_sampled_value},
         {"max_sampled_value", r.max_sampled_value},
         {"samples", r.samples}};
  j["witness"] = r.witness ? vec3(*r.witness) : Json();
  return j;
}

Json to_json(const Certificate& c) {
  Json atoms = Json::array();
  for (const auto& a : c.atoms) atoms.push_back(to_json(a));
  return Json{{"atoms", atoms},
              {"l_a1a2", vec3(c.l_a1a2)},
              {"l_sum_a3", vec3(c.l_sum_a3)},
              {"l_vertical", vec3(c.l_vertical)},
              {"l_t1", vec3(c.l_t1)},
              {"l_o", vec3(c.l_o)},
              {"aux_numerator", to_json(c.aux_numerator)},
              {"aux_denominator", to_json(c.aux_denominator)},
              {"p_plus_r", c.p_plus_r},
              {"p_times_r", c.p_times_r},
              {"manifestly_nonnegative", c.manifestly_nonnegative},
              {"q", to_json(c.q)},
              {"alpha", c.alpha},
              {"residual", c.residual},
              {"samples_used", c.samples_used}};
}

Json to_json(const MomentMatrixReport& r) {
  return Json{{"size", r.matrix.rows()},
              {"rank", r.rank},
              {"min_eig", r.min_eig},
              {"max_singular", r.max_singular},
              {"psd", r.psd}};
}

Json to_json(const ExtensionReport& r) {
  return Json{{"passes", r.passes()},
              {"restriction_ok", r.restriction_ok},
              {"rank_ok", r.rank_ok},
              {"psd_ok", r.psd_ok},
              {"rank_base", r.rank_base},
              {"rank_ext", r.rank_ext}};
}

Json to_json(const Decomposition& d) {
  Json atoms = Json::array();
  for (size_t i = 0; i < d.atoms.size(); ++i) {
    Json a = to_json(d.atoms[i]);
    a["weight"] = d.weights[i];
    atoms.push_back(a);
  }
  return Json{{"atoms", atoms}, {"residual", d.residual}};
}

Json to_json(const DecomposeResult& r) {
  Json j{{"success", r.success},
         {"best_residual", r.best.residual},
         {"best_start", r.best_start},
         {"starts_run", r.starts_run},
         {"best", to_json(r.best)}};
  Json seeds = Json::array();
  for (auto s : r.seeds) seeds.push_back(s);
  j["seeds"] = seeds;
  j["start_residuals"] = r.start_residuals;
  return j;
}

Json to_json(const MembershipReport& r) {
  Json j{{"member", r.member},
         {"psd", r.psd},
         {"rank", r.rank},
         {"min_eig", r.min_eig},
         {"extension_kind", extension_name(r.extension_kind)}};
  j["decomposition"] = r.decomposition ? to_json(*r.decomposition) : Json();
  if (r.certificate) {
    j["certificate"] = to_json(*r.certificate);
    j["certificate_value"] = r.certificate_value;
  }
  Json trace = Json::array();
  for (const auto& [k, res] : r.budget_trace) trace.push_back(Json{{"k", k}, {"best_residual", res}});
  j["budget_trace"] = trace;
  return j;
}

Json to_json(const CounterexampleReport& r) {
  Json atoms = Json::array();
  for (const auto& a : r.atoms) atoms.push_back(to_json(a));
  return Json{{"passes", r.passes()},
              {"functional", to_json(r.L)},
              {"atoms", atoms},
              {"q", to_json(r.q)},
              {"B", to_json(r.B)},
              {"eps", r.eps},
              {"halvings", r.halvings},
              {"q_at_B", r.q_at_B},
              {"certificate_value", r.certificate_value},
              {"degenerate", r.degenerate},
              {"k_short", to_json(r.k_short)},
              {"k_long", to_json(r.k_long)},
              {"k_short_failure_is_heuristic", true}};
}

Json to_json(const EscapeReport& r) {
  Json a = Json::array(), b = Json::array(), inf = Json::array();
  for (const auto& p : r.atoms_a) a.push_back(to_json(p));
  for (const auto& p : r.atoms_b) b.push_back(to_json(p));
  for (const auto& p : r.infinity) {
    Json x = to_json(p.point);
    x["multiplicity"] = p.multiplicity;
    inf.push_back(x);
  }
  return Json{{"passes", r.passes()},
              {"transformed_curve", to_json(r.transformed)},
              {"functional", to_json(r.L)},
              {"functional_transformed", to_json(r.L_transformed)},
              {"atoms_a", a},
              {"weights_a", r.weights_a},
              {"atoms_b", b},
              {"points_at_infinity", inf},
              {"real_points_at_infinity", r.real_points_at_infinity},
              {"infinity_margin", r.margin},
              {"redraws", r.redraws},
              {"k_short", to_json(r.k_short)},
              {"k_long", to_json(r.k_long)}};
}

Json to_json(const NoLowerSetReport& r) {
  Json tang = Json::array();
  for (const auto& p : r.tangencies) tang.push_back({p[0], p[1]});
  return Json{{"tangency_points", tang},
              {"divisor", to_json(r.divisor)},
              {"all_double", r.all_double},
              {"max_point_error", r.max_point_error},
              {"printed_quadric_nonneg", r.printed_nonneg.nonneg},
              {"negated_quadric_nonneg", r.nonneg.nonneg},
              {"kernel_dim_three_points", r.kernel_dim_three},
              {"kernel_dim_four_points", r.kernel_dim_four},
              {"kernel_gap", r.kernel_gap},
              {"same_kernel", r.same_kernel},
              {"lower_set_violated", r.lower_set_violated}};
}

Json to_json(const SexticReport& r) {
  Json real = Json::array();
  for (const auto& p : r.real_points) real.push_back(vec3(p));
  return Json{{"divisor", to_json(r.divisor)},
              {"real_points", real},
              {"real_part_doubled", r.real_part_doubled},
              {"max_point_error", r.max_point_error},
              {"complex_pair", r.complex_pair},
              {"nonneg", to_json(r.nonneg)},
              {"kernel_dim", r.kernel_dim},
              {"extreme_ray", r.extreme_ray}};
}

Json to_json(const ExperimentReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.records) trials.push_back(Json{{"atoms", t.atoms}, {"residual", t.residual}, {"rank", t.rank}});
  Json hist = Json::object();
  for (const auto& [k, n] : r.histogram) hist[std::to_string(k)] = n;
  return Json{{"topology", r.topology == TopologyKind::Connected ? "Connected" : "TwoComponents"},
              {"predicted", r.predicted},
              {"histogram", hist},
              {"unresolved", r.unresolved},
              {"pass", r.pass},
              {"trials", trials}};
}

}  // namespace cubic
