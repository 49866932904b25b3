#pragma once

#include <json.hpp>
#include <string>

#include "cubic/constructions.hpp"
#include "cubic/decompose.hpp"
#include "cubic/experiment.hpp"
#include "cubic/fixtures.hpp"

namespace cubic {

using Json = nlohmann::ordered_json;

Json to_json(const PlaneCubic& c);
PlaneCubic curve_from_json(const Json& j);
PlaneCubic load_curve(const std::string& path);

Json to_json(const CurvePoint& p);
Json to_json(const Divisor& D);
Divisor divisor_from_json(const Json& j);

Json to_json(const TernaryForm& f);
TernaryForm form_from_json(const Json& j);
QForm qform_from_json(const Json& j);

Json to_json(const MomentFunctional& L);
MomentFunctional functional_from_json(const Json& j, const PlaneCubic& c);

Json to_json(const FaceReport& r);
Json to_json(const ExtremeQuadric& q);
Json to_json(const NonnegReport& r);
Json to_json(const Certificate& cert);
Json to_json(const MomentMatrixReport& r);
Json to_json(const ExtensionReport& r);
Json to_json(const Decomposition& d);
Json to_json(const DecomposeResult& r);
Json to_json(const MembershipReport& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const EscapeReport& r);
Json to_json(const NoLowerSetReport& r);
Json to_json(const SexticReport& r);
// per-trial wall times are left out so that the document is reproducible
Json to_json(const ExperimentReport& r);

Json read_json_file(const std::string& path);

}  // namespace cubic
