#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "netsel/features.hpp"
#include "netsel/inference.hpp"
#include "netsel/model_spec.hpp"
#include "netsel/workflows.hpp"

namespace netsel {

using json = nlohmann::json;

// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
json number_to_json(double x);
double number_from_json(const json& j);

json to_json(const ParamPrior& prior);
ParamPrior prior_from_json(const json& j);

json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const json& j);
ModelSpec parse_model_spec(std::string_view text);

json to_json(const FeatureKind& kind);
/// Accepts a token string or {"kind": token, "d_min": .., "k_max": ..}.
FeatureKind feature_kind_from_json(const json& j);

json to_json(const FeatureValue& value);
FeatureValue feature_value_from_json(const json& j);

json to_json(const Loss& loss);
Loss loss_from_json(const json& j);

json to_json(const ComparisonReport& report);
ComparisonReport comparison_report_from_json(const json& j);
std::string comparison_report_csv(const ComparisonReport& report);

json to_json(const ElicitReport& report);
std::string elicit_report_csv(const ElicitReport& report);

json to_json(const StudyResult& result);

json to_json(const InferReport& report);
std::string infer_report_csv(const InferReport& report);

CompareConfig compare_config_from_json(const json& j);
ElicitConfig elicit_config_from_json(const json& j);
StudyConfig study_config_from_json(const json& j);
InferConfig infer_config_from_json(const json& j);

/// Shortest round-trip decimal text for x ("inf"/"-inf"/"nan" when not finite).
std::string format_number(double x);

/// Wraps nlohmann parse errors as ParseError.
json parse_json(std::string_view text);

}  // namespace netsel
