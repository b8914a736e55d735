#pragma once

#include "gacl/metrics.hpp"
#include "gacl/theory.hpp"
#include "gacl/trainer.hpp"

#include <json.hpp>

#include <string>

namespace gacl {

inline constexpr const char* kToolVersion = "gacl 1.0.0";

std::string to_string(PredictorKind kind);
std::string to_string(LossVariant variant);
PredictorKind predictor_kind_from_string(const std::string& s);
LossVariant loss_variant_from_string(const std::string& s);

/// Config JSON keys mirror the TrainConfig field names exactly.
nlohmann::json config_to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const nlohmann::json& j);
/// Overlays keys present in j onto cfg; unknown keys are an error.
void apply_config_json(TrainConfig& cfg, const nlohmann::json& j);

nlohmann::json stats_to_json(const GraphStats& stats);
nlohmann::json eval_to_json(const EvalReport& eval);
nlohmann::json theory_to_json(const TheoryReport& report);

/// Top-level MetricsReport skeleton: tool version, seed, config echo.
/// Sections (graph_stats, loss_curve, eval, theory, timings) are attached by
/// the caller as they are produced. Throws if any number is non-finite.
nlohmann::json make_report(const TrainConfig& cfg);
void check_report_finite(const nlohmann::json& j);

} // namespace gacl
