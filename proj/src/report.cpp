#include "gacl/report.hpp"

#include <cmath>
#include <stdexcept>

namespace gacl {

using nlohmann::json;

std::string to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::mlp: return "mlp";
        case PredictorKind::linear: return "linear";
        case PredictorKind::identity: return "identity";
    }
    throw std::invalid_argument("unknown predictor kind");
}

std::string to_string(LossVariant variant) {
    switch (variant) {
        case LossVariant::graphacl: return "graphacl";
        case LossVariant::smoothing: return "smoothing";
        case LossVariant::pre: return "pre";
        case LossVariant::uni: return "uni";
        case LossVariant::com: return "com";
    }
    throw std::invalid_argument("unknown loss variant");
}

PredictorKind predictor_kind_from_string(const std::string& s) {
    if (s == "mlp") return PredictorKind::mlp;
    if (s == "linear") return PredictorKind::linear;
    if (s == "identity") return PredictorKind::identity;
    throw std::invalid_argument("unknown predictor kind: " + s);
}

LossVariant loss_variant_from_string(const std::string& s) {
    if (s == "graphacl") return LossVariant::graphacl;
    if (s == "smoothing") return LossVariant::smoothing;
    if (s == "pre") return LossVariant::pre;
    if (s == "uni") return LossVariant::uni;
    if (s == "com") return LossVariant::com;
    throw std::invalid_argument("unknown loss variant: " + s);
}

json config_to_json(const TrainConfig& cfg) {
    return json{{"epochs", cfg.epochs},
                {"lr", cfg.lr},
                {"weight_decay", cfg.weight_decay},
                {"lambda", cfg.lambda},
                {"tau", cfg.tau},
                {"neg_k", cfg.neg_k},
                {"include_self_as_negative", cfg.include_self_as_negative},
                {"dim", cfg.dim},
                {"hidden_dim", cfg.hidden_dim},
                {"encoder_layers", cfg.encoder_layers},
                {"predictor", to_string(cfg.predictor)},
                {"loss", to_string(cfg.loss)},
                {"seed", cfg.seed},
                {"adam_beta1", cfg.adam_beta1},
                {"adam_beta2", cfg.adam_beta2},
                {"adam_eps", cfg.adam_eps}};
}

void apply_config_json(TrainConfig& cfg, const json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "epochs") cfg.epochs = value.get<int>();
        else if (key == "lr") cfg.lr = value.get<double>();
        else if (key == "weight_decay") cfg.weight_decay = value.get<double>();
        else if (key == "lambda") cfg.lambda = value.get<double>();
        else if (key == "tau") cfg.tau = value.get<double>();
        else if (key == "neg_k") cfg.neg_k = value.get<Index>();
        else if (key == "include_self_as_negative") cfg.include_self_as_negative = value.get<bool>();
        else if (key == "dim") cfg.dim = value.get<Index>();
        else if (key == "hidden_dim") cfg.hidden_dim = value.get<Index>();
        else if (key == "encoder_layers") cfg.encoder_layers = value.get<int>();
        else if (key == "predictor") cfg.predictor = predictor_kind_from_string(value.get<std::string>());
        else if (key == "loss") cfg.loss = loss_variant_from_string(value.get<std::string>());
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "adam_beta1") cfg.adam_beta1 = value.get<double>();
        else if (key == "adam_beta2") cfg.adam_beta2 = value.get<double>();
        else if (key == "adam_eps") cfg.adam_eps = value.get<double>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

TrainConfig config_from_json(const json& j) {
    TrainConfig cfg;
    apply_config_json(cfg, j);
    return cfg;
}

json stats_to_json(const GraphStats& stats) {
    return json{{"homophily", stats.homophily},
                {"two_hop_monophily", stats.two_hop_monophily},
                {"neighborhood_similarity", stats.neighborhood_similarity},
                {"num_nodes", stats.num_nodes},
                {"num_edges", stats.num_edges},
                {"num_classes", stats.num_classes}};
}

json eval_to_json(const EvalReport& eval) {
    return json{{"probe_accuracy", eval.probe_accuracy},
                {"probe_accuracy_std", eval.probe_accuracy_std},
                {"nmi", eval.nmi},
                {"histograms",
                 json{{"random_pairs", eval.histograms.random_pairs},
                      {"one_hop", eval.histograms.one_hop},
                      {"two_hop", eval.histograms.two_hop},
                      {"predictor_similarity", eval.histograms.predictor_similarity}}}};
}

json theory_to_json(const TheoryReport& report) {
    return json{{"loss_value", report.loss_value},
                {"bound_a1", report.bound_a1},
                {"bound_jensen", report.bound_jensen},
                {"two_hop_alignment", report.two_hop_alignment},
                {"bilipschitz", report.bilipschitz},
                {"theorem3",
                 json{{"loss_term", report.theorem3.loss_term},
                      {"monophily_term", report.theorem3.monophily_term},
                      {"bound_value", report.theorem3.bound_value},
                      {"num_classes", report.theorem3.num_classes}}},
                {"violations", report.violations}};
}

json make_report(const TrainConfig& cfg) {
    json j;
    j["tool_version"] = kToolVersion;
    j["seed"] = cfg.seed;
    j["config"] = config_to_json(cfg);
    return j;
}

void check_report_finite(const json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw std::runtime_error("metrics report contains a non-finite number");
    }
    if (j.is_object() || j.is_array()) {
        for (const auto& item : j) check_report_finite(item);
    }
}

} // namespace gacl
