#include "gacl/dataset.hpp"
#include "gacl/report.hpp"
#include "gacl/rng.hpp"
#include "gacl/synthetic.hpp"
#include "gacl/theory.hpp"
#include "gacl/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using nlohmann::json;
using namespace gacl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitTheoryViolation = 4;

struct TheoryViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

int cmd_stats(const std::string& dir) {
    const Dataset data = load_dataset(dir);
    json j = stats_to_json(graph_stats(data.graph));
    check_report_finite(j);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, std::uint64_t seed, const std::string& out_dir) {
    SyntheticData data = generate_synthetic(spec, seed);
    Dataset ds;
    ds.graph = std::move(data.graph);
    ds.features = std::move(data.features);
    ds.splits = make_stratified_splits(ds.graph.labels, 0.1, 0.1, mix_seed(seed, 0x5B17));
    ds.name = "synthetic";
    save_dataset(ds, out_dir);
    std::cerr << "wrote synthetic dataset (" << ds.graph.num_nodes << " nodes, "
              << ds.graph.num_edges() << " edges) to " << out_dir << "\n";
    return kExitOk;
}

int cmd_train(const std::string& dir, const TrainConfig& cfg, const std::string& out_dir) {
    const Dataset data = load_dataset(dir);
    std::cerr << "training on " << data.name << ": " << data.graph.num_nodes << " nodes, "
              << data.graph.num_edges() << " edges, " << cfg.epochs << " epochs\n";
    TrainResult result = train(data.graph, data.features, cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);
    write_embeddings(out / "embeddings.bin", result.embeddings);
    write_checkpoint(out / "checkpoint.bin", result.state);

    json report = make_report(cfg);
    report["dataset"] = data.name;
    report["graph_stats"] = stats_to_json(graph_stats(data.graph));
    report["loss_curve"] = result.loss_curve;
    report["timings"] = json{{"train_seconds", result.seconds}};
    check_report_finite(report);
    write_json_file(out / "metrics.json", report);
    std::cout << json{{"final_loss", result.loss_curve.back()},
                      {"out", out_dir}}
                     .dump(2)
              << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& dir, const std::string& embeddings_path, const std::string& out_dir,
             Index random_pairs, std::uint64_t seed) {
    const Dataset data = load_dataset(dir);
    const DenseMatrix emb = read_embeddings(embeddings_path);
    if (emb.rows != data.graph.num_nodes) {
        throw DataError("embeddings have " + std::to_string(emb.rows) + " rows for " +
                        std::to_string(data.graph.num_nodes) + " nodes");
    }
    EvalReport eval;
    ProbeConfig probe_cfg;
    probe_cfg.seed = seed;
    const ProbeResult probe =
        linear_probe(emb, data.graph.labels, data.graph.num_classes, data.splits, probe_cfg);
    eval.probe_accuracy = probe.accuracy_mean;
    eval.probe_accuracy_std = probe.accuracy_std;
    eval.nmi = kmeans_nmi(emb, data.graph.labels, data.graph.num_classes, mix_seed(seed, 0xC1));
    eval.histograms = similarity_histograms(emb, data.graph, random_pairs, mix_seed(seed, 0x41));

    json report;
    report["tool_version"] = kToolVersion;
    report["dataset"] = data.name;
    report["seed"] = seed;
    report["graph_stats"] = stats_to_json(graph_stats(data.graph));
    report["eval"] = eval_to_json(eval);
    check_report_finite(report);
    std::filesystem::create_directories(out_dir);
    write_json_file(std::filesystem::path(out_dir) / "metrics.json", report);
    std::cout << json{{"probe_accuracy", eval.probe_accuracy}, {"nmi", eval.nmi}}.dump(2) << "\n";
    return kExitOk;
}

// Random-instance property trials of the provable inequalities.
TheoryReport run_theory_trials(int trials, std::uint64_t seed) {
    TheoryReport report;
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        const Index n = 6 + static_cast<Index>(rng.uniform_index(10));
        const Index d = 4 + static_cast<Index>(rng.uniform_index(12));

        EdgeList edges;
        for (Index i = 0; i < n; ++i) {
            for (Index j = i + 1; j < n; ++j) {
                if (rng.bernoulli(0.4)) edges.emplace_back(i, j);
            }
        }
        edges.emplace_back(0, n - 1);
        const Graph g = build_graph(edges, n);

        auto random_unit = [&](Index rows) {
            DenseMatrix m(rows, d);
            for (double& x : m.data) x = rng.normal();
            return l2_normalize_rows(m);
        };
        const DenseMatrix p = random_unit(n);
        const DenseMatrix u = random_unit(n);
        const DenseMatrix v = random_unit(n);

        LossConfig cfg;
        cfg.tau = 0.25 + 0.75 * rng.uniform();
        cfg.k = (t % 2 == 0) ? 0 : 4 + static_cast<Index>(rng.uniform_index(8));
        IndexMatrix negatives;
        if (cfg.k > 0) negatives = sample_negatives(n, cfg.k, n, mix_seed(seed, 7000 + t));

        const BoundCheck logsum = check_logsum_bound(g, p, u, v, negatives, cfg);
        if (!logsum.pass) {
            report.violations.push_back("logsum bound violated at trial " + std::to_string(t));
        }
        const JensenCheck jensen = check_jensen_bound(v, negatives, cfg);
        if (!jensen.pass) {
            report.violations.push_back("jensen bound violated at trial " + std::to_string(t));
        }
        // positivity floor: with self among the negatives the mass exceeds e^{1/tau}
        if (cfg.k == 0 && cfg.include_self_as_negative) {
            const double floor = std::exp(1.0 / cfg.tau);
            for (Index i = 0; i < n; ++i) {
                double s = 0.0;
                for (Index j = 0; j < n; ++j) s += std::exp(dot_rows(v, i, v, j) / cfg.tau);
                if (!(s > floor)) {
                    report.violations.push_back("positivity floor violated at trial " + std::to_string(t));
                    break;
                }
            }
        }
        if (t == 0) {
            report.loss_value = logsum.loss;
            report.bound_a1 = logsum.bound;
            report.bound_jensen = jensen.rhs;
        }
    }

    // bi-Lipschitz probes on random linear predictors
    Rng rng(mix_seed(seed, 0xB117));
    for (int t = 0; t < 10; ++t) {
        PredictorParams pred = PredictorParams::make(PredictorKind::linear, 8, rng.raw());
        const double L = estimate_bilipschitz(pred);
        if (t == 0) report.bilipschitz = L;
        const DenseMatrix& w = pred.weights.front().value;
        for (int probe = 0; probe < 100; ++probe) {
            DenseMatrix pair(2, 8);
            for (double& x : pair.data) x = rng.normal();
            DenseMatrix mapped = matmul(pair, w);
            double in_sq = 0.0, out_sq = 0.0;
            for (Index c = 0; c < 8; ++c) {
                const double di = pair.at(0, c) - pair.at(1, c);
                const double dm = mapped.at(0, c) - mapped.at(1, c);
                in_sq += di * di;
                out_sq += dm * dm;
            }
            if (out_sq < in_sq / L - 1e-9) {
                report.violations.push_back("bi-Lipschitz probe violated at trial " + std::to_string(t));
                break;
            }
        }
    }
    return report;
}

int cmd_check(const std::string& dir, const std::optional<std::string>& embeddings_path, int trials,
              std::uint64_t seed) {
    const Dataset data = load_dataset(dir);
    TheoryReport report = run_theory_trials(trials, seed);

    if (embeddings_path) {
        const DenseMatrix emb = read_embeddings(*embeddings_path);
        if (emb.rows != data.graph.num_nodes) {
            throw DataError("embeddings row count does not match the dataset");
        }
        report.two_hop_alignment = two_hop_alignment(emb, data.graph);
        // identity-view diagnostic: embeddings stand in for P, U and V; the
        // identity map has bi-Lipschitz constant 1
        LossConfig cfg;
        cfg.k = 0;
        const IndexMatrix none;
        const BoundCheck logsum = check_logsum_bound(data.graph, emb, emb, emb, none, cfg);
        report.loss_value = logsum.loss;
        report.bound_a1 = logsum.bound;
        if (!logsum.pass) report.violations.push_back("logsum bound violated on embeddings");
        report.theorem3 = theorem3_report(logsum.loss, 1.0, two_hop_monophily(data.graph),
                                          data.graph.num_classes);
    }

    json j;
    j["tool_version"] = kToolVersion;
    j["dataset"] = data.name;
    j["trials"] = trials;
    j["theory"] = theory_to_json(report);
    check_report_finite(j);
    std::cout << j.dump(2) << "\n";
    if (!report.violations.empty()) {
        throw TheoryViolation(report.violations.front());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymmetric contrastive learning for node representations"};
    app.require_subcommand(1);

    std::string dir, out_dir = ".", embeddings_path, config_path;
    std::uint64_t seed = 1;

    auto* stats = app.add_subcommand("stats", "print graph statistics as JSON");
    stats->add_option("dir", dir, "dataset directory")->required();

    auto* synth = app.add_subcommand("synth", "write a synthetic dataset");
    SyntheticSpec spec;
    std::string kind = "homophilic-sbm";
    synth->add_option("--kind", kind, "homophilic-sbm | heterophilic-bipartite-monophily");
    synth->add_option("--nodes", spec.num_nodes, "number of nodes");
    synth->add_option("--classes", spec.num_classes, "number of classes");
    synth->add_option("--p-in", spec.p_in, "within-class edge probability");
    synth->add_option("--p-out", spec.p_out, "cross-class edge probability");
    synth->add_option("--feature-dim", spec.feature_dim, "feature dimension");
    synth->add_option("--noise", spec.feature_noise, "feature noise scale");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out", out_dir, "output directory")->required();

    auto* train_cmd = app.add_subcommand("train", "train and write embeddings + metrics");
    train_cmd->add_option("dir", dir, "dataset directory")->required();
    train_cmd->add_option("--config", config_path, "JSON config file");
    train_cmd->add_option("--out", out_dir, "output directory");
    // flag overrides, applied on top of the config file
    std::optional<std::uint64_t> f_seed;
    std::optional<int> f_epochs;
    std::optional<Index> f_dim, f_negk;
    std::optional<double> f_tau, f_lambda, f_lr, f_wd;
    std::optional<std::string> f_loss, f_predictor;
    train_cmd->add_option("--seed", f_seed, "training seed");
    train_cmd->add_option("--epochs", f_epochs, "training epochs");
    train_cmd->add_option("--dim", f_dim, "representation dimension");
    train_cmd->add_option("--tau", f_tau, "softmax temperature");
    train_cmd->add_option("--lambda", f_lambda, "EMA decay");
    train_cmd->add_option("--neg-k", f_negk, "negatives per anchor (0 = all nodes)");
    train_cmd->add_option("--lr", f_lr, "learning rate");
    train_cmd->add_option("--weight-decay", f_wd, "weight decay");
    train_cmd->add_option("--loss", f_loss, "graphacl | smoothing | pre | uni | com");
    train_cmd->add_option("--predictor", f_predictor, "mlp | linear | identity");

    auto* eval_cmd = app.add_subcommand("eval", "linear probe, clustering NMI, histograms");
    eval_cmd->add_option("dir", dir, "dataset directory")->required();
    eval_cmd->add_option("--embeddings", embeddings_path, "embeddings.bin path")->required();
    eval_cmd->add_option("--out", out_dir, "output directory");
    Index random_pairs = 10000;
    eval_cmd->add_option("--random-pairs", random_pairs, "random pair sample size");
    eval_cmd->add_option("--seed", seed, "evaluation seed");

    auto* check_cmd = app.add_subcommand("check", "verify provable inequalities");
    check_cmd->add_option("dir", dir, "dataset directory")->required();
    std::optional<std::string> check_embeddings;
    check_cmd->add_option("--embeddings", check_embeddings, "embeddings.bin path");
    int trials = 100;
    check_cmd->add_option("--trials", trials, "number of random instances");
    check_cmd->add_option("--seed", seed, "trial seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (stats->parsed()) return cmd_stats(dir);
        if (synth->parsed()) {
            if (kind == "homophilic-sbm") spec.kind = SyntheticKind::homophilic_sbm;
            else if (kind == "heterophilic-bipartite-monophily")
                spec.kind = SyntheticKind::heterophilic_bipartite_monophily;
            else throw std::invalid_argument("unknown synthetic kind: " + kind);
            return cmd_synth(spec, seed, out_dir);
        }
        if (train_cmd->parsed()) {
            TrainConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw DataError("cannot open config " + config_path);
                json j;
                try {
                    in >> j;
                } catch (const json::exception& e) {
                    throw DataError(config_path + ": " + e.what());
                }
                apply_config_json(cfg, j);
            }
            if (f_seed) cfg.seed = *f_seed;
            if (f_epochs) cfg.epochs = *f_epochs;
            if (f_dim) cfg.dim = *f_dim;
            if (f_tau) cfg.tau = *f_tau;
            if (f_lambda) cfg.lambda = *f_lambda;
            if (f_negk) cfg.neg_k = *f_negk;
            if (f_lr) cfg.lr = *f_lr;
            if (f_wd) cfg.weight_decay = *f_wd;
            if (f_loss) cfg.loss = loss_variant_from_string(*f_loss);
            if (f_predictor) cfg.predictor = predictor_kind_from_string(*f_predictor);
            validate(cfg);
            return cmd_train(dir, cfg, out_dir);
        }
        if (eval_cmd->parsed()) return cmd_eval(dir, embeddings_path, out_dir, random_pairs, seed);
        if (check_cmd->parsed()) return cmd_check(dir, check_embeddings, trials, seed);
    } catch (const TheoryViolation& e) {
        std::cerr << "theory violation: " << e.what() << "\n";
        return kExitTheoryViolation;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
