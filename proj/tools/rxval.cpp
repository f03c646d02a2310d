// rxval: leave-P-out cross-validation planning, rebalanced variants,
// rank metrics, and a seeded simulation harness over CSV/JSON files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rxval/csv.hpp"
#include "rxval/dataset.hpp"
#include "rxval/metrics.hpp"
#include "rxval/models.hpp"
#include "rxval/simulate.hpp"
#include "rxval/splitters.hpp"

namespace {

using rxval::Error;
using rxval::ErrorKind;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
    if (given.has_value()) {
        return *given;
    }
    if (const char* env = std::getenv("RXVAL_SEED")) {
        return rxval::parse_uint(env, "RXVAL_SEED");
    }
    return 0;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    }
    return in;
}

// Writes to the path, or stdout when the path is empty.
void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw Error(ErrorKind::Io, "write to '" + path + "' failed");
    }
}

struct SplitArgs {
    std::string input;
    std::string scheme;
    std::size_t p = 1;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_split(const SplitArgs& args) {
    auto in = open_input(args.input);
    const rxval::LabeledDataset dataset = rxval::read_dataset_csv(in);
    rxval::validate_dataset(dataset);
    rxval::SchemeSpec scheme{rxval::parse_scheme(args.scheme), args.p};
    rxval::RngStream rng = rxval::derive_stream(resolve_seed(args.seed), 0, rxval::kTagPlan);
    const rxval::FoldPlan plan = rxval::build_plan(scheme, dataset.labels, rng);
    emit(args.out, rxval::plan_to_json(plan) + "\n");
    return 0;
}

struct EvaluateArgs {
    std::string input;
    std::string out;
    std::string roc_out;
    std::string pr_out;
};

int cmd_evaluate(const EvaluateArgs& args) {
    auto in = open_input(args.input);
    const rxval::PredictionFile file = rxval::read_predictions_csv(in);

    nlohmann::ordered_json root;
    root["auroc"] = rxval::auroc(file.scores, file.labels);
    root["aupr"] = rxval::aupr(file.scores, file.labels);
    root["n"] = file.scores.size();
    std::size_t t_pos = 0;
    for (int y : file.labels) {
        t_pos += static_cast<std::size_t>(y == 1);
    }
    root["t_pos"] = t_pos;
    root["t_neg"] = file.labels.size() - t_pos;
    emit(args.out, root.dump() + "\n");

    if (!args.roc_out.empty()) {
        std::ostringstream csv;
        rxval::write_roc_csv(csv, rxval::roc_curve(file.scores, file.labels));
        emit(args.roc_out, csv.str());
    }
    if (!args.pr_out.empty()) {
        std::ostringstream csv;
        rxval::write_pr_csv(csv, rxval::pr_curve(file.scores, file.labels));
        emit(args.pr_out, csv.str());
    }
    return 0;
}

struct CompareArgs {
    std::vector<std::string> a_files;
    std::vector<std::string> b_files;
    bool fisher = false;
    std::string out;
};

int cmd_compare(const CompareArgs& args) {
    if (args.a_files.size() != args.b_files.size() || args.a_files.empty()) {
        throw Error(ErrorKind::Config, "--a and --b must be given the same number of times");
    }
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    std::vector<double> p_values;
    for (std::size_t i = 0; i < args.a_files.size(); ++i) {
        auto in_a = open_input(args.a_files[i]);
        auto in_b = open_input(args.b_files[i]);
        const rxval::PredictionFile a = rxval::read_predictions_csv(in_a);
        const rxval::PredictionFile b = rxval::read_predictions_csv(in_b);
        if (a.sample_ids != b.sample_ids || a.labels != b.labels) {
            throw Error(ErrorKind::MisalignedLabels,
                        "'" + args.a_files[i] + "' and '" + args.b_files[i] +
                            "' disagree on sample_ids or labels");
        }
        const rxval::DeLongResult result = rxval::delong_compare(a.scores, b.scores, a.labels);
        nlohmann::ordered_json pair;
        pair["a"] = args.a_files[i];
        pair["b"] = args.b_files[i];
        pair["auroc_a"] = result.auroc_a;
        pair["auroc_b"] = result.auroc_b;
        pair["variance"] = result.variance;
        pair["z"] = result.test.statistic;
        pair["p_value"] = result.test.p_value;
        pairs.push_back(std::move(pair));
        p_values.push_back(result.test.p_value);
    }
    nlohmann::ordered_json root;
    root["pairs"] = std::move(pairs);
    if (args.fisher) {
        const rxval::TestResult combined = rxval::fisher_combine(p_values);
        nlohmann::ordered_json fisher;
        fisher["statistic"] = combined.statistic;
        fisher["df"] = combined.df;
        fisher["p_value"] = combined.p_value;
        root["fisher"] = std::move(fisher);
    }
    emit(args.out, root.dump() + "\n");
    return 0;
}

struct SimulateArgs {
    std::string figure;
    std::string config;
    std::vector<std::string> schemes;
    std::vector<std::size_t> p_values;
    std::vector<double> balances;
    std::vector<std::string> models;
    std::vector<double> lambdas;
    std::optional<std::size_t> replicates;
    std::optional<std::size_t> n_min;
    std::optional<std::size_t> n_features;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 0;
    std::string out;
    std::string summarize_out;
};

rxval::ExperimentGrid grid_from_json(const std::string& path) {
    auto in = open_input(path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("grid config: ") + e.what());
    }
    rxval::ExperimentGrid grid;
    try {
        for (const auto& s : root.value("schemes", nlohmann::json::array())) {
            grid.schemes.push_back(
                rxval::SchemeSpec{rxval::parse_scheme(s.get<std::string>()), 1});
        }
        if (root.contains("p_values")) {
            grid.p_values = root["p_values"].get<std::vector<std::size_t>>();
        }
        if (root.contains("balances")) {
            grid.balances = root["balances"].get<std::vector<double>>();
        }
        for (const auto& m : root.value("models", nlohmann::json::array())) {
            grid.models.push_back(rxval::PredictorSpec::parse(m.get<std::string>()));
        }
        if (root.contains("lambdas")) {
            grid.lambdas = root["lambdas"].get<std::vector<double>>();
        }
        grid.n_min = root.value("n_min", grid.n_min);
        grid.n_features = root.value("n_features", grid.n_features);
        grid.replicates = root.value("replicates", grid.replicates);
        grid.base_seed = root.value("base_seed", grid.base_seed);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("grid config: ") + e.what());
    }
    return grid;
}

int cmd_simulate(const SimulateArgs& args) {
    rxval::ExperimentGrid grid;
    if (!args.figure.empty() && !args.config.empty()) {
        throw Error(ErrorKind::Config, "--figure and --config are mutually exclusive");
    }
    if (!args.figure.empty()) {
        grid = rxval::figure_grid(args.figure);
    } else if (!args.config.empty()) {
        grid = grid_from_json(args.config);
    }
    if (!args.schemes.empty()) {
        grid.schemes.clear();
        for (const std::string& s : args.schemes) {
            grid.schemes.push_back(rxval::SchemeSpec{rxval::parse_scheme(s), 1});
        }
    }
    if (!args.p_values.empty()) {
        grid.p_values = args.p_values;
    }
    if (!args.balances.empty()) {
        grid.balances = args.balances;
    }
    if (!args.models.empty()) {
        grid.models.clear();
        for (const std::string& m : args.models) {
            grid.models.push_back(rxval::PredictorSpec::parse(m));
        }
    }
    if (!args.lambdas.empty()) {
        grid.lambdas = args.lambdas;
    }
    if (args.replicates) grid.replicates = *args.replicates;
    if (args.n_min) grid.n_min = *args.n_min;
    if (args.n_features) grid.n_features = *args.n_features;
    grid.base_seed = resolve_seed(args.seed);
    if (grid.balances.empty()) {
        for (int i = 1; i <= 9; ++i) {
            grid.balances.push_back(static_cast<double>(i) / 10.0);
        }
    }

    const std::vector<rxval::ResultRecord> records = rxval::run_grid(grid, args.jobs);
    std::size_t failed = 0;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++failed;
            std::cerr << "cell " << r.scheme << " p=" << r.p << " balance="
                      << rxval::format_double(r.balance) << " model=" << r.model
                      << " replicate=" << r.replicate << ": " << r.error << "\n";
        }
    }
    std::ostringstream csv;
    rxval::write_records_csv(csv, records);
    emit(args.out, csv.str());
    if (!args.summarize_out.empty()) {
        std::ostringstream summary;
        rxval::write_summary_csv(summary, rxval::summarize(records));
        emit(args.summarize_out, summary.str());
    }
    return 0;
}

struct ReportArgs {
    std::string input;
    std::string out;
};

int cmd_report(const ReportArgs& args) {
    auto in = open_input(args.input);
    const std::vector<rxval::ResultRecord> records = rxval::read_records_csv(in);
    const std::vector<rxval::CellSummary> summaries = rxval::summarize(records);

    if (!args.out.empty()) {
        std::ostringstream csv;
        rxval::write_summary_csv(csv, summaries);
        emit(args.out, csv.str());
    }

    std::ostringstream table;
    table << "scheme            p    balance  model                     lambda     mean    std      t        p(2s)\n";
    for (const auto& s : summaries) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-17s %-4zu %-8s %-25s %-10s %-7.4f %-7.4f %-8.3f %s\n",
                      s.scheme.c_str(), s.p, rxval::format_double(s.balance).c_str(),
                      s.model.c_str(),
                      std::isnan(s.lambda) ? "-" : rxval::format_double(s.lambda).c_str(),
                      s.mean_auroc, s.std_auroc, s.t,
                      s.degenerate ? "degenerate" : rxval::format_double(s.p_two_sided).c_str());
        table << line;
    }
    std::cout << table.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leave-P-out cross-validation fold planning, rebalanced variants, "
                 "rank metrics, and seeded simulations"};
    app.require_subcommand(1);

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "Build a fold plan from a dataset CSV");
    split->add_option("--input", split_args.input, "dataset CSV (sample_id,label,f0,...)")
        ->required();
    split->add_option("--scheme", split_args.scheme,
                      "loocv | lpocv | stratified-lpocv | rloocv | rlpocv")
        ->required();
    split->add_option("--p", split_args.p, "held-out group size for *lpocv schemes");
    split->add_option("--seed", split_args.seed, "RNG seed (default: $RXVAL_SEED or 0)");
    split->add_option("--out", split_args.out, "output path (default: stdout)");

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "Rank metrics for pooled predictions");
    evaluate->add_option("--input", evaluate_args.input, "predictions CSV (sample_id,label,score)")
        ->required();
    evaluate->add_option("--out", evaluate_args.out, "metrics JSON path (default: stdout)");
    evaluate->add_option("--roc-out", evaluate_args.roc_out, "write ROC curve CSV here");
    evaluate->add_option("--pr-out", evaluate_args.pr_out, "write PR curve CSV here");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "DeLong test between prediction files");
    compare->add_option("--a", compare_args.a_files, "first predictions CSV (repeatable)")
        ->required();
    compare->add_option("--b", compare_args.b_files, "second predictions CSV (repeatable)")
        ->required();
    compare->add_flag("--fisher", compare_args.fisher, "combine the pair p-values (Fisher)");
    compare->add_option("--out", compare_args.out, "output JSON path (default: stdout)");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment grid");
    simulate->add_option("--figure", simulate_args.figure,
                         "grid preset: 1c 2a 2b 2c 3bc 5ab s2 s5");
    simulate->add_option("--config", simulate_args.config, "grid config JSON");
    simulate->add_option("--scheme", simulate_args.schemes, "schemes (repeatable)");
    simulate->add_option("--p", simulate_args.p_values, "held-out sizes (repeatable)");
    simulate->add_option("--balances,--balance", simulate_args.balances,
                         "class balances in (0,1) (default: 0.1..0.9)");
    simulate->add_option("--model", simulate_args.models,
                         "models, e.g. negmean logistic:lambda=1 knn:k=5+zscore");
    simulate->add_option("--lambdas,--lambda", simulate_args.lambdas,
                         "expand logistic models over these L2 strengths");
    simulate->add_option("--replicates", simulate_args.replicates, "datasets per cell");
    simulate->add_option("--n-min", simulate_args.n_min, "minimum dataset size (default 250)");
    simulate->add_option("--features", simulate_args.n_features, "feature count (default 20)");
    simulate->add_option("--seed", simulate_args.seed, "base seed (default: $RXVAL_SEED or 0)");
    simulate->add_option("--jobs", simulate_args.jobs, "worker threads; 0 = all cores");
    simulate->add_option("--out", simulate_args.out, "records CSV path (default: stdout)");
    simulate->add_option("--summarize", simulate_args.summarize_out, "also write summary CSV here");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Summarize a records CSV per cell");
    report->add_option("--input", report_args.input, "records CSV")->required();
    report->add_option("--out", report_args.out, "summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*split) return cmd_split(split_args);
        if (*evaluate) return cmd_evaluate(evaluate_args);
        if (*compare) return cmd_compare(compare_args);
        if (*simulate) return cmd_simulate(simulate_args);
        if (*report) return cmd_report(report_args);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::Io ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
