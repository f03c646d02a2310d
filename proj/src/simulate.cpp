#include "rxval/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <thread>

#include "rxval/csv.hpp"
#include "rxval/metrics.hpp"

namespace rxval {

namespace {

struct Cell {
    SchemeSpec scheme;
    double balance = 0.0;
    PredictorSpec model;
};

std::vector<Cell> expand_cells(const ExperimentGrid& grid) {
    if (grid.schemes.empty()) {
        throw Error(ErrorKind::Config, "grid has no schemes");
    }
    if (grid.models.empty()) {
        throw Error(ErrorKind::Config, "grid has no models");
    }
    if (grid.balances.empty()) {
        throw Error(ErrorKind::Config, "grid has no class balances");
    }
    if (grid.replicates < 1) {
        throw Error(ErrorKind::Config, "replicates must be >= 1");
    }
    for (double b : grid.balances) {
        if (!(b > 0.0) || !(b < 1.0)) {
            throw Error(ErrorKind::Config, "balances must lie in (0, 1)");
        }
    }

    std::vector<Cell> cells;
    for (const SchemeSpec& scheme : grid.schemes) {
        // LOOCV and RLOOCV fix p = 1; other schemes sweep the p list.
        std::vector<std::size_t> ps;
        if (scheme.kind == SchemeKind::Loocv || scheme.kind == SchemeKind::Rloocv) {
            ps.push_back(1);
        } else {
            ps = grid.p_values.empty() ? std::vector<std::size_t>{scheme.p} : grid.p_values;
        }
        for (std::size_t p : ps) {
            for (double balance : grid.balances) {
                for (const PredictorSpec& model : grid.models) {
                    SchemeSpec cell_scheme{scheme.kind, p};
                    if (model.kind == ModelKind::Logistic && !grid.lambdas.empty()) {
                        for (double lambda : grid.lambdas) {
                            PredictorSpec expanded = model;
                            expanded.lambda = lambda;
                            cells.push_back(Cell{cell_scheme, balance, expanded});
                        }
                    } else {
                        cells.push_back(Cell{cell_scheme, balance, model});
                    }
                }
            }
        }
    }
    return cells;
}

std::string cell_key(const ResultRecord& r) {
    return r.scheme + '|' + std::to_string(r.p) + '|' + format_double(r.balance) + '|' +
           r.model + '|' + format_double(r.lambda);
}

}  // namespace

std::size_t adjust_n(std::size_t n_min, std::size_t p) {
    if (p < 1) {
        throw Error(ErrorKind::Config, "p must be >= 1");
    }
    return ((n_min + p - 1) / p) * p;
}

LabeledDataset generate_dataset(std::size_t n, std::size_t d, double balance,
                                RngStream& rng) {
    if (!(balance > 0.0) || !(balance < 1.0)) {
        throw Error(ErrorKind::DegenerateBalance, "balance must lie in (0, 1)");
    }
    const std::size_t positives =
        static_cast<std::size_t>(std::floor(balance * static_cast<double>(n) + 0.5));
    if (positives < 1 || positives > n - 1) {
        throw Error(ErrorKind::DegenerateBalance,
                    "round(balance*n) = " + std::to_string(positives) +
                        " leaves a class empty at n = " + std::to_string(n));
    }

    LabeledDataset dataset;
    dataset.labels.assign(n, 0);
    for (std::size_t i = 0; i < positives; ++i) {
        dataset.labels[i] = 1;
    }
    rng.shuffle(dataset.labels);

    dataset.features = Matrix::zeros(n, d);
    for (double& v : dataset.features.values) {
        v = rng.next_double();
    }
    dataset.sample_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        dataset.sample_ids.push_back("s" + std::to_string(i));
    }
    return dataset;
}

PredictionSet cross_validate(const LabeledDataset& dataset, const FoldPlan& plan,
                             const PredictorSpec& spec) {
    if (plan.n != dataset.size()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "plan is for n=" + std::to_string(plan.n) + ", dataset has " +
                        std::to_string(dataset.size()));
    }
    PredictionSet predictions;
    predictions.entries.reserve(dataset.size());
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const Fold& fold = plan.folds[f];
        try {
            const auto train_idx = fold.train_indices(plan.n);
            if (train_idx.empty()) {
                throw Error(ErrorKind::EmptyTrainingSet, "no training samples");
            }
            const LabeledDataset train = subset_rows(dataset, train_idx);
            const LabeledDataset test = subset_rows(dataset, fold.test_indices);
            const FittedModel model = fit(spec, train);
            const std::vector<double> scores =
                spec.posthoc_zscore ? posthoc_standardize(model, train, test.features)
                                    : predict(model, test.features);
            for (std::size_t i = 0; i < fold.test_indices.size(); ++i) {
                if (!std::isfinite(scores[i])) {
                    throw Error(ErrorKind::NonConvergence, "non-finite prediction");
                }
                predictions.entries.push_back(
                    PredictionEntry{fold.test_indices[i], scores[i],
                                    dataset.labels[fold.test_indices[i]]});
            }
        } catch (const Error& e) {
            throw Error(e.kind(), "fold " + std::to_string(f) + ": " + e.message());
        }
    }
    std::sort(predictions.entries.begin(), predictions.entries.end(),
              [](const PredictionEntry& a, const PredictionEntry& b) {
                  return a.sample_index < b.sample_index;
              });
    return predictions;
}

std::vector<ResultRecord> run_grid(const ExperimentGrid& grid, unsigned jobs) {
    const std::vector<Cell> cells = expand_cells(grid);
    const std::size_t total = cells.size() * grid.replicates;
    std::vector<ResultRecord> records(total);

    auto run_task = [&](std::size_t task) {
        const Cell& cell = cells[task / grid.replicates];
        const std::size_t replicate = task % grid.replicates;
        ResultRecord& record = records[task];
        record.scheme = scheme_name(cell.scheme.kind);
        record.p = cell.scheme.effective_p();
        record.balance = cell.balance;
        record.model = cell.model.family();
        record.lambda = (cell.model.kind == ModelKind::Logistic)
                            ? cell.model.lambda
                            : std::nan("");
        record.replicate = replicate;
        record.seed = derived_seed(grid.base_seed, replicate, kTagData);
        record.auroc = std::nan("");
        record.aupr = std::nan("");
        try {
            const std::size_t n = adjust_n(grid.n_min, cell.scheme.effective_p());
            record.n = n;
            RngStream data_rng = derive_stream(grid.base_seed, replicate, kTagData);
            const LabeledDataset dataset =
                generate_dataset(n, grid.n_features, cell.balance, data_rng);
            RngStream plan_rng = derive_stream(grid.base_seed, replicate, kTagPlan);
            const FoldPlan plan = build_plan(cell.scheme, dataset.labels, plan_rng);
            const PredictionSet predictions = cross_validate(dataset, plan, cell.model);
            record.auroc = auroc(predictions);
            record.aupr = aupr(predictions);
        } catch (const Error& e) {
            record.error = e.name();
        } catch (const std::exception& e) {
            record.error = e.what();
        }
    };

    unsigned workers = jobs ? jobs : std::thread::hardware_concurrency();
    if (workers < 1) {
        workers = 1;
    }
    if (workers == 1 || total <= 1) {
        for (std::size_t task = 0; task < total; ++task) {
            run_task(task);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t task = next.fetch_add(1);
                if (task >= total) {
                    return;
                }
                run_task(task);
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return records;
}

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const ResultRecord*>> groups;
    for (const ResultRecord& record : records) {
        if (!record.error.empty() || std::isnan(record.auroc)) {
            continue;
        }
        const std::string key = cell_key(record);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        it->second.push_back(&record);
    }

    std::vector<CellSummary> summaries;
    summaries.reserve(order.size());
    for (const std::string& key : order) {
        const auto& rows = groups[key];
        CellSummary s;
        s.scheme = rows[0]->scheme;
        s.p = rows[0]->p;
        s.balance = rows[0]->balance;
        s.model = rows[0]->model;
        s.lambda = rows[0]->lambda;
        s.n_reps = rows.size();

        std::vector<double> values;
        values.reserve(rows.size());
        for (const ResultRecord* r : rows) {
            values.push_back(r->auroc);
        }
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(values.size());
        s.mean_auroc = mean;
        if (values.size() >= 2) {
            double ss = 0.0;
            for (double v : values) {
                ss += (v - mean) * (v - mean);
            }
            s.std_auroc = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        try {
            const TestResult two_sided = t_test_one_sample(values, 0.5, Alternative::TwoSided);
            s.t = two_sided.statistic;
            s.p_two_sided = two_sided.p_value;
            s.p_less = t_test_one_sample(values, 0.5, Alternative::Less).p_value;
        } catch (const Error&) {
            s.degenerate = true;
            s.t = std::nan("");
            s.p_two_sided = std::nan("");
            s.p_less = std::nan("");
        }
        summaries.push_back(std::move(s));
    }
    return summaries;
}

ExperimentGrid figure_grid(const std::string& name) {
    auto nine_balances = []() {
        std::vector<double> out;
        for (int i = 1; i <= 9; ++i) {
            out.push_back(static_cast<double>(i) / 10.0);
        }
        return out;
    };
    auto thirteen_lambdas = []() {
        std::vector<double> out;
        for (int e = -6; e <= 6; ++e) {
            out.push_back(std::pow(10.0, e));
        }
        return out;
    };

    ExperimentGrid grid;
    grid.balances = nine_balances();
    if (name == "1c") {
        grid.schemes = {SchemeSpec{SchemeKind::Lpocv, 1}};
        grid.p_values = {1, 2, 4, 5, 10, 25, 100};
        grid.models = {PredictorSpec::parse("negmean")};
    } else if (name == "2a") {
        grid.schemes = {SchemeSpec{SchemeKind::Loocv, 1}};
        grid.p_values = {1};
        grid.models = {PredictorSpec::parse("logistic:lambda=1")};
    } else if (name == "2b") {
        grid.schemes = {SchemeSpec{SchemeKind::StratifiedLpocv, 5}};
        grid.p_values = {5};
        grid.models = {PredictorSpec::parse("logistic:lambda=1")};
    } else if (name == "2c") {
        grid.schemes = {SchemeSpec{SchemeKind::StratifiedLpocv, 1}};
        grid.p_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        grid.models = {PredictorSpec::parse("logistic:lambda=1")};
    } else if (name == "3bc") {
        grid.schemes = {SchemeSpec{SchemeKind::Rloocv, 1}};
        grid.p_values = {1};
        grid.models = {PredictorSpec::parse("negmean"),
                       PredictorSpec::parse("logistic:lambda=1")};
    } else if (name == "5ab") {
        grid.schemes = {SchemeSpec{SchemeKind::Loocv, 1}, SchemeSpec{SchemeKind::Rloocv, 1}};
        grid.p_values = {1};
        grid.models = {PredictorSpec::parse("logistic")};
        grid.lambdas = thirteen_lambdas();
    } else if (name == "s2") {
        grid.schemes = {SchemeSpec{SchemeKind::Loocv, 1}, SchemeSpec{SchemeKind::Lpocv, 4}};
        grid.p_values = {4};
        grid.balances = {0.1, 0.5, 0.9};
        grid.models = {PredictorSpec::parse("negmean"), PredictorSpec::parse("mean")};
    } else if (name == "s5") {
        grid.schemes = {SchemeSpec{SchemeKind::Loocv, 1}};
        grid.p_values = {1};
        grid.models = {PredictorSpec::parse("logistic:lambda=1+zscore"),
                       PredictorSpec::parse("knn:k=1+zscore")};
    } else {
        throw Error(ErrorKind::Config, "unknown figure preset '" + name + "'");
    }
    return grid;
}

std::vector<std::string> figure_names() {
    return {"1c", "2a", "2b", "2c", "3bc", "5ab", "s2", "s5"};
}

void write_records_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
    out << "scheme,p,balance,model,lambda,replicate,seed,n,auroc,aupr\n";
    for (const ResultRecord& r : records) {
        out << r.scheme << ',' << r.p << ',' << format_double(r.balance) << ',' << r.model
            << ',' << (std::isnan(r.lambda) ? "" : format_double(r.lambda)) << ','
            << r.replicate << ',' << r.seed << ',' << r.n << ','
            << (r.error.empty() ? format_double(r.auroc) : "") << ','
            << (r.error.empty() ? format_double(r.aupr) : "") << '\n';
    }
}

std::vector<ResultRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::Config, "records CSV is empty");
    }
    const auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"scheme", "p",    "balance",   "model", "lambda",
                                               "replicate", "seed", "n", "auroc", "aupr"};
    if (header != expected) {
        throw Error(ErrorKind::Config, "records CSV has an unexpected header");
    }
    std::vector<ResultRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string context = "records CSV line " + std::to_string(line_no);
        if (fields.size() != expected.size()) {
            throw Error(ErrorKind::ShapeMismatch, context + ": wrong field count");
        }
        ResultRecord r;
        r.scheme = fields[0];
        r.p = static_cast<std::size_t>(parse_int(fields[1], context));
        r.balance = parse_double(fields[2], context);
        r.model = fields[3];
        r.lambda = fields[4].empty() ? std::nan("") : parse_double(fields[4], context);
        r.replicate = static_cast<std::size_t>(parse_int(fields[5], context));
        r.seed = parse_uint(fields[6], context);
        r.n = static_cast<std::size_t>(parse_int(fields[7], context));
        if (fields[8].empty() || fields[9].empty()) {
            r.auroc = std::nan("");
            r.aupr = std::nan("");
            r.error = "unavailable";
        } else {
            r.auroc = parse_double(fields[8], context);
            r.aupr = parse_double(fields[9], context);
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summaries) {
    out << "scheme,p,balance,model,lambda,mean_auroc,std_auroc,t,p_two_sided,p_less,n_reps\n";
    for (const CellSummary& s : summaries) {
        out << s.scheme << ',' << s.p << ',' << format_double(s.balance) << ',' << s.model
            << ',' << (std::isnan(s.lambda) ? "" : format_double(s.lambda)) << ','
            << format_double(s.mean_auroc) << ',' << format_double(s.std_auroc) << ','
            << format_double(s.t) << ',' << format_double(s.p_two_sided) << ','
            << format_double(s.p_less) << ',' << s.n_reps << '\n';
    }
}

}  // namespace rxval
