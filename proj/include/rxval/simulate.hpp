#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rxval/dataset.hpp"
#include "rxval/fold_plan.hpp"
#include "rxval/models.hpp"
#include "rxval/rng.hpp"
#include "rxval/splitters.hpp"

namespace rxval {

// One simulation grid: cells are scheme x p x balance x model (x lambda),
// each run for `replicates` seeded datasets.
struct ExperimentGrid {
    std::vector<SchemeSpec> schemes;
    std::vector<std::size_t> p_values{1};
    std::vector<double> balances;
    std::vector<PredictorSpec> models;
    std::vector<double> lambdas;  // expands every Logistic model when set
    std::size_t n_min = 250;
    std::size_t n_features = 20;
    std::size_t replicates = 100;
    std::uint64_t base_seed = 0;
};

// One row per (cell, replicate). `seed` is the derived dataset-stream seed,
// which identifies the replicate's data independently of the cell. Failed
// cells carry the error name and NaN metrics.
struct ResultRecord {
    std::string scheme;
    std::size_t p = 1;
    double balance = 0.0;
    std::string model;
    double lambda = 0.0;  // NaN when not applicable
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double auroc = 0.0;
    double aupr = 0.0;
    std::string error;  // empty on success
};

struct CellSummary {
    std::string scheme;
    std::size_t p = 1;
    double balance = 0.0;
    std::string model;
    double lambda = 0.0;
    std::size_t n_reps = 0;
    double mean_auroc = 0.0;
    double std_auroc = 0.0;
    double t = 0.0;            // one-sample t vs 0.5
    double p_two_sided = 1.0;
    double p_less = 1.0;
    bool degenerate = false;   // zero variance or < 2 replicates
};

// Smallest n >= n_min divisible by p.
std::size_t adjust_n(std::size_t n_min, std::size_t p);

// Exactly round(balance * n) positive labels (half-up) at shuffled
// positions; features i.i.d. Uniform[0,1], drawn row-major after the
// label shuffle.
LabeledDataset generate_dataset(std::size_t n, std::size_t d, double balance,
                                RngStream& rng);

// Fit on each fold's training rows, score its test rows (z-scoring per
// fold when the spec asks), pool everything into one PredictionSet ordered
// by sample index.
PredictionSet cross_validate(const LabeledDataset& dataset, const FoldPlan& plan,
                             const PredictorSpec& spec);

// Runs every cell x replicate. Output order is (cell, replicate) no matter
// how many workers run; jobs = 0 means hardware concurrency. Cell failures
// become error records, never aborts.
std::vector<ResultRecord> run_grid(const ExperimentGrid& grid, unsigned jobs = 0);

// Per-cell mean / sample std (n-1) and one-sample t-tests vs 0.5, in first-
// appearance order. Error records are skipped.
std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records);

// The exact grids behind the synthetic figures:
//   1c 2a 2b 2c 3bc 5ab s2 s5
ExperimentGrid figure_grid(const std::string& name);
std::vector<std::string> figure_names();

// Records CSV: scheme,p,balance,model,lambda,replicate,seed,n,auroc,aupr
void write_records_csv(std::ostream& out, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> read_records_csv(std::istream& in);

// Summary CSV: scheme,p,balance,model,lambda,mean_auroc,std_auroc,t,
//              p_two_sided,p_less,n_reps
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summaries);

}  // namespace rxval
