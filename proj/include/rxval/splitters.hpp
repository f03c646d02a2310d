#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "rxval/fold_plan.hpp"
#include "rxval/rng.hpp"

namespace rxval {

enum class SchemeKind {
    Loocv,
    Lpocv,
    StratifiedLpocv,
    Rloocv,
    Rlpocv,
};

const char* scheme_name(SchemeKind kind);
SchemeKind parse_scheme(const std::string& name);

struct SchemeSpec {
    SchemeKind kind = SchemeKind::Loocv;
    std::size_t p = 1;  // ignored for LOOCV / RLOOCV, both fix p = 1

    std::size_t effective_p() const {
        return (kind == SchemeKind::Loocv || kind == SchemeKind::Rloocv) ? 1 : p;
    }
};

// Per-group composition arithmetic for stratified schemes, over T positives
// and F negatives with P held out per group:
//   group_count     = floor((T + F) / P)
//   t_c, f_c        = floor(T / G), floor(F / G)   guaranteed per group
//   variable        = P - (t_c + f_c)              the bias-carrying remainder
struct StratificationCounts {
    std::size_t group_count = 0;
    std::size_t t_c = 0;
    std::size_t f_c = 0;
    std::size_t variable_per_group = 0;
};

StratificationCounts stratification_counts(std::size_t positives,
                                           std::size_t negatives,
                                           std::size_t p);

// n folds; fold i tests {i}, nothing excluded.
FoldPlan loocv_plan(std::size_t n);

// A uniformly random permutation of [0, n) cut into n/p consecutive blocks.
// p must divide n.
FoldPlan lpocv_plan(std::span<const int> labels, std::size_t p, RngStream& rng);

// Best-effort class-balance-preserving groups: deal the guaranteed t_c
// positives and f_c negatives to every group, then distribute leftovers one
// per group round-robin over a shuffled group order.
FoldPlan stratified_lpocv_plan(std::span<const int> labels, std::size_t p,
                               RngStream& rng);

// For every test point, one uniformly chosen opposite-label sample is
// excluded from training, so every training fold holds exactly T-1
// positives and F-1 negatives.
FoldPlan rloocv_plan(std::span<const int> labels, RngStream& rng);

// Stratified groups plus per-fold exclusions for each variable sample
// (drawn without replacement within the fold), giving every training fold
// exactly T-p+f_c positives and F-p+t_c negatives.
FoldPlan rlpocv_plan(std::span<const int> labels, std::size_t p, RngStream& rng);

FoldPlan build_plan(const SchemeSpec& scheme, std::span<const int> labels,
                    RngStream& rng);

}  // namespace rxval
