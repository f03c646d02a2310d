#include "rxval/splitters.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace rxval {

namespace {

struct ClassSplit {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
};

ClassSplit split_by_class(std::span<const int> labels) {
    ClassSplit out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            out.positives.push_back(i);
        } else {
            out.negatives.push_back(i);
        }
    }
    return out;
}

void require_divisible(std::size_t n, std::size_t p) {
    if (p < 1) {
        throw Error(ErrorKind::Config, "p must be >= 1");
    }
    if (n % p != 0) {
        throw Error(ErrorKind::IndivisibleFold,
                    "p=" + std::to_string(p) + " does not divide n=" + std::to_string(n));
    }
}

// Group construction shared by the stratified and rebalanced-stratified
// schemes: returns each group's test indices plus which of them are the
// "variable" samples beyond the guaranteed t_c + f_c.
struct StratifiedGroups {
    StratificationCounts counts;
    std::vector<std::vector<std::size_t>> tests;
    std::vector<std::vector<std::size_t>> variable;
};

StratifiedGroups build_stratified_groups(std::span<const int> labels, std::size_t p,
                                         RngStream& rng) {
    const std::size_t n = labels.size();
    require_divisible(n, p);
    const std::size_t groups = n / p;
    if (groups < 2) {
        throw Error(ErrorKind::TooFewSamples,
                    "need at least 2 groups, got " + std::to_string(groups));
    }

    ClassSplit classes = split_by_class(labels);
    StratifiedGroups out;
    out.counts = stratification_counts(classes.positives.size(), classes.negatives.size(), p);
    const StratificationCounts& c = out.counts;

    rng.shuffle(classes.positives);
    rng.shuffle(classes.negatives);

    out.tests.assign(groups, {});
    out.variable.assign(groups, {});
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t i = 0; i < c.t_c; ++i) {
            out.tests[g].push_back(classes.positives[g * c.t_c + i]);
        }
        for (std::size_t i = 0; i < c.f_c; ++i) {
            out.tests[g].push_back(classes.negatives[g * c.f_c + i]);
        }
    }

    // Leftovers (fewer than one per group from each class) go one at a time
    // to groups in a shuffled round-robin order, positives first.
    std::vector<std::size_t> leftovers;
    leftovers.insert(leftovers.end(), classes.positives.begin() + groups * c.t_c,
                     classes.positives.end());
    leftovers.insert(leftovers.end(), classes.negatives.begin() + groups * c.f_c,
                     classes.negatives.end());
    std::vector<std::size_t> group_order(groups);
    std::iota(group_order.begin(), group_order.end(), 0);
    rng.shuffle(group_order);
    for (std::size_t i = 0; i < leftovers.size(); ++i) {
        const std::size_t g = group_order[i % groups];
        out.tests[g].push_back(leftovers[i]);
        out.variable[g].push_back(leftovers[i]);
    }

    for (std::size_t g = 0; g < groups; ++g) {
        std::sort(out.tests[g].begin(), out.tests[g].end());
        std::sort(out.variable[g].begin(), out.variable[g].end());
    }
    return out;
}

}  // namespace

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Loocv: return "loocv";
        case SchemeKind::Lpocv: return "lpocv";
        case SchemeKind::StratifiedLpocv: return "stratified-lpocv";
        case SchemeKind::Rloocv: return "rloocv";
        case SchemeKind::Rlpocv: return "rlpocv";
    }
    return "?";
}

SchemeKind parse_scheme(const std::string& name) {
    if (name == "loocv") return SchemeKind::Loocv;
    if (name == "lpocv") return SchemeKind::Lpocv;
    if (name == "stratified-lpocv" || name == "stratified_lpocv" || name == "stratified") {
        return SchemeKind::StratifiedLpocv;
    }
    if (name == "rloocv") return SchemeKind::Rloocv;
    if (name == "rlpocv") return SchemeKind::Rlpocv;
    throw Error(ErrorKind::Config, "unknown scheme '" + name + "'");
}

StratificationCounts stratification_counts(std::size_t positives,
                                           std::size_t negatives,
                                           std::size_t p) {
    if (p < 1) {
        throw Error(ErrorKind::Config, "p must be >= 1");
    }
    StratificationCounts counts;
    counts.group_count = (positives + negatives) / p;
    if (counts.group_count == 0) {
        throw Error(ErrorKind::TooFewSamples, "no full group of size p fits the dataset");
    }
    counts.t_c = positives / counts.group_count;
    counts.f_c = negatives / counts.group_count;
    counts.variable_per_group = p - (counts.t_c + counts.f_c);
    return counts;
}

FoldPlan loocv_plan(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorKind::TooFewSamples, "LOOCV needs n >= 2, got " + std::to_string(n));
    }
    FoldPlan plan;
    plan.n = n;
    plan.folds.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        plan.folds.push_back(Fold{{i}, {}});
    }
    return plan;
}

FoldPlan lpocv_plan(std::span<const int> labels, std::size_t p, RngStream& rng) {
    const std::size_t n = labels.size();
    require_divisible(n, p);
    const std::size_t groups = n / p;
    if (groups < 2) {
        throw Error(ErrorKind::TooFewSamples,
                    "need at least 2 folds, got " + std::to_string(groups));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    FoldPlan plan;
    plan.n = n;
    plan.folds.reserve(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        Fold fold;
        fold.test_indices.assign(perm.begin() + g * p, perm.begin() + (g + 1) * p);
        std::sort(fold.test_indices.begin(), fold.test_indices.end());
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

FoldPlan stratified_lpocv_plan(std::span<const int> labels, std::size_t p,
                               RngStream& rng) {
    StratifiedGroups groups = build_stratified_groups(labels, p, rng);
    FoldPlan plan;
    plan.n = labels.size();
    plan.folds.reserve(groups.tests.size());
    for (auto& test : groups.tests) {
        plan.folds.push_back(Fold{std::move(test), {}});
    }
    return plan;
}

FoldPlan rloocv_plan(std::span<const int> labels, RngStream& rng) {
    const std::size_t n = labels.size();
    ClassSplit classes = split_by_class(labels);
    if (classes.positives.empty() || classes.negatives.empty()) {
        throw Error(ErrorKind::SingleClass, "rebalancing needs both classes present");
    }
    if (n < 3) {
        throw Error(ErrorKind::TooFewSamples,
                    "RLOOCV needs n >= 3 or every training set is empty");
    }
    FoldPlan plan;
    plan.n = n;
    plan.folds.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& opposite = (labels[i] == 1) ? classes.negatives : classes.positives;
        const std::size_t pick = opposite[rng.next_below(opposite.size())];
        plan.folds.push_back(Fold{{i}, {pick}});
    }
    return plan;
}

FoldPlan rlpocv_plan(std::span<const int> labels, std::size_t p, RngStream& rng) {
    StratifiedGroups groups = build_stratified_groups(labels, p, rng);
    const StratificationCounts& c = groups.counts;
    ClassSplit classes = split_by_class(labels);
    const std::size_t t = classes.positives.size();
    const std::size_t f = classes.negatives.size();

    // Target per-fold training composition: T-p+f_c positives, F-p+t_c
    // negatives. Both must stay >= 1 or the exclusion pool runs dry.
    if (t + c.f_c < p + 1 || f + c.t_c < p + 1) {
        throw Error(ErrorKind::InsufficientOppositeClass,
                    "training composition T-p+f_c / F-p+t_c would drop below 1");
    }

    FoldPlan plan;
    plan.n = labels.size();
    plan.folds.reserve(groups.tests.size());
    for (std::size_t g = 0; g < groups.tests.size(); ++g) {
        Fold fold;
        fold.test_indices = groups.tests[g];

        std::vector<char> in_test(labels.size(), 0);
        for (std::size_t i : fold.test_indices) {
            in_test[i] = 1;
        }
        std::vector<std::size_t> pos_pool;
        std::vector<std::size_t> neg_pool;
        for (std::size_t i : classes.positives) {
            if (!in_test[i]) pos_pool.push_back(i);
        }
        for (std::size_t i : classes.negatives) {
            if (!in_test[i]) neg_pool.push_back(i);
        }

        for (std::size_t v : groups.variable[g]) {
            auto& pool = (labels[v] == 1) ? neg_pool : pos_pool;
            if (pool.empty()) {
                throw Error(ErrorKind::InsufficientOppositeClass,
                            "fold " + std::to_string(g) +
                                ": no opposite-label training sample left to exclude");
            }
            const std::size_t at = rng.next_below(pool.size());
            fold.excluded_indices.push_back(pool[at]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        }
        std::sort(fold.excluded_indices.begin(), fold.excluded_indices.end());
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

FoldPlan build_plan(const SchemeSpec& scheme, std::span<const int> labels,
                    RngStream& rng) {
    switch (scheme.kind) {
        case SchemeKind::Loocv: return loocv_plan(labels.size());
        case SchemeKind::Lpocv: return lpocv_plan(labels, scheme.p, rng);
        case SchemeKind::StratifiedLpocv: return stratified_lpocv_plan(labels, scheme.p, rng);
        case SchemeKind::Rloocv: return rloocv_plan(labels, rng);
        case SchemeKind::Rlpocv: return rlpocv_plan(labels, scheme.p, rng);
    }
    throw Error(ErrorKind::Config, "unknown scheme kind");
}

}  // namespace rxval
