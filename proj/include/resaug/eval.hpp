#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "resaug/augment.hpp"
#include "resaug/forest.hpp"
#include "resaug/table.hpp"

namespace resaug::eval {

struct MetricsBundle {
    learner::TaskKind task = learner::TaskKind::classification;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double rmse = 0.0;
    int fold_count = 0;
    // Per-fold metrics for audit; headline numbers use pooled predictions.
    std::vector<double> per_fold_primary;  // f1 or rmse per fold
};

struct EvalSpec {
    int n_trees = 100;
    std::uint64_t seed = 42;
    int k = 5;
    learner::FeaturePolicy classifier_policy = learner::FeaturePolicy::sqrt_total;
    learner::FeaturePolicy regressor_policy = learner::FeaturePolicy::all;
    int threads = 1;
};

// Pooled out-of-fold predictions. Folds are contiguous, unshuffled slices of
// the current row order; fold membership depends only on (row, n_rows, k).
std::vector<double> kfold_predict(const EvalSpec& spec, learner::TaskKind task,
                                  const FrameTable& X, const std::vector<double>& y);

MetricsBundle classification_metrics(const std::vector<double>& y_true,
                                     const std::vector<double>& y_pred);
MetricsBundle regression_metrics(const std::vector<double>& y_true,
                                 const std::vector<double>& y_pred);

struct StageCounts {
    std::size_t rows_raw = 0;
    std::size_t rows_sampled = 0;
    std::size_t rows_deduplicated = 0;
    std::size_t rows_final = 0;
    std::size_t columns_encoded = 0;
    std::size_t attributes = 0;
    std::size_t residual_columns = 0;
    std::size_t columns_augmented = 0;
};

struct BankFitnessSummary {
    std::string suffix;
    std::map<std::string, double> r_squared;  // per attribute
};

struct ComparisonReport {
    learner::TaskKind task = learner::TaskKind::classification;
    MetricsBundle baseline;
    MetricsBundle augmented;
    StageCounts counts;
    std::vector<BankFitnessSummary> bank_fitness;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> config_echo;
};

// Cross-validated metrics on the original vs the augmented table.
ComparisonReport compare(const FrameTable& t_original, const FrameTable& t_augmented,
                         const std::string& target, const EvalSpec& spec,
                         learner::TaskKind task);

}  // namespace resaug::eval
