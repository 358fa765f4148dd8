#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "resaug/table.hpp"

namespace resaug::learner {

enum class TaskKind { regression, classification };

enum class FeaturePolicy {
    all,         // every feature at every split
    sqrt_total,  // ceil(sqrt(p)) features per split
    fixed,       // fixed_k features per split
};

struct ForestConfig {
    int n_trees = 100;
    FeaturePolicy max_features = FeaturePolicy::all;
    int fixed_k = 0;
    std::uint64_t seed = 42;
    bool bootstrap = true;
    int min_samples_split = 2;
};

// Flat node arena; feature < 0 marks a leaf and `value` holds the prediction
// (mean for regression, class label for classification).
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    TaskKind task = TaskKind::regression;

    double predict_row(std::span<const double> x) const;
    int depth() const;
};

struct ModelFitness {
    double r_squared = 0.0;
    double tss = 0.0;
    double rss = 0.0;
};

class RandomForest {
public:
    RandomForest() = default;

    TaskKind task() const { return task_; }
    const ForestConfig& config() const { return config_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    // Per-tree rng streams derive from (seed, tree index), so training order
    // (and thread count) cannot change the model.
    static RandomForest fit(const FrameTable& X, const std::vector<double>& y,
                            TaskKind task, const ForestConfig& config,
                            int threads = 1);

    std::vector<double> predict(const FrameTable& X) const;
    double predict_row(std::span<const double> x) const;

    void save(std::ostream& out) const;
    static RandomForest load(std::istream& in);

private:
    std::vector<DecisionTree> trees_;
    std::vector<std::string> feature_names_;
    std::vector<double> class_labels_;  // ascending; classification only
    TaskKind task_ = TaskKind::regression;
    ForestConfig config_;
};

struct TrainTestSplit {
    FrameTable X_train;
    FrameTable X_test;
    std::vector<double> y_train;
    std::vector<double> y_test;
};

TrainTestSplit train_test_split(const FrameTable& X, const std::vector<double>& y,
                                double test_fraction, std::uint64_t seed);

// Single CART tree; exposed for tests and for the degenerate one-tree forest.
DecisionTree fit_tree(const FrameTable& X, const std::vector<double>& y,
                      TaskKind task, FeaturePolicy policy, int fixed_k,
                      std::uint64_t rng_seed, int min_samples_split = 2);

// tss within +/-1e-5 of zero forces r_squared to 1; otherwise 1 - rss/tss.
ModelFitness r_squared(const std::vector<double>& y_true,
                       const std::vector<double>& y_pred);

}  // namespace resaug::learner
