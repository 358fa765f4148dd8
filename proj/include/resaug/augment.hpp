#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "resaug/forest.hpp"
#include "resaug/table.hpp"

namespace resaug::augment {

// All attribute models conditioned on one target value ('all' rows in
// single-bank mode), plus each model's held-out fitness used for weighting.
struct AttributeModelBank {
    double target_value = 0.0;
    std::string suffix;  // "0"/"1" per class, "new" for single-bank
    std::map<std::string, learner::RandomForest> models;
    std::map<std::string, learner::ModelFitness> fitness;
};

enum class AugmentMode { per_class, single_bank };

// faithful: round the absolute residual to 4 decimals, then multiply by the
// raw r^2 squared (negative r^2 included). clamped: no rounding, r^2 clamped
// to [0, 1] before squaring.
enum class Weighting { faithful, clamped };

// in_sample: attribute models score rows they trained on. out_of_fold: rows
// of a bank's own partition are scored by a model that never saw them.
enum class ResidualSource { in_sample, out_of_fold };

struct LearnerSpec {
    int n_trees = 100;
    std::uint64_t seed = 42;
    double holdout_fraction = 0.2;
    learner::FeaturePolicy attribute_policy = learner::FeaturePolicy::all;
};

struct AugmentConfig {
    std::string target;
    AugmentMode mode = AugmentMode::per_class;
    int rounds = 1;
    LearnerSpec learner;
    Weighting weighting = Weighting::faithful;
    ResidualSource residual_source = ResidualSource::in_sample;
    int oof_folds = 5;
    int threads = 1;
};

// Partitions ordered by ascending target value, target column removed.
std::vector<std::pair<double, FrameTable>> partition_by_target(const FrameTable& t,
                                                               const std::string& target);

// One regressor per attribute, fit on a seeded 80/20 split of the partition;
// fitness comes from the held-out 20%.
AttributeModelBank train_attribute_models(const FrameTable& partition,
                                          const AugmentConfig& cfg,
                                          double target_value,
                                          const std::string& suffix);

// One residual column per (attribute, bank). Classification order interleaves
// banks per attribute (a_0, a_1, b_0, b_1, ...); single-bank appends _new.
FrameTable residual_features(const FrameTable& t,
                             const std::vector<AttributeModelBank>& banks,
                             const AugmentConfig& cfg);

// Full round: partition -> banks -> residuals -> [residuals | original].
std::pair<FrameTable, std::vector<AttributeModelBank>> augment_dataset(
    const FrameTable& t, const AugmentConfig& cfg);

struct RoundsResult {
    FrameTable table;
    std::vector<AttributeModelBank> final_banks;
    std::vector<std::string> warnings;
};

// Applies augment_dataset `rounds` times; every prior residual column counts
// as an attribute in the next round. Records a warning whenever the
// rows/columns ratio drops below 10.
RoundsResult iterate_rounds(const FrameTable& t, const AugmentConfig& cfg);

// Residual cell arithmetic, exposed for tests.
double residual_cell(double y_real, double y_predicted, double r2, Weighting weighting);

// Bank cache format (versioned, little-endian).
void save_banks(const std::vector<AttributeModelBank>& banks,
                const std::filesystem::path& path);
std::vector<AttributeModelBank> load_banks(const std::filesystem::path& path);

}  // namespace resaug::augment
