#include "resaug/eval.hpp"

#include <cmath>

#include "resaug/errors.hpp"
#include "resaug/parallel.hpp"
#include "resaug/rng.hpp"

namespace resaug::eval {
namespace {

FrameTable rows_subset(const FrameTable& t, const std::vector<std::size_t>& rows) {
    std::vector<double> data;
    data.reserve(rows.size() * t.n_cols());
    for (auto r : rows) {
        auto row = t.row(r);
        data.insert(data.end(), row.begin(), row.end());
    }
    return FrameTable(t.column_names(), std::move(data));
}

void check_binary(const std::vector<double>& v, const char* which) {
    for (double x : v) {
        if (x != 0.0 && x != 1.0) {
            throw EvalError(std::string(which) + " contains a non-binary value: " +
                            format_double(x));
        }
    }
}

}  // namespace

std::vector<double> kfold_predict(const EvalSpec& spec, learner::TaskKind task,
                                  const FrameTable& X, const std::vector<double>& y) {
    if (X.n_rows() != y.size()) throw EvalError("kfold_predict: X/y length mismatch");
    if (spec.k < 2) throw EvalError("kfold_predict: k must be >= 2");
    const std::size_t n = X.n_rows();
    const auto k = static_cast<std::size_t>(spec.k);
    if (n < k) {
        throw EvalError("kfold_predict: " + std::to_string(n) + " rows cannot fill " +
                        std::to_string(k) + " folds");
    }

    std::vector<double> predictions(n);
    parallel_for(k, spec.threads, [&](std::size_t fold) {
        const std::size_t begin = fold * n / k;
        const std::size_t end = (fold + 1) * n / k;
        std::vector<std::size_t> train_rows;
        train_rows.reserve(n - (end - begin));
        for (std::size_t r = 0; r < n; ++r) {
            if (r < begin || r >= end) train_rows.push_back(r);
        }
        std::vector<double> y_train(train_rows.size());
        for (std::size_t j = 0; j < train_rows.size(); ++j) y_train[j] = y[train_rows[j]];

        learner::ForestConfig fc;
        fc.n_trees = spec.n_trees;
        fc.max_features = task == learner::TaskKind::classification ? spec.classifier_policy
                                                                    : spec.regressor_policy;
        fc.seed = derive_seed(spec.seed, fold);
        const auto model =
            learner::RandomForest::fit(rows_subset(X, train_rows), y_train, task, fc, 1);
        for (std::size_t r = begin; r < end; ++r) {
            predictions[r] = model.predict_row(X.row(r));
        }
    });
    return predictions;
}

MetricsBundle classification_metrics(const std::vector<double>& y_true,
                                     const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw EvalError("classification_metrics: length mismatch");
    }
    check_binary(y_true, "y_true");
    check_binary(y_pred, "y_pred");

    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_pred[i] == 1.0 && y_true[i] == 1.0) ++tp;
        if (y_pred[i] == 1.0 && y_true[i] == 0.0) ++fp;
        if (y_pred[i] == 0.0 && y_true[i] == 1.0) ++fn;
    }
    MetricsBundle m;
    m.task = learner::TaskKind::classification;
    m.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = m.precision + m.recall == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

MetricsBundle regression_metrics(const std::vector<double>& y_true,
                                 const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) throw EvalError("regression_metrics: length mismatch");
    if (y_true.empty()) throw EvalError("regression_metrics: empty input");
    double sq = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - y_pred[i];
        sq += d * d;
    }
    MetricsBundle m;
    m.task = learner::TaskKind::regression;
    m.rmse = std::sqrt(sq / static_cast<double>(y_true.size()));
    return m;
}

ComparisonReport compare(const FrameTable& t_original, const FrameTable& t_augmented,
                         const std::string& target, const EvalSpec& spec,
                         learner::TaskKind task) {
    if (!t_original.has_column(target) || !t_augmented.has_column(target)) {
        throw EvalError("target column '" + target + "' missing from a comparison table");
    }
    if (t_original.n_rows() != t_augmented.n_rows()) {
        throw EvalError("comparison tables have different row counts");
    }

    ComparisonReport report;
    report.task = task;

    const auto evaluate = [&](const FrameTable& t) {
        const FrameTable X = t.drop_columns({target});
        const std::vector<double> y = t.column_values(target);
        const std::vector<double> pred = kfold_predict(spec, task, X, y);
        MetricsBundle m = task == learner::TaskKind::classification
                              ? classification_metrics(y, pred)
                              : regression_metrics(y, pred);
        m.fold_count = spec.k;
        // Per-fold audit metrics over the same pooled predictions.
        const std::size_t n = y.size();
        const auto k = static_cast<std::size_t>(spec.k);
        for (std::size_t fold = 0; fold < k; ++fold) {
            const std::size_t begin = fold * n / k;
            const std::size_t end = (fold + 1) * n / k;
            const std::vector<double> yt(y.begin() + static_cast<std::ptrdiff_t>(begin),
                                         y.begin() + static_cast<std::ptrdiff_t>(end));
            const std::vector<double> yp(pred.begin() + static_cast<std::ptrdiff_t>(begin),
                                         pred.begin() + static_cast<std::ptrdiff_t>(end));
            if (task == learner::TaskKind::classification) {
                m.per_fold_primary.push_back(classification_metrics(yt, yp).f1);
            } else {
                m.per_fold_primary.push_back(regression_metrics(yt, yp).rmse);
            }
        }
        return m;
    };

    report.baseline = evaluate(t_original);
    report.augmented = evaluate(t_augmented);
    if (task == learner::TaskKind::classification &&
        (report.baseline.precision + report.baseline.recall == 0.0 ||
         report.augmented.precision + report.augmented.recall == 0.0)) {
        report.warnings.push_back(
            "a precision/recall denominator was zero; the affected metrics were set to 0");
    }
    return report;
}

}  // namespace resaug::eval
