#include "resaug/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "resaug/errors.hpp"
#include "resaug/parallel.hpp"
#include "resaug/rng.hpp"

namespace resaug::learner {
namespace {

constexpr std::uint32_t kForestMagic = 0x46415352;  // "RSAF"
constexpr std::uint32_t kForestVersion = 1;

struct ColumnMatrix {
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<double> values;  // column-major

    const double* col(std::size_t f) const { return values.data() + f * n; }
};

ColumnMatrix to_columns(const FrameTable& X) {
    ColumnMatrix m;
    m.n = X.n_rows();
    m.p = X.n_cols();
    m.values.resize(m.n * m.p);
    for (std::size_t r = 0; r < m.n; ++r) {
        for (std::size_t c = 0; c < m.p; ++c) m.values[c * m.n + r] = X.at(r, c);
    }
    return m;
}

// argsort of each column; ties broken by row index so the order is unique.
std::vector<std::vector<std::int32_t>> presort_columns(const ColumnMatrix& m) {
    std::vector<std::vector<std::int32_t>> order(m.p);
    for (std::size_t f = 0; f < m.p; ++f) {
        auto& ord = order[f];
        ord.resize(m.n);
        std::iota(ord.begin(), ord.end(), 0);
        const double* col = m.col(f);
        std::sort(ord.begin(), ord.end(), [col](std::int32_t a, std::int32_t b) {
            if (col[a] != col[b]) return col[a] < col[b];
            return a < b;
        });
    }
    return order;
}

int feature_count_for_policy(FeaturePolicy policy, int fixed_k, std::size_t p) {
    switch (policy) {
        case FeaturePolicy::all:
            return static_cast<int>(p);
        case FeaturePolicy::sqrt_total:
            return static_cast<int>(
                std::ceil(std::sqrt(static_cast<double>(p))));
        case FeaturePolicy::fixed:
            return std::clamp(fixed_k, 1, static_cast<int>(p));
    }
    return static_cast<int>(p);
}

// Grows one CART tree over presorted per-feature sample lists. The lists all
// hold the same multiset of row ids, each sorted by its own feature, and are
// partitioned in lockstep when a node splits, so no re-sorting is needed.
class TreeBuilder {
public:
    TreeBuilder(const ColumnMatrix& cols,
                const std::vector<std::vector<std::int32_t>>& global_order,
                const std::vector<double>& y,
                const std::vector<std::int32_t>& y_class, std::size_t n_classes,
                TaskKind task, FeaturePolicy policy, int fixed_k,
                int min_samples_split, std::uint64_t rng_seed)
        : cols_(cols),
          global_order_(global_order),
          y_(y),
          y_class_(y_class),
          n_classes_(n_classes),
          task_(task),
          min_samples_split_(min_samples_split),
          rng_(rng_seed),
          k_features_(feature_count_for_policy(policy, fixed_k, cols.p)) {}

    DecisionTree build(const std::vector<std::int32_t>& bootstrap_counts) {
        const std::size_t n = cols_.n;
        std::size_t m = 0;
        for (auto c : bootstrap_counts) m += static_cast<std::size_t>(c);

        lists_.assign(cols_.p * m, 0);
        scratch_.assign(m, 0);
        const auto& global_order = global_order_;

        for (std::size_t f = 0; f < cols_.p; ++f) {
            std::int32_t* dst = lists_.data() + f * m;
            std::size_t w = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const std::int32_t i = global_order[f][k];
                for (std::int32_t rep = 0; rep < bootstrap_counts[i]; ++rep) dst[w++] = i;
            }
        }

        m_total_ = m;
        DecisionTree tree;
        tree.task = task_;
        nodes_ = &tree.nodes;
        class_counts_buf_.assign(n_classes_, 0);
        grow(0, m);
        return tree;
    }

private:
    struct NodeStats {
        std::size_t m = 0;
        double sum = 0.0;                        // regression
        std::vector<std::int64_t> class_counts;  // classification
        bool pure = false;
    };

    NodeStats node_stats(std::size_t begin, std::size_t end) const {
        NodeStats s;
        s.m = end - begin;
        const std::int32_t* base = lists_.data();  // feature 0 view
        if (task_ == TaskKind::regression) {
            bool all_equal = true;
            const double first = y_[base[begin]];
            for (std::size_t j = begin; j < end; ++j) {
                const double v = y_[base[j]];
                s.sum += v;
                all_equal = all_equal && v == first;
            }
            s.pure = all_equal;
        } else {
            s.class_counts.assign(n_classes_, 0);
            for (std::size_t j = begin; j < end; ++j) {
                ++s.class_counts[y_class_[base[j]]];
            }
            std::size_t nonzero = 0;
            for (auto c : s.class_counts) nonzero += c > 0;
            s.pure = nonzero <= 1;
        }
        return s;
    }

    double leaf_value(const NodeStats& s) const {
        if (task_ == TaskKind::regression) {
            return s.sum / static_cast<double>(s.m);
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes_; ++c) {
            if (s.class_counts[c] > s.class_counts[best]) best = c;  // tie: smallest label
        }
        return class_labels_placeholder_[best];
    }

    struct SplitChoice {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = -std::numeric_limits<double>::infinity();
        std::size_t left_count = 0;
    };

    // Scans one feature's sorted slice; candidate thresholds sit between
    // consecutive distinct values. Gain proxy: sum(p_child * (1 - gini)) for
    // classification and between-group sum-of-squares for regression; both
    // are monotone in true impurity decrease.
    void scan_feature(std::size_t f, std::size_t begin, std::size_t end,
                      const NodeStats& stats, SplitChoice& best) {
        const std::int32_t* idx = lists_.data() + f * m_total_ + begin;
        const double* col = cols_.col(f);
        const std::size_t m = end - begin;
        if (col[idx[0]] == col[idx[m - 1]]) return;  // constant within node

        if (task_ == TaskKind::regression) {
            double left_sum = 0.0;
            const double total_sum = stats.sum;
            for (std::size_t j = 0; j + 1 < m; ++j) {
                left_sum += y_[idx[j]];
                const double v = col[idx[j]];
                const double v_next = col[idx[j + 1]];
                if (v == v_next) continue;
                const auto m_l = static_cast<double>(j + 1);
                const auto m_r = static_cast<double>(m - j - 1);
                const double right_sum = total_sum - left_sum;
                const double gain = left_sum * left_sum / m_l +
                                    right_sum * right_sum / m_r -
                                    total_sum * total_sum / static_cast<double>(m);
                if (gain > best.gain) {
                    double mid = v + 0.5 * (v_next - v);
                    if (!(mid < v_next)) mid = v;  // fp guard: keep both sides nonempty
                    best = {true, f, mid, gain, j + 1};
                }
            }
        } else {
            auto& left_counts = class_counts_buf_;
            std::fill(left_counts.begin(), left_counts.end(), 0);
            double left_sq = 0.0;    // sum of squared left class counts
            double total_sq = 0.0;   // sum of squared node class counts
            for (auto c : stats.class_counts) {
                total_sq += static_cast<double>(c) * static_cast<double>(c);
            }
            for (std::size_t j = 0; j + 1 < m; ++j) {
                const std::int32_t cls = y_class_[idx[j]];
                left_sq += 2.0 * static_cast<double>(left_counts[cls]) + 1.0;
                ++left_counts[cls];
                const double v = col[idx[j]];
                const double v_next = col[idx[j + 1]];
                if (v == v_next) continue;
                const auto m_l = static_cast<double>(j + 1);
                const auto m_r = static_cast<double>(m - j - 1);
                double right_sq = 0.0;
                for (std::size_t c = 0; c < n_classes_; ++c) {
                    const double rc = static_cast<double>(stats.class_counts[c] -
                                                          left_counts[c]);
                    right_sq += rc * rc;
                }
                const double gain =
                    left_sq / m_l + right_sq / m_r - total_sq / static_cast<double>(m);
                if (gain > best.gain) {
                    double mid = v + 0.5 * (v_next - v);
                    if (!(mid < v_next)) mid = v;
                    best = {true, f, mid, gain, j + 1};
                }
            }
        }
    }

    SplitChoice choose_split(std::size_t begin, std::size_t end, const NodeStats& stats) {
        SplitChoice best;
        if (k_features_ >= static_cast<int>(cols_.p)) {
            for (std::size_t f = 0; f < cols_.p; ++f) scan_feature(f, begin, end, stats, best);
            return best;
        }
        // Sampled subset, evaluated in ascending feature order so that equal
        // gains resolve to the lowest feature index.
        feature_sample_.resize(cols_.p);
        std::iota(feature_sample_.begin(), feature_sample_.end(), 0);
        for (int i = 0; i < k_features_; ++i) {
            const auto j =
                i + static_cast<std::size_t>(rng_.bounded(cols_.p - static_cast<std::size_t>(i)));
            std::swap(feature_sample_[static_cast<std::size_t>(i)], feature_sample_[j]);
        }
        std::sort(feature_sample_.begin(), feature_sample_.begin() + k_features_);
        for (int i = 0; i < k_features_; ++i) {
            scan_feature(feature_sample_[static_cast<std::size_t>(i)], begin, end, stats, best);
        }
        if (!best.found) {
            // Unlucky constant draw; fall back to the full feature set rather
            // than declaring a leaf early.
            for (std::size_t f = 0; f < cols_.p; ++f) scan_feature(f, begin, end, stats, best);
        }
        return best;
    }

    std::int32_t grow(std::size_t begin, std::size_t end) {
        const NodeStats stats = node_stats(begin, end);
        const auto node_id = static_cast<std::int32_t>(nodes_->size());
        nodes_->push_back({});

        if (stats.pure || stats.m < static_cast<std::size_t>(min_samples_split_)) {
            (*nodes_)[node_id].value = leaf_value(stats);
            return node_id;
        }
        const SplitChoice split = choose_split(begin, end, stats);
        if (!split.found) {  // every feature constant within the node
            (*nodes_)[node_id].value = leaf_value(stats);
            return node_id;
        }

        partition_lists(begin, end, split);
        (*nodes_)[node_id].feature = static_cast<std::int32_t>(split.feature);
        (*nodes_)[node_id].threshold = split.threshold;
        const std::int32_t left = grow(begin, begin + split.left_count);
        const std::int32_t right = grow(begin + split.left_count, end);
        (*nodes_)[node_id].left = left;
        (*nodes_)[node_id].right = right;
        return node_id;
    }

    // Stable partition of every feature list so each side stays sorted.
    void partition_lists(std::size_t begin, std::size_t end, const SplitChoice& split) {
        const double* split_col = cols_.col(split.feature);
        for (std::size_t f = 0; f < cols_.p; ++f) {
            std::int32_t* slice = lists_.data() + f * m_total_;
            std::size_t w_left = begin;
            std::size_t w_right = 0;
            for (std::size_t j = begin; j < end; ++j) {
                const std::int32_t i = slice[j];
                if (split_col[i] <= split.threshold) {
                    slice[w_left++] = i;
                } else {
                    scratch_[w_right++] = i;
                }
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(w_right),
                      slice + w_left);
        }
    }

public:
    // Class labels in ascending order; set by the forest before building.
    std::vector<double> class_labels_placeholder_;

private:
    const ColumnMatrix& cols_;
    const std::vector<std::vector<std::int32_t>>& global_order_;
    const std::vector<double>& y_;
    const std::vector<std::int32_t>& y_class_;
    std::size_t n_classes_;
    TaskKind task_;
    int min_samples_split_;
    Rng rng_;
    int k_features_;

    std::size_t m_total_ = 0;
    std::vector<std::int32_t> lists_;
    std::vector<std::int32_t> scratch_;
    std::vector<std::int64_t> class_counts_buf_;
    std::vector<std::size_t> feature_sample_;
    std::vector<TreeNode>* nodes_ = nullptr;
};

void validate_training_inputs(const FrameTable& X, const std::vector<double>& y) {
    if (X.n_rows() == 0) throw LearnerError("cannot fit on an empty table");
    if (X.n_rows() != y.size()) {
        throw LearnerError("X/y length mismatch: " + std::to_string(X.n_rows()) + " vs " +
                           std::to_string(y.size()));
    }
    for (double v : X.data()) {
        if (!std::isfinite(v)) throw LearnerError("non-finite feature value");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw LearnerError("non-finite target value");
    }
}

std::vector<double> sorted_unique_labels(const std::vector<double>& y) {
    std::vector<double> labels(y);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

std::vector<std::int32_t> map_to_classes(const std::vector<double>& y,
                                         const std::vector<double>& labels) {
    std::vector<std::int32_t> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto it = std::lower_bound(labels.begin(), labels.end(), y[i]);
        out[i] = static_cast<std::int32_t>(it - labels.begin());
    }
    return out;
}

void write_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void write_i32(std::ostream& out, std::int32_t v) {
    write_u32(out, static_cast<std::uint32_t>(v));
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint8_t read_u8(std::istream& in) {
    const int c = in.get();
    if (c == EOF) throw LearnerError("model file truncated");
    return static_cast<std::uint8_t>(c);
}

std::uint32_t read_u32(std::istream& in) {
    char b[4];
    if (!in.read(b, 4)) throw LearnerError("model file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    char b[8];
    if (!in.read(b, 8)) throw LearnerError("model file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
}

std::int32_t read_i32(std::istream& in) { return static_cast<std::int32_t>(read_u32(in)); }

double read_f64(std::istream& in) {
    const std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string read_string(std::istream& in) {
    const std::uint32_t len = read_u32(in);
    std::string s(len, '\0');
    if (len > 0 && !in.read(s.data(), len)) throw LearnerError("model file truncated");
    return s;
}

}  // namespace

double DecisionTree::predict_row(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto& nd = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                         ? nd.left
                                         : nd.right);
    }
    return nodes[i].value;
}

int DecisionTree::depth() const {
    std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
    int max_depth = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        max_depth = std::max(max_depth, d);
        if (nodes[i].feature >= 0) {
            stack.push_back({static_cast<std::size_t>(nodes[i].left), d + 1});
            stack.push_back({static_cast<std::size_t>(nodes[i].right), d + 1});
        }
    }
    return max_depth;
}

DecisionTree fit_tree(const FrameTable& X, const std::vector<double>& y, TaskKind task,
                      FeaturePolicy policy, int fixed_k, std::uint64_t rng_seed,
                      int min_samples_split) {
    validate_training_inputs(X, y);
    const ColumnMatrix cols = to_columns(X);
    const auto order = presort_columns(cols);
    std::vector<double> labels;
    std::vector<std::int32_t> y_class;
    if (task == TaskKind::classification) {
        labels = sorted_unique_labels(y);
        y_class = map_to_classes(y, labels);
    }
    TreeBuilder builder(cols, order, y, y_class, labels.size(), task, policy, fixed_k,
                        min_samples_split, rng_seed);
    builder.class_labels_placeholder_ = labels;
    std::vector<std::int32_t> counts(X.n_rows(), 1);
    return builder.build(counts);
}

RandomForest RandomForest::fit(const FrameTable& X, const std::vector<double>& y,
                               TaskKind task, const ForestConfig& config, int threads) {
    validate_training_inputs(X, y);
    RandomForest forest;
    forest.task_ = task;
    forest.config_ = config;
    forest.feature_names_ = X.column_names();

    std::vector<std::int32_t> y_class;
    if (task == TaskKind::classification) {
        forest.class_labels_ = sorted_unique_labels(y);
        y_class = map_to_classes(y, forest.class_labels_);
    }

    if (config.n_trees < 1) throw LearnerError("n_trees must be >= 1");
    const ColumnMatrix cols = to_columns(X);
    const auto order = presort_columns(cols);
    const std::size_t n = X.n_rows();
    forest.trees_.resize(static_cast<std::size_t>(config.n_trees));

    parallel_for(static_cast<std::size_t>(config.n_trees), threads, [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(config.seed, t);
        Rng rng(tree_seed);
        std::vector<std::int32_t> counts(n, 0);
        if (config.bootstrap) {
            for (std::size_t d = 0; d < n; ++d) ++counts[rng.bounded(n)];
        } else {
            std::fill(counts.begin(), counts.end(), 1);
        }
        // Separate stream for per-node feature sampling so it cannot
        // interleave with the bootstrap draws.
        TreeBuilder builder(cols, order, y, y_class, forest.class_labels_.size(), task,
                            config.max_features, config.fixed_k, config.min_samples_split,
                            tree_seed ^ 0x5851f42d4c957f2dULL);
        builder.class_labels_placeholder_ = forest.class_labels_;
        forest.trees_[t] = builder.build(counts);
    });
    return forest;
}

double RandomForest::predict_row(std::span<const double> x) const {
    if (task_ == TaskKind::regression) {
        double sum = 0.0;
        for (const auto& tree : trees_) sum += tree.predict_row(x);
        return sum / static_cast<double>(trees_.size());
    }
    std::vector<std::int64_t> votes(class_labels_.size(), 0);
    for (const auto& tree : trees_) {
        const double label = tree.predict_row(x);
        const auto it = std::lower_bound(class_labels_.begin(), class_labels_.end(), label);
        ++votes[static_cast<std::size_t>(it - class_labels_.begin())];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[best]) best = c;  // tie resolves to the smaller label
    }
    return class_labels_[best];
}

std::vector<double> RandomForest::predict(const FrameTable& X) const {
    if (X.n_cols() != feature_names_.size()) {
        throw LearnerError("schema mismatch: expected " + std::to_string(feature_names_.size()) +
                           " columns, got " + std::to_string(X.n_cols()));
    }
    for (std::size_t c = 0; c < feature_names_.size(); ++c) {
        if (X.column_names()[c] != feature_names_[c]) {
            throw LearnerError("schema mismatch at column '" + X.column_names()[c] +
                               "' (expected '" + feature_names_[c] + "')");
        }
    }
    std::vector<double> out(X.n_rows());
    for (std::size_t r = 0; r < X.n_rows(); ++r) out[r] = predict_row(X.row(r));
    return out;
}

TrainTestSplit train_test_split(const FrameTable& X, const std::vector<double>& y,
                                double test_fraction, std::uint64_t seed) {
    if (X.n_rows() != y.size()) throw LearnerError("X/y length mismatch");
    if (X.n_rows() < 2) throw LearnerError("degenerate input: need at least 2 rows to split");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw LearnerError("test fraction must be in (0, 1)");
    }
    const std::size_t n = X.n_rows();
    auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);  // both sides stay populated

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);

    const std::size_t p = X.n_cols();
    TrainTestSplit split;
    std::vector<double> test_data, train_data;
    test_data.reserve(n_test * p);
    train_data.reserve((n - n_test) * p);
    split.y_test.reserve(n_test);
    split.y_train.reserve(n - n_test);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t r = idx[k];
        auto row = X.row(r);
        if (k < n_test) {
            test_data.insert(test_data.end(), row.begin(), row.end());
            split.y_test.push_back(y[r]);
        } else {
            train_data.insert(train_data.end(), row.begin(), row.end());
            split.y_train.push_back(y[r]);
        }
    }
    split.X_test = FrameTable(X.column_names(), std::move(test_data));
    split.X_train = FrameTable(X.column_names(), std::move(train_data));
    return split;
}

ModelFitness r_squared(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw LearnerError("r_squared: length mismatch: " + std::to_string(y_true.size()) +
                           " vs " + std::to_string(y_pred.size()));
    }
    if (y_true.empty()) throw LearnerError("r_squared: empty input");

    double mean = 0.0;
    for (double v : y_true) mean += v;
    mean /= static_cast<double>(y_true.size());

    ModelFitness fit;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double dm = y_true[i] - mean;
        const double dp = y_true[i] - y_pred[i];
        fit.tss += dm * dm;
        fit.rss += dp * dp;
    }
    if (fit.tss < 1e-5 && fit.tss > -1e-5) {
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = 1.0 - fit.rss / fit.tss;
    }
    return fit;
}

void RandomForest::save(std::ostream& out) const {
    write_u32(out, kForestMagic);
    write_u32(out, kForestVersion);
    write_u8(out, task_ == TaskKind::regression ? 0 : 1);
    write_i32(out, config_.n_trees);
    write_u8(out, static_cast<std::uint8_t>(config_.max_features));
    write_i32(out, config_.fixed_k);
    write_u64(out, config_.seed);
    write_u8(out, config_.bootstrap ? 1 : 0);
    write_i32(out, config_.min_samples_split);
    write_u32(out, static_cast<std::uint32_t>(feature_names_.size()));
    for (const auto& name : feature_names_) write_string(out, name);
    write_u32(out, static_cast<std::uint32_t>(class_labels_.size()));
    for (double l : class_labels_) write_f64(out, l);
    write_u32(out, static_cast<std::uint32_t>(trees_.size()));
    for (const auto& tree : trees_) {
        write_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& nd : tree.nodes) {
            write_i32(out, nd.feature);
            write_f64(out, nd.threshold);
            write_i32(out, nd.left);
            write_i32(out, nd.right);
            write_f64(out, nd.value);
        }
    }
    if (!out) throw LearnerError("model write failed");
}

RandomForest RandomForest::load(std::istream& in) {
    if (read_u32(in) != kForestMagic) throw LearnerError("not a forest model file");
    const std::uint32_t version = read_u32(in);
    if (version != kForestVersion) {
        throw LearnerError("unsupported model version " + std::to_string(version));
    }
    RandomForest forest;
    forest.task_ = read_u8(in) == 0 ? TaskKind::regression : TaskKind::classification;
    forest.config_.n_trees = read_i32(in);
    forest.config_.max_features = static_cast<FeaturePolicy>(read_u8(in));
    forest.config_.fixed_k = read_i32(in);
    forest.config_.seed = read_u64(in);
    forest.config_.bootstrap = read_u8(in) != 0;
    forest.config_.min_samples_split = read_i32(in);
    const std::uint32_t n_features = read_u32(in);
    forest.feature_names_.reserve(n_features);
    for (std::uint32_t i = 0; i < n_features; ++i) forest.feature_names_.push_back(read_string(in));
    const std::uint32_t n_classes = read_u32(in);
    forest.class_labels_.reserve(n_classes);
    for (std::uint32_t i = 0; i < n_classes; ++i) forest.class_labels_.push_back(read_f64(in));
    const std::uint32_t n_trees = read_u32(in);
    forest.trees_.resize(n_trees);
    for (auto& tree : forest.trees_) {
        tree.task = forest.task_;
        tree.nodes.resize(read_u32(in));
        for (auto& nd : tree.nodes) {
            nd.feature = read_i32(in);
            nd.threshold = read_f64(in);
            nd.left = read_i32(in);
            nd.right = read_i32(in);
            nd.value = read_f64(in);
        }
    }
    return forest;
}

}  // namespace resaug::learner
