#include "resaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "resaug/errors.hpp"
#include "resaug/parallel.hpp"
#include "resaug/rng.hpp"

namespace resaug::augment {
namespace {

constexpr std::uint32_t kBankMagic = 0x314b4252;  // "RBK1"
constexpr std::uint32_t kBankVersion = 1;

std::string format_class_suffix(double value) {
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        return std::to_string(static_cast<long long>(value));
    }
    return format_double(value);
}

FrameTable select_table_rows(const FrameTable& t, const std::vector<std::size_t>& rows) {
    std::vector<double> data;
    data.reserve(rows.size() * t.n_cols());
    for (auto r : rows) {
        auto row = t.row(r);
        data.insert(data.end(), row.begin(), row.end());
    }
    return FrameTable(t.column_names(), std::move(data));
}

std::vector<std::string> attribute_names(const FrameTable& t, const std::string& target) {
    std::vector<std::string> attrs;
    for (const auto& name : t.column_names()) {
        if (name != target) attrs.push_back(name);
    }
    return attrs;
}

// Out-of-fold predictions for the bank's own partition rows; every other row
// is scored by the bank's stored model, which never saw it.
std::vector<double> out_of_fold_predictions(const FrameTable& t, const std::string& target,
                                            const AttributeModelBank& bank,
                                            const std::string& attr,
                                            const AugmentConfig& cfg,
                                            const std::vector<std::size_t>& member_rows,
                                            const FrameTable& x_all,
                                            const std::vector<double>& y_all) {
    std::vector<double> pred = bank.models.at(attr).predict(x_all);
    const std::size_t m = member_rows.size();
    if (m < 2) return pred;

    const auto k = static_cast<std::size_t>(
        std::clamp<std::size_t>(static_cast<std::size_t>(cfg.oof_folds), 2, m));
    for (std::size_t fold = 0; fold < k; ++fold) {
        const std::size_t begin = fold * m / k;
        const std::size_t end = (fold + 1) * m / k;
        std::vector<std::size_t> train_rows;
        train_rows.reserve(m - (end - begin));
        for (std::size_t j = 0; j < m; ++j) {
            if (j < begin || j >= end) train_rows.push_back(member_rows[j]);
        }
        std::vector<double> y_train(train_rows.size());
        for (std::size_t j = 0; j < train_rows.size(); ++j) y_train[j] = y_all[train_rows[j]];

        learner::ForestConfig fc;
        fc.n_trees = cfg.learner.n_trees;
        fc.max_features = cfg.learner.attribute_policy;
        fc.seed = derive_seed(cfg.learner.seed, fold);
        const auto model = learner::RandomForest::fit(select_table_rows(x_all, train_rows),
                                                      y_train, learner::TaskKind::regression,
                                                      fc, 1);
        for (std::size_t j = begin; j < end; ++j) {
            pred[member_rows[j]] = model.predict_row(x_all.row(member_rows[j]));
        }
    }
    return pred;
}

void check_bank_schema(const std::vector<AttributeModelBank>& banks,
                       const std::vector<std::string>& attrs) {
    for (const auto& bank : banks) {
        if (bank.models.size() != attrs.size()) {
            throw AugmentError("bank '" + bank.suffix + "' holds " +
                               std::to_string(bank.models.size()) + " models but the table has " +
                               std::to_string(attrs.size()) + " attributes");
        }
        for (const auto& attr : attrs) {
            if (!bank.models.count(attr)) {
                throw AugmentError("bank '" + bank.suffix + "' has no model for attribute '" +
                                   attr + "'");
            }
        }
    }
}

}  // namespace

double residual_cell(double y_real, double y_predicted, double r2, Weighting weighting) {
    const double diff = std::abs(y_real - y_predicted);
    if (weighting == Weighting::faithful) {
        const double rounded = std::round(diff * 1e4) / 1e4;
        return rounded * r2 * r2;
    }
    const double clamped = std::clamp(r2, 0.0, 1.0);
    return diff * clamped * clamped;
}

std::vector<std::pair<double, FrameTable>> partition_by_target(const FrameTable& t,
                                                               const std::string& target) {
    const std::size_t target_col = t.column_index(target);

    std::set<double> values;
    for (std::size_t r = 0; r < t.n_rows(); ++r) values.insert(t.at(r, target_col));
    for (double v : values) {
        if (v != 0.0 && v != 1.0) {
            throw AugmentError("per-class mode requires a binary 0/1 target; found value " +
                               format_double(v) + " in '" + target + "'");
        }
    }
    if (values.size() < 2) {
        throw AugmentError("degenerate partition: target '" + target +
                           "' has a single class; both 0 and 1 must be present");
    }

    const FrameTable without_target = t.drop_columns({target});
    std::vector<std::pair<double, FrameTable>> parts;
    for (double v : values) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < t.n_rows(); ++r) {
            if (t.at(r, target_col) == v) rows.push_back(r);
        }
        parts.emplace_back(v, select_table_rows(without_target, rows));
    }
    return parts;
}

AttributeModelBank train_attribute_models(const FrameTable& partition, const AugmentConfig& cfg,
                                          double target_value, const std::string& suffix) {
    if (partition.n_rows() < 2) {
        throw AugmentError("partition '" + suffix + "' has fewer than 2 rows");
    }
    if (partition.n_cols() < 2) {
        throw AugmentError("partition '" + suffix + "' needs at least 2 columns");
    }

    AttributeModelBank bank;
    bank.target_value = target_value;
    bank.suffix = suffix;

    const auto& attrs = partition.column_names();
    std::vector<learner::RandomForest> models(attrs.size());
    std::vector<learner::ModelFitness> fits(attrs.size());

    parallel_for(attrs.size(), cfg.threads, [&](std::size_t a) {
        try {
            const FrameTable X = partition.drop_columns({attrs[a]});
            const std::vector<double> y = partition.column_values(a);
            const auto split = learner::train_test_split(X, y, cfg.learner.holdout_fraction,
                                                         cfg.learner.seed);
            learner::ForestConfig fc;
            fc.n_trees = cfg.learner.n_trees;
            fc.max_features = cfg.learner.attribute_policy;
            fc.seed = cfg.learner.seed;
            const auto model = learner::RandomForest::fit(
                split.X_train, split.y_train, learner::TaskKind::regression, fc, 1);
            fits[a] = learner::r_squared(split.y_test, model.predict(split.X_test));
            models[a] = model;
        } catch (const Error& e) {
            throw AugmentError("attribute '" + attrs[a] + "': " + e.what());
        }
    });

    for (std::size_t a = 0; a < attrs.size(); ++a) {
        bank.models.emplace(attrs[a], std::move(models[a]));
        bank.fitness.emplace(attrs[a], fits[a]);
    }
    return bank;
}

FrameTable residual_features(const FrameTable& t, const std::vector<AttributeModelBank>& banks,
                             const AugmentConfig& cfg) {
    if (banks.empty()) throw AugmentError("no banks supplied");
    const std::size_t target_col = t.column_index(cfg.target);
    const auto attrs = attribute_names(t, cfg.target);
    check_bank_schema(banks, attrs);

    // Member rows per bank, needed for the out-of-fold source.
    std::vector<std::vector<std::size_t>> member_rows(banks.size());
    if (cfg.residual_source == ResidualSource::out_of_fold) {
        for (std::size_t b = 0; b < banks.size(); ++b) {
            for (std::size_t r = 0; r < t.n_rows(); ++r) {
                if (banks[b].suffix == "new" || t.at(r, target_col) == banks[b].target_value) {
                    member_rows[b].push_back(r);
                }
            }
        }
    }

    const std::size_t n = t.n_rows();
    std::vector<std::vector<double>> cells(banks.size() * attrs.size());

    parallel_for(cells.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t b = task / attrs.size();
        const std::size_t a = task % attrs.size();
        const auto& bank = banks[b];
        const auto& attr = attrs[a];

        const FrameTable x_all = t.drop_columns({cfg.target, attr});
        const std::vector<double> y_real = t.column_values(attr);
        const std::vector<double> pred =
            cfg.residual_source == ResidualSource::in_sample
                ? bank.models.at(attr).predict(x_all)
                : out_of_fold_predictions(t, cfg.target, bank, attr, cfg, member_rows[b],
                                          x_all, y_real);

        const double r2 = bank.fitness.at(attr).r_squared;
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) {
            col[r] = residual_cell(y_real[r], pred[r], r2, cfg.weighting);
        }
        cells[task] = std::move(col);
    });

    // Classification interleaves banks per attribute; single-bank appends _new.
    std::vector<std::string> names;
    std::vector<const std::vector<double>*> ordered;
    names.reserve(cells.size());
    ordered.reserve(cells.size());
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        for (std::size_t b = 0; b < banks.size(); ++b) {
            names.push_back(attrs[a] + "_" + banks[b].suffix);
            ordered.push_back(&cells[b * attrs.size() + a]);
        }
    }
    std::unordered_set<std::string> existing(t.column_names().begin(), t.column_names().end());
    for (const auto& name : names) {
        if (existing.count(name)) {
            throw AugmentError("residual column name collides with an existing column: " + name);
        }
    }

    std::vector<double> data(n * names.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            data[r * names.size() + c] = (*ordered[c])[r];
        }
    }
    return FrameTable(std::move(names), std::move(data));
}

std::pair<FrameTable, std::vector<AttributeModelBank>> augment_dataset(const FrameTable& t,
                                                                       const AugmentConfig& cfg) {
    if (!t.has_column(cfg.target)) {
        throw AugmentError("target column '" + cfg.target + "' not found");
    }
    if (t.n_cols() < 2) {
        throw AugmentError("table has no attribute columns to model");
    }

    std::vector<AttributeModelBank> banks;
    if (cfg.mode == AugmentMode::per_class) {
        for (const auto& [value, part] : partition_by_target(t, cfg.target)) {
            banks.push_back(
                train_attribute_models(part, cfg, value, format_class_suffix(value)));
        }
    } else {
        banks.push_back(train_attribute_models(t.drop_columns({cfg.target}), cfg, 0.0, "new"));
    }

    const FrameTable residual_cols = residual_features(t, banks, cfg);

    std::vector<std::string> names(residual_cols.column_names());
    names.insert(names.end(), t.column_names().begin(), t.column_names().end());
    const std::size_t n = t.n_rows();
    std::vector<double> data;
    data.reserve(n * names.size());
    for (std::size_t r = 0; r < n; ++r) {
        auto new_row = residual_cols.row(r);
        auto old_row = t.row(r);
        data.insert(data.end(), new_row.begin(), new_row.end());
        data.insert(data.end(), old_row.begin(), old_row.end());
    }
    FrameTable out(std::move(names), std::move(data));
    out.validate();
    return {std::move(out), std::move(banks)};
}

RoundsResult iterate_rounds(const FrameTable& t, const AugmentConfig& cfg) {
    if (cfg.rounds < 1) throw AugmentError("rounds must be >= 1");

    RoundsResult result;
    result.table = t;
    for (int round = 1; round <= cfg.rounds; ++round) {
        auto [augmented, banks] = augment_dataset(result.table, cfg);
        result.table = std::move(augmented);
        result.final_banks = std::move(banks);
        const double ratio = static_cast<double>(result.table.n_rows()) /
                             static_cast<double>(result.table.n_cols());
        if (ratio < 10.0) {
            result.warnings.push_back(
                "rows/columns ratio " + format_double(ratio) + " is below 10 after round " +
                std::to_string(round) + " (" + std::to_string(result.table.n_rows()) + " rows, " +
                std::to_string(result.table.n_cols()) + " columns)");
        }
    }
    return result;
}

void save_banks(const std::vector<AttributeModelBank>& banks,
                const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw AugmentError("cannot open bank file for writing: " + path.string());
    auto write_u32 = [&](std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(b, 4);
    };
    write_u32(kBankMagic);
    write_u32(kBankVersion);
    write_u32(static_cast<std::uint32_t>(banks.size()));
    for (const auto& bank : banks) {
        write_u32(static_cast<std::uint32_t>(bank.suffix.size()));
        out.write(bank.suffix.data(), static_cast<std::streamsize>(bank.suffix.size()));
        out.write(reinterpret_cast<const char*>(&bank.target_value), 8);
        write_u32(static_cast<std::uint32_t>(bank.models.size()));
        for (const auto& [name, model] : bank.models) {
            write_u32(static_cast<std::uint32_t>(name.size()));
            out.write(name.data(), static_cast<std::streamsize>(name.size()));
            const auto& fit = bank.fitness.at(name);
            out.write(reinterpret_cast<const char*>(&fit.r_squared), 8);
            out.write(reinterpret_cast<const char*>(&fit.tss), 8);
            out.write(reinterpret_cast<const char*>(&fit.rss), 8);
            model.save(out);
        }
    }
    if (!out) throw AugmentError("bank write failed: " + path.string());
}

std::vector<AttributeModelBank> load_banks(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw AugmentError("cannot open bank file: " + path.string());
    auto read_u32 = [&]() {
        char b[4];
        if (!in.read(b, 4)) throw AugmentError("bank file truncated: " + path.string());
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        }
        return v;
    };
    auto read_f64 = [&]() {
        double v;
        if (!in.read(reinterpret_cast<char*>(&v), 8)) {
            throw AugmentError("bank file truncated: " + path.string());
        }
        return v;
    };
    if (read_u32() != kBankMagic) throw AugmentError("not a bank file: " + path.string());
    const std::uint32_t version = read_u32();
    if (version != kBankVersion) {
        throw AugmentError("unsupported bank file version " + std::to_string(version));
    }
    std::vector<AttributeModelBank> banks(read_u32());
    for (auto& bank : banks) {
        std::string suffix(read_u32(), '\0');
        if (!suffix.empty() && !in.read(suffix.data(), static_cast<std::streamsize>(suffix.size()))) {
            throw AugmentError("bank file truncated: " + path.string());
        }
        bank.suffix = std::move(suffix);
        bank.target_value = read_f64();
        const std::uint32_t n_models = read_u32();
        for (std::uint32_t i = 0; i < n_models; ++i) {
            std::string name(read_u32(), '\0');
            if (!name.empty() && !in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
                throw AugmentError("bank file truncated: " + path.string());
            }
            learner::ModelFitness fit;
            fit.r_squared = read_f64();
            fit.tss = read_f64();
            fit.rss = read_f64();
            bank.fitness.emplace(name, fit);
            bank.models.emplace(std::move(name), learner::RandomForest::load(in));
        }
    }
    return banks;
}

}  // namespace resaug::augment
