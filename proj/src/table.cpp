#include "resaug/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "resaug/errors.hpp"

namespace resaug {

const RawColumn& RawTable::column(const std::string& name) const {
    for (const auto& c : columns) {
        if (c.name == name) return c;
    }
    throw IngestError("no such column: " + name);
}

bool RawTable::has_column(const std::string& name) const {
    return std::any_of(columns.begin(), columns.end(),
                       [&](const RawColumn& c) { return c.name == name; });
}

void RawTable::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns) {
        if (!seen.insert(c.name).second) {
            throw IngestError("duplicate column name: " + c.name);
        }
        if (c.text.size() != n_rows()) {
            throw IngestError("ragged column: " + c.name);
        }
        if (c.is_numeric && c.numeric.size() != c.text.size()) {
            throw IngestError("numeric column out of sync: " + c.name);
        }
    }
}

FrameTable::FrameTable(std::vector<std::string> column_names, std::vector<double> data)
    : column_names_(std::move(column_names)), data_(std::move(data)) {
    if (column_names_.empty()) {
        if (!data_.empty()) throw IngestError("data without columns");
        n_rows_ = 0;
        return;
    }
    if (data_.size() % column_names_.size() != 0) {
        throw IngestError("data size is not a multiple of the column count");
    }
    n_rows_ = data_.size() / column_names_.size();
}

std::size_t FrameTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < column_names_.size(); ++i) {
        if (column_names_[i] == name) return i;
    }
    throw IngestError("no such column: " + name);
}

bool FrameTable::has_column(const std::string& name) const {
    return std::find(column_names_.begin(), column_names_.end(), name) !=
           column_names_.end();
}

std::vector<double> FrameTable::column_values(std::size_t col) const {
    std::vector<double> out(n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) out[r] = at(r, col);
    return out;
}

std::vector<double> FrameTable::column_values(const std::string& name) const {
    return column_values(column_index(name));
}

FrameTable FrameTable::drop_columns(const std::vector<std::string>& names) const {
    for (const auto& n : names) column_index(n);  // fail early on unknown names
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < n_cols(); ++c) {
        if (std::find(names.begin(), names.end(), column_names_[c]) == names.end()) {
            keep.push_back(c);
        }
    }
    std::vector<std::string> out_names;
    out_names.reserve(keep.size());
    for (auto c : keep) out_names.push_back(column_names_[c]);
    std::vector<double> out_data;
    out_data.reserve(keep.size() * n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) {
        for (auto c : keep) out_data.push_back(at(r, c));
    }
    return FrameTable(std::move(out_names), std::move(out_data));
}

void FrameTable::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& n : column_names_) {
        if (!seen.insert(n).second) throw IngestError("duplicate column name: " + n);
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw IngestError("non-finite value in table");
    }
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv_string(const FrameTable& t) {
    std::string out;
    out.reserve(t.n_rows() * t.n_cols() * 8 + 256);
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        if (c) out += ',';
        out += t.column_names()[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        for (std::size_t c = 0; c < t.n_cols(); ++c) {
            if (c) out += ',';
            out += format_double(t.at(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_csv(const FrameTable& t, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IngestError("cannot open for writing: " + path.string());
    f << to_csv_string(t);
    if (!f) throw IngestError("write failed: " + path.string());
}

}  // namespace resaug
