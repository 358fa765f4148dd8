#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace resaug {

// Column of raw CSV data. A column is numeric when every cell parses as a
// number; otherwise all cells are kept as categorical text.
struct RawColumn {
    std::string name;
    std::vector<std::string> text;   // original cell text, always populated
    std::vector<double> numeric;     // parsed values, valid when is_numeric
    bool is_numeric = false;
};

// Pre-encoding table: mixed numeric/categorical columns of equal length.
struct RawTable {
    std::vector<RawColumn> columns;

    std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().text.size(); }
    std::size_t n_cols() const { return columns.size(); }
    const RawColumn& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    void validate() const;  // equal lengths, unique names
};

// Dense numeric table, row-major. The universal representation once all
// columns are numeric (post one-hot).
class FrameTable {
public:
    FrameTable() = default;
    FrameTable(std::vector<std::string> column_names, std::vector<double> data);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return column_names_.size(); }
    const std::vector<std::string>& column_names() const { return column_names_; }

    double at(std::size_t row, std::size_t col) const { return data_[row * n_cols() + col]; }
    double& at(std::size_t row, std::size_t col) { return data_[row * n_cols() + col]; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * n_cols(), n_cols()};
    }
    const std::vector<double>& data() const { return data_; }

    std::size_t column_index(const std::string& name) const;   // throws if absent
    bool has_column(const std::string& name) const;
    std::vector<double> column_values(std::size_t col) const;
    std::vector<double> column_values(const std::string& name) const;

    // Copy without the named columns; preserves relative order of the rest.
    FrameTable drop_columns(const std::vector<std::string>& names) const;

    // Verifies rectangular shape, unique names and finite values.
    void validate() const;

private:
    std::vector<std::string> column_names_;
    std::vector<double> data_;
    std::size_t n_rows_ = 0;
};

struct ColumnScale {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;  // population stddev as computed; 0 allowed
};

struct ScalerParams {
    std::vector<ColumnScale> columns;
};

// CSV with '.' decimal point and round-trip-exact doubles.
void write_csv(const FrameTable& t, const std::filesystem::path& path);
std::string to_csv_string(const FrameTable& t);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

}  // namespace resaug
