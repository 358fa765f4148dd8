#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "resaug/table.hpp"

namespace resaug::ingest {

// Downloads a zip archive, extracts one member and caches it at cache_path.
// A populated cache short-circuits the network entirely.
std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& cache_path,
                                    const std::string& zip_member);

// Header-line CSV with optional double-quote quoting. Cells that parse as
// numbers make a column numeric only when every cell in it does.
RawTable load_csv(const std::filesystem::path& path, char separator = ';');
RawTable load_csv_text(const std::string& content, char separator,
                       const std::string& origin);

// floor(fraction * n_rows) rows drawn without replacement; output rows appear
// in draw order, which doubles as the seeded shuffle the rest of the
// pipeline relies on.
RawTable sample_rows(const RawTable& t, double fraction, std::uint64_t seed);

// Keeps the first occurrence of each fully identical row.
RawTable drop_duplicates(const RawTable& t);

// Removes rows containing an empty cell or any configured sentinel.
RawTable drop_missing(const RawTable& t,
                      const std::vector<std::string>& missing_tokens = {""});

// Numeric columns pass through; a categorical column with k distinct values
// becomes k 0/1 indicator columns named <col>_<value>, sorted by value text,
// in the position of the source column.
FrameTable one_hot_encode(const RawTable& t);

// (x - mean) / population stddev per column; zero-variance columns divide by
// a fallback of 1 and therefore map to all zeros.
std::pair<FrameTable, ScalerParams> standardize(const FrameTable& t);

// Values strictly above the column minimum become 1, the rest 0.
FrameTable binarize_target(const FrameTable& t, const std::string& target);

}  // namespace resaug::ingest
