#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "resaug/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "resaug/errors.hpp"
#include "resaug/rng.hpp"
#include "zip_reader.hpp"

namespace resaug::ingest {
namespace {

bool parse_double_strict(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end) return false;
    return std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IngestError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Splits one CSV record. Fields may be wrapped in double quotes; a doubled
// quote inside a quoted field is an escaped quote.
std::vector<std::string> split_record(const std::string& line, char sep,
                                      std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && cur.empty()) {
            in_quotes = true;
        } else if (ch == sep) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (in_quotes) {
        throw IngestError("parse error at line " + std::to_string(line_no) +
                          ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

void refresh_numeric(RawColumn& col) {
    col.numeric.clear();
    col.numeric.reserve(col.text.size());
    for (const auto& cell : col.text) {
        double v;
        if (!parse_double_strict(cell, v)) {
            col.numeric.clear();
            col.is_numeric = false;
            return;
        }
        col.numeric.push_back(v);
    }
    col.is_numeric = !col.text.empty();
}

RawTable select_rows(const RawTable& t, const std::vector<std::size_t>& rows) {
    RawTable out;
    out.columns.reserve(t.columns.size());
    for (const auto& c : t.columns) {
        RawColumn oc;
        oc.name = c.name;
        oc.is_numeric = c.is_numeric;
        oc.text.reserve(rows.size());
        if (c.is_numeric) oc.numeric.reserve(rows.size());
        for (auto r : rows) {
            oc.text.push_back(c.text[r]);
            if (c.is_numeric) oc.numeric.push_back(c.numeric[r]);
        }
        out.columns.push_back(std::move(oc));
    }
    return out;
}

}  // namespace

RawTable load_csv_text(const std::string& content, char separator,
                       const std::string& origin) {
    if (content.empty()) throw IngestError("format error: empty file: " + origin);

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t nl = content.find('\n', start);
        if (nl == std::string::npos) nl = content.size();
        std::string line = content.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
        if (nl == content.size()) break;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw IngestError("format error: no header line: " + origin);

    const auto header = split_record(lines[0], separator, 1);
    RawTable t;
    t.columns.resize(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) t.columns[c].name = header[c];

    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto fields = split_record(lines[i], separator, i + 1);
        if (fields.size() != header.size()) {
            throw IngestError("parse error at line " + std::to_string(i + 1) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            t.columns[c].text.push_back(std::move(fields[c]));
        }
    }
    for (auto& col : t.columns) refresh_numeric(col);
    t.validate();
    return t;
}

RawTable load_csv(const std::filesystem::path& path, char separator) {
    return load_csv_text(read_file(path), separator, path.string());
}

std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& cache_path,
                                    const std::string& zip_member) {
    namespace fs = std::filesystem;
    if (fs::exists(cache_path) && fs::file_size(cache_path) > 0) {
        return cache_path;
    }

    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw IngestError("fetch error: unsupported url: " + url);
    }
    const std::string scheme = url.substr(0, scheme_end);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string host_port = path_start == std::string::npos
                                      ? url.substr(scheme_end + 3)
                                      : url.substr(scheme_end + 3, path_start - scheme_end - 3);
    const std::string request_path =
        path_start == std::string::npos ? "/" : url.substr(path_start);
    if (scheme != "http" && scheme != "https") {
        throw IngestError("fetch error: unsupported scheme: " + scheme);
    }

    httplib::Client client((scheme + "://" + host_port).c_str());
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);

    auto res = client.Get(request_path.c_str());
    if (!res) {
        throw IngestError("fetch error: " + url + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw IngestError("fetch error: " + url + ": HTTP " + std::to_string(res->status));
    }

    const std::string member = extract_zip_member(res->body, zip_member);

    fs::create_directories(cache_path.parent_path().empty() ? fs::path(".")
                                                            : cache_path.parent_path());
    const fs::path tmp = cache_path.string() + ".part";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IngestError("cannot write cache file: " + tmp.string());
        f.write(member.data(), static_cast<std::streamsize>(member.size()));
    }
    fs::rename(tmp, cache_path);
    return cache_path;
}

RawTable sample_rows(const RawTable& t, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw IngestError("sample fraction must be in (0, 1]");
    }
    const std::size_t n = t.n_rows();
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed);
    // Partial Fisher-Yates; the first k entries are the draw, in draw order.
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return select_rows(t, idx);
}

RawTable drop_duplicates(const RawTable& t) {
    std::vector<std::size_t> keep;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        std::string key;
        for (const auto& c : t.columns) {
            if (c.is_numeric) {
                double v = c.numeric[r];
                char bits[sizeof(double)];
                std::memcpy(bits, &v, sizeof(double));
                key.append(bits, sizeof(double));
            } else {
                key += c.text[r];
            }
            key += '\x1f';
        }
        if (seen.insert(std::move(key)).second) keep.push_back(r);
    }
    return select_rows(t, keep);
}

RawTable drop_missing(const RawTable& t, const std::vector<std::string>& missing_tokens) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        bool missing = false;
        for (const auto& c : t.columns) {
            for (const auto& token : missing_tokens) {
                if (c.text[r] == token) {
                    missing = true;
                    break;
                }
            }
            if (missing) break;
        }
        if (!missing) keep.push_back(r);
    }
    return select_rows(t, keep);
}

FrameTable one_hot_encode(const RawTable& t) {
    t.validate();
    struct OutCol {
        std::string name;
        const RawColumn* src;
        std::string level;  // empty for numeric pass-through
    };
    std::vector<OutCol> out_cols;
    for (const auto& c : t.columns) {
        if (c.is_numeric) {
            out_cols.push_back({c.name, &c, {}});
        } else {
            std::vector<std::string> levels(c.text.begin(), c.text.end());
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            for (auto& lvl : levels) {
                out_cols.push_back({c.name + "_" + lvl, &c, lvl});
            }
        }
    }

    const std::size_t n = t.n_rows();
    std::vector<std::string> names;
    names.reserve(out_cols.size());
    for (const auto& oc : out_cols) names.push_back(oc.name);
    std::vector<double> data(n * out_cols.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < out_cols.size(); ++c) {
            const auto& oc = out_cols[c];
            data[r * out_cols.size() + c] =
                oc.src->is_numeric ? oc.src->numeric[r]
                                   : (oc.src->text[r] == oc.level ? 1.0 : 0.0);
        }
    }
    FrameTable ft(std::move(names), std::move(data));
    ft.validate();
    return ft;
}

std::pair<FrameTable, ScalerParams> standardize(const FrameTable& t) {
    if (t.n_rows() == 0) throw IngestError("cannot standardize an empty table");
    const std::size_t n = t.n_rows(), p = t.n_cols();
    ScalerParams params;
    params.columns.resize(p);
    std::vector<double> data(t.data());

    for (std::size_t c = 0; c < p; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += t.at(r, c);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = t.at(r, c) - mean;
            ss += d * d;
        }
        const double stddev = std::sqrt(ss / static_cast<double>(n));
        params.columns[c] = {t.column_names()[c], mean, stddev};
        const double divisor = stddev == 0.0 ? 1.0 : stddev;
        for (std::size_t r = 0; r < n; ++r) {
            data[r * p + c] = (t.at(r, c) - mean) / divisor;
        }
    }
    return {FrameTable(t.column_names(), std::move(data)), std::move(params)};
}

FrameTable binarize_target(const FrameTable& t, const std::string& target) {
    const std::size_t col = t.column_index(target);
    if (t.n_rows() == 0) throw IngestError("cannot binarize an empty table");
    double min_v = t.at(0, col);
    for (std::size_t r = 1; r < t.n_rows(); ++r) min_v = std::min(min_v, t.at(r, col));

    std::vector<double> data(t.data());
    const std::size_t p = t.n_cols();
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        data[r * p + col] = t.at(r, col) > min_v ? 1.0 : 0.0;
    }
    return FrameTable(t.column_names(), std::move(data));
}

}  // namespace resaug::ingest
