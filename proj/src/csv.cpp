#include "mxpbf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mxpbf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty()) lines.push_back(line);
    }
    return lines;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

DataMatrix load_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("'" + path + "' contains no data");

    auto first_cells = split_line(lines[0]);
    bool has_header = false;
    for (const auto& cell : first_cells) {
        double v;
        if (!parse_double(cell, v)) {
            has_header = true;
            break;
        }
    }

    std::size_t start = has_header ? 1 : 0;
    if (lines.size() <= start) throw ParseError("'" + path + "' has a header but no data rows");

    auto p = static_cast<index_t>(split_line(lines[start]).size());
    auto n = static_cast<index_t>(lines.size() - start);
    if (n < 2) throw ParseError("'" + path + "' needs at least 2 observation rows");
    if (p < 1) throw ParseError("'" + path + "' has no columns");

    DataMatrix data(n, p);
    for (index_t r = 0; r < n; ++r) {
        auto cells = split_line(lines[start + static_cast<std::size_t>(r)]);
        if (static_cast<index_t>(cells.size()) != p) {
            throw NonRectangular("row " + std::to_string(r + 1) + " of '" + path + "' has " +
                                 std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(p));
        }
        for (index_t c = 0; c < p; ++c) {
            double v;
            if (!parse_double(cells[static_cast<std::size_t>(c)], v)) {
                throw ParseError("cannot parse cell at row " + std::to_string(r + 1) + ", column " +
                                 std::to_string(c + 1) + " of '" + path + "': '" +
                                 cells[static_cast<std::size_t>(c)] + "'");
            }
            if (!std::isfinite(v)) {
                throw NonFinite("non-finite value at row " + std::to_string(r + 1) + ", column " +
                                std::to_string(c + 1) + " of '" + path + "'");
            }
            data.at(r, c) = v;
        }
    }
    return data;
}

void save_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (index_t j = 0; j < data.cols(); ++j) {
        if (j > 0) out << ',';
        out << "col_" << (j + 1);
    }
    out << '\n';
    for (index_t i = 0; i < data.rows(); ++i) {
        for (index_t j = 0; j < data.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(data.at(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<index_t> load_locations(const std::string& path) {
    auto lines = read_lines(path);
    std::vector<index_t> locations;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        std::string cell = trim(lines[r]);
        double v;
        if (!parse_double(cell, v)) {
            if (r == 0) continue;   // header
            throw ParseError("cannot parse location at row " + std::to_string(r + 1) + " of '" +
                             path + "': '" + cell + "'");
        }
        if (!std::isfinite(v) || v != std::floor(v)) {
            throw ParseError("location at row " + std::to_string(r + 1) + " of '" + path +
                             "' is not an integer");
        }
        locations.push_back(static_cast<index_t>(v));
    }
    std::sort(locations.begin(), locations.end());
    return locations;
}

void save_locations(const std::vector<index_t>& locations, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "location\n";
    for (index_t loc : locations) out << loc << '\n';
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void save_profile_csv(const std::vector<index_t>& centers, const std::vector<double>& values,
                      const std::string& path) {
    if (centers.size() != values.size()) throw DataError("profile centers/values size mismatch");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "center,log_mxpbf\n";
    for (std::size_t k = 0; k < centers.size(); ++k) {
        out << centers[k] << ',' << format_double(values[k]) << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<index_t> scale_mad(DataMatrix& data) {
    std::vector<index_t> unscaled;
    std::vector<double> scratch(static_cast<std::size_t>(data.rows()));
    auto median_of = [&](std::vector<double>& v) {
        std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        double hi = v[mid];
        if (v.size() % 2 == 1) return hi;
        double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        return 0.5 * (lo + hi);
    };
    for (index_t j = 0; j < data.cols(); ++j) {
        auto col = data.column(j);
        std::copy(col.begin(), col.end(), scratch.begin());
        double med = median_of(scratch);
        for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = std::abs(col[i] - med);
        double mad = median_of(scratch);
        if (mad == 0.0) {
            unscaled.push_back(j + 1);
            continue;
        }
        double scale = 1.4826 * mad;
        for (auto& v : col) v /= scale;
    }
    return unscaled;
}

} // namespace mxpbf
