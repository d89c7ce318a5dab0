#pragma once

#include <string>
#include <vector>

#include "mxpbf/types.hpp"

namespace mxpbf {

// Rectangular numeric CSV (UTF-8, comma separated, '.' decimal), rows =
// observations. A single header row is auto-detected when the first row is
// non-numeric. Errors name the offending row/cell.
DataMatrix load_csv(const std::string& path);

// Writes with a col_1..col_p header; numbers use shortest round-trip form.
void save_csv(const DataMatrix& data, const std::string& path);

// Single-column location file (optional header), used for ground truth.
std::vector<index_t> load_locations(const std::string& path);
void save_locations(const std::vector<index_t>& locations, const std::string& path);

// Two-column per-center profile subreport for external figure tooling.
void save_profile_csv(const std::vector<index_t>& centers, const std::vector<double>& values,
                      const std::string& path);

// Divides each column by 1.4826 * MAD about its median, in place. Columns
// with zero MAD are left unscaled; their 1-based indices are returned so the
// caller can warn.
std::vector<index_t> scale_mad(DataMatrix& data);

} // namespace mxpbf
