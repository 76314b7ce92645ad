#pragma once

#include "invsim/domain.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace invsim {

/// Daily demand per product, as read from `day,<id1>,<id2>,...`.
struct DemandHistory {
    std::vector<std::string> ids;
    std::vector<std::vector<Units>> columns;  // columns[k] belongs to ids[k]

    std::size_t days() const { return columns.empty() ? 0 : columns.front().size(); }
    const std::vector<Units>* find(const std::string& id) const;
};

/// Throws DataError with "<source>:<line>: ..." for malformed rows, non-integer
/// or negative demand, and "no observations" for an empty table.
DemandHistory parse_history_csv(std::istream& in, const std::string& source = "history");
DemandHistory read_history_csv(const std::filesystem::path& path);
std::string history_to_csv(const DemandHistory& history);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

}  // namespace invsim
