#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "htdc/dataset.hpp"

namespace htdc {

/// Reads a comma-separated file with a header row. Recognized special
/// columns (case-insensitive, surrounding whitespace ignored):
///   ATT_FLAG            -> labels (0/1; the BATADAL code -999 reads as 0)
///   DATETIME/TIMESTAMP  -> timestamps, either integer hour indices or
///                          "dd/mm/yy HH" date-hours
/// Every other column must hold finite decimals. Errors name the file row.
DatasetFrame load_csv(const std::filesystem::path& path);
DatasetFrame parse_csv(std::istream& in, std::string_view source_name = "<stream>");

/// Writes "timestamp,<features...>[,ATT_FLAG]" with round-trip decimals.
void write_csv(const DatasetFrame& frame, std::ostream& out);
void write_csv(const DatasetFrame& frame, const std::filesystem::path& path);

/// Splits one CSV line on commas, trimming whitespace and a trailing CR.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace htdc
