#pragma once

#include <span>
#include <string>

namespace htdc {

/// Percentile with linear interpolation between closest ranks: the value at
/// fractional position p/100 * (n - 1) of the sorted sample. p in [0, 100].
double percentile(std::span<const double> values, double p);

/// Same convention on data that is already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);

double median(std::span<const double> values);

/// Shortest decimal representation that round-trips to the same double.
std::string format_number(double v);

}  // namespace htdc
