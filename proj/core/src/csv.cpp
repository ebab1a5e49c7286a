#include "htdc/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "htdc/errors.hpp"
#include "htdc/percentile.hpp"

namespace htdc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

// "dd/mm/yy HH" -> hours since 1970-01-01 00:00.
std::optional<std::int64_t> parse_date_hour(std::string_view s) {
  int d = 0, m = 0, y = 0, h = 0;
  char tail = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%d/%d/%d %d%c", &d, &m, &y, &h, &tail) != 4) return std::nullopt;
  if (y < 100) y += 2000;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 24 + h;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw IngestionError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.emplace_back(trim(cell));
  return cells;
}

DatasetFrame parse_csv(std::istream& in, std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw IngestionError(std::string(source_name) + ": missing header row");

  std::optional<std::size_t> label_col;
  std::optional<std::size_t> time_col;
  std::vector<std::size_t> feature_cols;
  DatasetFrame frame;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string key = upper(header[c]);
    if (key == "ATT_FLAG") {
      label_col = c;
    } else if (key == "DATETIME" || key == "TIMESTAMP") {
      time_col = c;
    } else {
      if (header[c].empty()) fail(source_name, line_no, "empty column name in header");
      feature_cols.push_back(c);
      frame.feature_names.push_back(header[c]);
    }
  }

  std::vector<double> data;
  std::vector<int> labels;
  std::vector<std::int64_t> stamps;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(source_name, line_no,
           "expected " + std::to_string(header.size()) + " cells, found " +
               std::to_string(cells.size()));
    }
    for (std::size_t c : feature_cols) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        fail(source_name, line_no, "column '" + header[c] + "': not a finite number: '" +
                                       cells[c] + "'");
      }
      data.push_back(*v);
    }
    if (label_col) {
      const auto v = parse_double(cells[*label_col]);
      if (!v) fail(source_name, line_no, "unparseable ATT_FLAG '" + cells[*label_col] + "'");
      if (*v == 1.0) {
        labels.push_back(1);
      } else if (*v == 0.0 || *v == -999.0) {
        labels.push_back(0);
      } else {
        fail(source_name, line_no, "ATT_FLAG must be 0 or 1, got '" + cells[*label_col] + "'");
      }
    }
    if (time_col) {
      const auto& cell = cells[*time_col];
      auto t = parse_int(cell);
      if (!t) t = parse_date_hour(cell);
      if (!t) fail(source_name, line_no, "unparseable timestamp '" + cell + "'");
      stamps.push_back(*t);
    }
    ++rows;
  }

  frame.values = Matrix(rows, feature_cols.size(), std::move(data));
  if (time_col) {
    frame.timestamps = std::move(stamps);
  } else {
    frame.timestamps.resize(rows);
    std::iota(frame.timestamps.begin(), frame.timestamps.end(), std::int64_t{0});
  }
  if (label_col) frame.labels = std::move(labels);
  try {
    frame.validate();
  } catch (const IngestionError& e) {
    throw IngestionError(std::string(source_name) + ": " + e.what());
  }
  return frame;
}

DatasetFrame load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  return parse_csv(in, path.string());
}

void write_csv(const DatasetFrame& frame, std::ostream& out) {
  out << "timestamp";
  for (const auto& n : frame.feature_names) out << ',' << n;
  if (frame.labels) out << ",ATT_FLAG";
  out << '\n';
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out << frame.timestamps[r];
    for (double v : frame.values.row(r)) out << ',' << format_number(v);
    if (frame.labels) out << ',' << (*frame.labels)[r];
    out << '\n';
  }
}

void write_csv(const DatasetFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write '" + path.string() + "'");
  write_csv(frame, out);
}

}  // namespace htdc
