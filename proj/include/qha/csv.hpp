#pragma once

// Small CSV reader/writer. Reals are written with 17 significant digits so that
// a read-back reproduces the double exactly.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qha/core_groups.hpp"
#include "qha/decay_profile.hpp"
#include "qha/errors.hpp"
#include "qha/zsequence.hpp"

namespace qha {

inline std::string format_real(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
  std::vector<std::string> comments;  // '#' lines, without the leading "# "
};

inline std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_line(const CsvRow& row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) s += ',';
    s += csv_quote(row[i]);
  }
  return s;
}

inline std::string render_csv(const CsvRow& header, const std::vector<CsvRow>& rows,
                              const std::optional<std::string>& comment = std::nullopt) {
  std::string out;
  if (comment) out += "# " + *comment + "\n";
  out += csv_line(header) + "\n";
  for (const auto& r : rows) {
    detail::require(r.size() == header.size(), "CSV record has " + std::to_string(r.size()) +
                                                   " fields, header has " + std::to_string(header.size()));
    out += csv_line(r) + "\n";
  }
  return out;
}

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void emit_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows,
                     const std::optional<std::string>& comment = std::nullopt) {
  const std::string text = render_csv(header, rows, comment);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot write '" + path + "'");
  f << text;
  if (!f) throw io_error("write failed for '" + path + "'");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.header.size())
        throw precondition_error("'" + path + "': row with " + std::to_string(cells.size()) + " fields, header has " +
                                 std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw precondition_error("'" + path + "': missing header");
  return t;
}

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw precondition_error("not a number: '" + s + "'");
  }
  if (used != s.size()) throw precondition_error("not a number: '" + s + "'");
  return v;
}

inline long parse_integer(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw precondition_error("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw precondition_error("not an integer: '" + s + "'");
  return v;
}

namespace detail {
// Columns (index, re[, im]) of a sample table; im defaults to 0.
inline std::vector<std::pair<long, cd>> read_samples(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header.size() > 3)
    throw precondition_error("'" + path + "': expected columns index,re[,im]");
  std::vector<std::pair<long, cd>> out;
  for (const auto& r : t.rows) {
    const double im = r.size() == 3 ? parse_real(r[2]) : 0.0;
    out.emplace_back(parse_integer(r[0]), cd(parse_real(r[1]), im));
  }
  return out;
}
}  // namespace detail

/// Function on a finite group from an `index,re,im` table (missing indices are 0).
inline GroupFunction read_group_function(const std::string& path, const FiniteAbelianGroup& g) {
  std::vector<cd> v(g.cardinality(), 0.0);
  for (const auto& [i, c] : detail::read_samples(path)) {
    if (i < 0 || static_cast<std::size_t>(i) >= g.cardinality())
      throw precondition_error("'" + path + "': index " + std::to_string(i) + " outside the group");
    v[static_cast<std::size_t>(i)] = c;
  }
  return GroupFunction(g, std::move(v));
}

inline std::vector<CsvRow> group_function_rows(const GroupFunction& f) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < f.size(); ++i)
    rows.push_back({std::to_string(i), format_real(f[i].real()), format_real(f[i].imag())});
  return rows;
}

/// Sequence on Z from a `t,re,im` table; the window spans the smallest to largest t.
inline ZSequence read_zsequence(const std::string& path) {
  const auto samples = detail::read_samples(path);
  if (samples.empty()) throw precondition_error("'" + path + "': no samples");
  long lo = samples.front().first, hi = lo;
  for (const auto& s : samples) {
    lo = std::min(lo, s.first);
    hi = std::max(hi, s.first);
  }
  ZSequence z = ZSequence::zeros(lo, hi);
  for (const auto& [t, c] : samples) z.set(t, c);
  return z;
}

inline std::vector<CsvRow> profile_rows(const DecayProfile& p, bool integral_params = false) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < p.size(); ++i)
    rows.push_back({integral_params ? std::to_string(static_cast<long>(p.params()[i])) : format_real(p.params()[i]),
                    format_real(p.values()[i])});
  return rows;
}

}  // namespace qha
