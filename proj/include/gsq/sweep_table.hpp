#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gsq/error.hpp"
#include "json.hpp"

namespace gsq {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

inline double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::invalid_argument,
          "malformed number '" + std::string(text) + "'");
  return value;
}

/// Named, equal-length real columns plus a JSON metadata blob. Rows that are
/// dynamically unstable carry a 0 in a flag column; their unbounded entries are
/// written as "inf".
class SweepTable {
 public:
  void add_column(std::string name, std::vector<double> values) {
    require(columns_.empty() || values.size() == rows(), ErrorCode::dimension_mismatch,
            "column '" + name + "' has a different length");
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
  }

  std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const { return columns_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool has_column(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
  }

  const std::vector<double>& column(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    require(it != names_.end(), ErrorCode::invalid_argument, "no column '" + std::string(name) + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
  }

  /// NaN is never a valid payload; infinities are allowed only in rows whose
  /// `flag_column` entry is 0.
  void validate(std::string_view flag_column = "stable") const {
    const std::vector<double>* flags = has_column(flag_column) ? &column(flag_column) : nullptr;
    for (std::size_t c = 0; c < cols(); ++c) {
      for (std::size_t r = 0; r < rows(); ++r) {
        const double v = columns_[c][r];
        require(!std::isnan(v), ErrorCode::consistency_failure, "NaN in column '" + names_[c] + "'");
        if (flags != nullptr && (*flags)[r] != 0.0) {
          require(std::isfinite(v), ErrorCode::consistency_failure,
                  "non-finite value in stable row of column '" + names_[c] + "'");
        }
      }
    }
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < cols(); ++c) os << (c ? "," : "") << names_[c];
    os << '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols(); ++c) os << (c ? "," : "") << format_number(columns_[c][r]);
      os << '\n';
    }
  }

  std::string to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
  }

  static SweepTable read_csv(std::istream& is) {
    auto split = [](const std::string& line) {
      std::vector<std::string> out;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) out.push_back(cell);
      return out;
    };
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), ErrorCode::invalid_argument, "empty CSV");
    const std::vector<std::string> header = split(line);
    std::vector<std::vector<double>> data(header.size());
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> cells = split(line);
      require(cells.size() == header.size(), ErrorCode::dimension_mismatch, "ragged CSV row");
      for (std::size_t c = 0; c < cells.size(); ++c) data[c].push_back(parse_number(cells[c]));
    }
    SweepTable table;
    for (std::size_t c = 0; c < header.size(); ++c) table.add_column(header[c], std::move(data[c]));
    return table;
  }

  nlohmann::json metadata = nlohmann::json::object();

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace gsq
