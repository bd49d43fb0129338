#include "csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "capi.hpp"

namespace qopt_cli {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (!row_start_) out_ += ',';
  row_start_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  out_ += format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  out_ += text;
  return *this;
}

void CsvWriter::end_row() {
  out_ += '\n';
  row_start_ = true;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JobError(QOPT_IO_ERROR, "cli", "read_csv", "cannot open " + path, "sinogram");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string item;
    if (table.header.empty()) {
      while (std::getline(ss, item, ',')) table.header.push_back(item);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
        throw JobError(QOPT_PARSE_ERROR, "cli", "read_csv",
                       path + ":" + std::to_string(line_no) + ": bad number '" + item + "'",
                       "sinogram");
      }
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw JobError(QOPT_PARSE_ERROR, "cli", "read_csv",
                     path + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(table.header.size()) + " columns",
                     "sinogram");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace qopt_cli
