#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qopt_cli {

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::string_view text);
  void end_row();

  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  bool row_start_ = true;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with one header row.
CsvTable read_csv(const std::string& path);

}  // namespace qopt_cli
