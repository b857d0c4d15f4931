#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace subflow::io {

/// Shortest round-trippable decimal form (printf %.17g).
std::string format_g17(double x);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Write `# key=value` metadata lines, a header row, then data columns.
/// All numeric cells go through format_g17; rows end with '\n'.
void write_csv(std::ostream& os, const Metadata& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Read back a csv written by write_csv (metadata ignored), returning
/// columns in file order. Throws ParseError with the offending line.
std::vector<std::vector<double>> read_csv_columns(const std::string& path,
                                                  std::vector<std::string>* header = nullptr);

} // namespace subflow::io
