#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dca/analysis.hpp"
#include "dca/exact.hpp"
#include "dca/state.hpp"

namespace dca {

/// Shortest round-trip decimal form; identical input gives identical text.
std::string format_number(double value);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// `# key: value` lines.
void write_metadata(std::ostream& out, const Metadata& meta);

/// Columns x_center,c_i,f_eps, one row per cell.
void write_snapshot_csv(std::ostream& out, const State& state, const Metadata& meta);

/// Columns x,f_exact on `samples` + 1 uniform points of [0, x_max].
void write_exact_csv(std::ostream& out, const ExactCase& c, double t, double x_max, int samples, const Metadata& meta);

/// Columns t,M0,M1,M2,Y1,N_count,mass_defect_integral.
void write_moments_csv(std::ostream& out, const MomentSeries& series, const Metadata& meta);

/// One row of an error table; `failed` rows carry a reason and NaN errors.
struct ErrorTableRow {
  double epsilon = 0.0;
  double t = 0.0;
  double E1 = 0.0;
  /// Order fitted over this row and all earlier (coarser) rows.
  double order_cumulative = 0.0;
  bool failed = false;
  std::string reason;
};

/// Columns epsilon,t,E1,order_estimate_cumulative; failed rows get
/// `nan` values and a `# failed:` note above them.
void write_error_table_csv(std::ostream& out, const std::vector<ErrorTableRow>& rows, const Metadata& meta);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace dca
