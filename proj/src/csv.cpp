#include "dca/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace dca {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

void write_snapshot_csv(std::ostream& out, const State& state, const Metadata& meta) {
  write_metadata(out, meta);
  out << "x_center,c_i,f_eps\n";
  const Grid& g = state.grid;
  // f_eps is c_i on cell i; both columns are kept so plots need no grid logic.
  for (Index i = 1; i <= g.size(); ++i) {
    const std::string v = format_number(state.c(i - 1));
    out << format_number(g.center(i)) << ',' << v << ',' << v << '\n';
  }
}

void write_exact_csv(std::ostream& out, const ExactCase& c, double t, double x_max, int samples, const Metadata& meta) {
  write_metadata(out, meta);
  out << "x,f_exact\n";
  for (int k = 0; k <= samples; ++k) {
    const double x = x_max * k / samples;
    out << format_number(x) << ',' << format_number(*exact_solution(c, t, x)) << '\n';
  }
}

void write_moments_csv(std::ostream& out, const MomentSeries& s, const Metadata& meta) {
  write_metadata(out, meta);
  out << "t,M0,M1,M2,Y1,N_count,mass_defect_integral\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << format_number(s.times[k]) << ',' << format_number(s.M0[k]) << ',' << format_number(s.M1[k]) << ','
        << format_number(s.M2[k]) << ',' << format_number(s.Y1[k]) << ',' << format_number(s.N_count[k]) << ','
        << format_number(s.mass_defect_integral[k]) << '\n';
  }
}

void write_error_table_csv(std::ostream& out, const std::vector<ErrorTableRow>& rows, const Metadata& meta) {
  write_metadata(out, meta);
  out << "epsilon,t,E1,order_estimate_cumulative\n";
  for (const auto& r : rows) {
    if (r.failed) {
      out << "# failed: epsilon " << format_number(r.epsilon) << ": " << r.reason << '\n';
      out << format_number(r.epsilon) << ',' << format_number(r.t) << ",nan,nan\n";
      continue;
    }
    out << format_number(r.epsilon) << ',' << format_number(r.t) << ',' << format_number(r.E1) << ','
        << format_number(r.order_cumulative) << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace dca
