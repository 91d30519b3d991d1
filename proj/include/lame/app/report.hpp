#pragma once

// Report writers. The CSV starts with one "# generated <UTC timestamp>" line;
// everything after it depends only on the records, so two runs with the same
// configuration differ in that line alone.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lame/estimates.hpp"

namespace lame::app {

inline constexpr const char* kCsvHeader =
    "estimate,n,N,L_side,lambda,mu,delta,potential,p,q,r,sigma,lhs,rhs,ratio,ceiling,pass";

/// Label written in the estimate column: name, or name/family when a data
/// family is attached.
std::string record_label(const EstimateRecord& r);

std::string csv_row(const EstimateRecord& r);
std::string to_csv(std::span<const EstimateRecord> records, const std::string& timestamp);
std::string to_json(std::span<const EstimateRecord> records, const std::string& timestamp);

std::string utc_timestamp();

/// Writes `path` (CSV) and `path` with extension .json next to it.
void write_report(const std::filesystem::path& path, std::span<const EstimateRecord> records);

/// One curve of a sweep plot.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot of y against x; the plotted numbers are embedded as a comment.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     std::span<const Series> series, bool log_y);

}  // namespace lame::app
