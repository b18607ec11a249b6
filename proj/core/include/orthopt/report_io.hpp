#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "orthopt/report.hpp"

namespace orthopt {

/// JSON form of a run report. Timing fields (elapsed, wall_time) can be
/// omitted so that two runs with the same seed produce byte-identical output.
std::string to_json(const RunReport& report, bool include_timing = true);
RunReport run_report_from_json(const std::string& text);

std::string to_json(const ScalingReport& report);

/// Per-iteration trace as CSV with columns
/// iter,fval,kkt_abs,kkt_rel,feas,eta,time_ms; floats carry 17 significant
/// digits so parsing the file reproduces the exact bit patterns.
void write_trace_csv(const RunReport& report, std::ostream& out);

/// Summary header and one row per run for matrix studies.
void write_summary_header(std::ostream& out);
void write_summary_row(const RunReport& report, std::ostream& out);

void write_report_file(const RunReport& report, const std::string& path,
                       bool include_timing = true);
void write_trace_file(const RunReport& report, const std::string& path);
void write_scaling_file(const ScalingReport& report, const std::string& path);

/// Flat `key = value` configuration format with '#' comments; later keys win.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Equality on the full numerical content (bit-level on floats, timing
/// excluded) — the determinism comparison surface.
bool same_numerics(const RunReport& a, const RunReport& b);

}  // namespace orthopt
