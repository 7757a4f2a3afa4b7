#pragma once

// runs.csv / cells.csv reading and writing. Numbers are written in the
// shortest form that parses back to the same double, so files re-read by
// the report command reproduce the in-memory aggregates exactly.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/harness.hpp"

namespace ratio_bandits {

inline constexpr std::string_view kRunsHeader =
    "env_kind,d,K,sigma,T,policy,m,run_id,final_regret,skipped_flag";
inline constexpr std::string_view kCellsHeader =
    "env_kind,d,K,sigma,T,policy,mean_pct_of_ts,ci95_halfwidth,n_runs,n_skipped";

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Inverse of PolicyConfig::label().
inline PolicyConfig parse_policy_label(const std::string& label) {
  PolicyConfig p;
  const auto open = label.find('(');
  p.kind = parse_policy_kind(label.substr(0, open));
  if (open != std::string::npos) {
    const auto close = label.find(')', open);
    if (close == std::string::npos || close + 1 != label.size())
      throw InvalidArgument("malformed policy label '" + label + "'");
    std::size_t n = 0;
    const auto* first = label.data() + open + 1;
    const auto* last = label.data() + close;
    const auto res = std::from_chars(first, last, n);
    if (res.ec != std::errc{} || res.ptr != last)
      throw InvalidArgument("malformed policy label '" + label + "'");
    if (p.kind == PolicyKind::TSUCB)
      p.m = n;
    else if (p.kind == PolicyKind::IDS)
      p.ids_samples = n;
    else
      throw InvalidArgument("policy '" + label + "' takes no parameter");
  }
  p.validate();
  return p;
}

inline void write_runs_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << kRunsHeader << '\n';
  for (const auto& r : results)
    out << to_string(r.env.kind) << ',' << r.env.reported_d() << ',' << r.env.K << ','
        << format_double(r.env.reported_sigma()) << ',' << r.T << ',' << r.policy.label() << ','
        << r.policy.samples_per_step() << ',' << r.run_id << ','
        << format_double(r.final_regret) << ',' << (r.skipped ? 1 : 0) << '\n';
}

inline void write_cells_csv(std::ostream& out, const std::vector<RelativeRegretCell>& cells) {
  out << kCellsHeader << '\n';
  for (const auto& c : cells)
    out << to_string(c.env.kind) << ',' << c.env.reported_d() << ',' << c.env.K << ','
        << format_double(c.env.reported_sigma()) << ',' << c.T << ',' << c.policy.label() << ','
        << format_double(c.mean_pct_of_ts) << ',' << format_double(c.ci95_halfwidth) << ','
        << c.n_runs << ',' << c.n_skipped << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

template <class T>
T parse_number(const std::string& text, std::size_t row, const char* column) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != last)
    throw CsvError(row, std::string("bad value '") + text + "' in column " + column);
  return value;
}

}  // namespace detail

/// Parses runs.csv. Rows are numbered from 1 at the header.
inline std::vector<RunResult> read_runs_csv(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw CsvError(row, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRunsHeader) throw CsvError(row, "unexpected header '" + line + "'");
  std::vector<RunResult> out;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 10)
      throw CsvError(row, "expected 10 fields, got " + std::to_string(f.size()));
    RunResult r;
    try {
      r.env.kind = parse_env_kind(f[0]);
    } catch (const std::exception& e) {
      throw CsvError(row, e.what());
    }
    r.env.d = detail::parse_number<std::size_t>(f[1], row, "d");
    r.env.K = detail::parse_number<std::size_t>(f[2], row, "K");
    r.env.sigma = detail::parse_number<double>(f[3], row, "sigma");
    r.T = detail::parse_number<std::uint64_t>(f[4], row, "T");
    try {
      r.policy = parse_policy_label(f[5]);
    } catch (const std::exception& e) {
      throw CsvError(row, e.what());
    }
    const auto m = detail::parse_number<std::size_t>(f[6], row, "m");
    if (m != r.policy.samples_per_step())
      throw CsvError(row, "column m disagrees with policy " + f[5]);
    r.run_id = detail::parse_number<std::uint64_t>(f[7], row, "run_id");
    r.final_regret = detail::parse_number<double>(f[8], row, "final_regret");
    if (!std::isfinite(r.final_regret) || r.final_regret < 0.0)
      throw CsvError(row, "final_regret must be finite and >= 0");
    const auto flag = detail::parse_number<int>(f[9], row, "skipped_flag");
    if (flag != 0 && flag != 1) throw CsvError(row, "skipped_flag must be 0 or 1");
    r.skipped = flag == 1;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ratio_bandits
