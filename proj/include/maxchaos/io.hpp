#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "maxchaos/evt.hpp"
#include "maxchaos/sde.hpp"
#include "maxchaos/stationary.hpp"

namespace maxchaos {

/// printf-style %.<digits>g.
std::string format_sig(double value, int digits);

/// Header `rep,time,particle,value`; times with 9 significant digits,
/// values with 17 so files round-trip exactly.
std::string trajectory_csv(const std::vector<Trajectory>& reps);

/// Header `rep,particle,value`.
std::string final_state_csv(const std::vector<VecX>& finals);

/// Header `rep,raw_max,norm_max`.
std::string maxima_csv(const MaximaSample& maxima);

/// Header `x,F,f`, 12 significant digits.
std::string stationary_csv(const StationaryCdf& cdf);

/// Column-oriented numeric CSV contents keyed by header name.
struct CsvTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
  std::size_t rows = 0;

  const std::vector<double>& column(const std::string& name) const;
};

/// Throws FormatError on ragged rows or non-numeric cells.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace maxchaos
