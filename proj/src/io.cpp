#include "maxchaos/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "maxchaos/errors.hpp"

namespace maxchaos {

std::string format_sig(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string trajectory_csv(const std::vector<Trajectory>& reps) {
  std::string out = "rep,time,particle,value\n";
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const auto& traj = reps[r];
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const std::string prefix = std::to_string(r) + "," + format_sig(traj.times[k], 9) + ",";
      const VecX& v = traj.states[k].values;
      for (Index i = 0; i < v.size(); ++i) {
        out += prefix;
        out += std::to_string(i);
        out += ',';
        out += format_sig(v(i), 17);
        out += '\n';
      }
    }
  }
  return out;
}

std::string final_state_csv(const std::vector<VecX>& finals) {
  std::string out = "rep,particle,value\n";
  for (std::size_t r = 0; r < finals.size(); ++r) {
    for (Index i = 0; i < finals[r].size(); ++i) {
      out += std::to_string(r) + "," + std::to_string(i) + "," + format_sig(finals[r](i), 17) + "\n";
    }
  }
  return out;
}

std::string maxima_csv(const MaximaSample& m) {
  std::string out = "rep,raw_max,norm_max\n";
  for (Index r = 0; r < m.raw.size(); ++r) {
    out += std::to_string(r) + "," + format_sig(m.raw(r), 17) + "," + format_sig(m.normalized(r), 17) + "\n";
  }
  return out;
}

std::string stationary_csv(const StationaryCdf& cdf) {
  std::string out = "x,F,f\n";
  for (Index k = 0; k < cdf.size(); ++k) {
    out += format_sig(cdf.grid_x(k), 12) + "," + format_sig(cdf.F(k), 12) + "," + format_sig(cdf.f(k), 12) + "\n";
  }
  return out;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  const auto it = columns.find(name);
  if (it == columns.end()) throw FormatError("csv is missing required column '" + name + "'");
  return it->second;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line) || line.empty()) throw FormatError("csv has no header row");
  if (line.back() == '\r') line.pop_back();
  table.header = split(line);
  for (const auto& h : table.header) table.columns[h];

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw FormatError("csv line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(table.header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto& s = cells[c];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw FormatError("csv line " + std::to_string(line_no) + ": non-numeric cell '" + s + "'");
      }
      table.columns[table.header[c]].push_back(v);
    }
    ++table.rows;
  }
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << contents;
}

}  // namespace maxchaos
