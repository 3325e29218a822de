#include "frontlab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "frontlab/error.hpp"

namespace frontlab {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::invalid_argument, "cannot open " + path + " for writing");
  return os;
}
}  // namespace

void write_snapshots_csv(const std::string& path, const std::vector<FieldState>& snapshots) {
  auto os = open_out(path);
  os << "t,x,u\n";
  for (const auto& s : snapshots)
    for (int i = 0; i < s.grid.n; ++i)
      os << format_real(s.t) << ',' << format_real(s.grid.absolute(i)) << ',' << format_real(s[i]) << '\n';
}

void write_track_csv(const std::string& path, const InterfaceTrack& track) {
  auto os = open_out(path);
  os << "t,level,x_minus,x_plus\n";
  for (std::size_t i = 0; i < track.times.size(); ++i)
    for (std::size_t k = 0; k < track.levels.size(); ++k)
      os << format_real(track.times[i]) << ',' << format_real(track.levels[k]) << ','
         << format_real(track.x_minus[k][i]) << ',' << format_real(track.x_plus[k][i]) << '\n';
}

void write_columns_csv(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) fail(ErrorKind::invalid_argument, "csv header and column count differ");
  auto os = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_real(columns[c][r]);
    os << '\n';
  }
}

}  // namespace frontlab
