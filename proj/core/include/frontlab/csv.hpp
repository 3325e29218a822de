#pragma once

#include <string>
#include <vector>

#include "frontlab/field.hpp"
#include "frontlab/fronts.hpp"

namespace frontlab {

/// 17 significant digits, round-trip exact.
std::string format_real(double v);

void write_snapshots_csv(const std::string& path, const std::vector<FieldState>& snapshots);
void write_track_csv(const std::string& path, const InterfaceTrack& track);
void write_columns_csv(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

}  // namespace frontlab
