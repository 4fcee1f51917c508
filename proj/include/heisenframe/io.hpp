#pragma once

#include <string>

#include "heisenframe/frames.hpp"
#include "heisenframe/grid.hpp"
#include "heisenframe/report.hpp"

namespace heisenframe {

// Writes to a temp file beside `path`, then renames. Either the old content
// or the new content exists at every instant; throws io_error on failure.
void atomic_write_file(const std::string& path, const std::string& content);

// Grid container "HGF1": one JSON header line
//   {"magic":"HGF1","n":...,"axes":[...],"box":[[lo,hi],...],"dtype":"c128le"}
// followed by the samples as little-endian double pairs in row-major order.
void write_grid_hgf1(const std::string& path, const GridFunction& f);
GridFunction read_grid_hgf1(const std::string& path);

// Coefficient container "HCT1": one JSON header line
//   {"magic":"HCT1","n":...,"K_xy":...,"K_t":...,"convention":...}
// then one CSV row per index, a...,alpha...,k,re,im, in canonical index
// order with %.17g reals. The order is part of the format.
void write_table_hct1(const std::string& path, const CoefficientTable& t);
CoefficientTable read_table_hct1(const std::string& path);

std::string convention_name(Convention c);

// Flat single-line JSON object; non-finite values serialize as null.
std::string bounds_report_json(const BoundsReport& rep);

}  // namespace heisenframe
