#pragma once

#include <string>
#include <vector>

#include "nsfd/field.hpp"
#include "nsfd/stepper.hpp"

// Single-header nlohmann/json lives in vendor/ as json.hpp.
#include "json.hpp"

namespace nsfd {

using Json = nlohmann::ordered_json;

// Field dump: one JSON header line followed by a little-endian float64
// payload in domain point order, component-major. See docs/FORMATS.md.
struct FieldDump {
  double h = 0;
  std::size_t points = 0;
  int components = 0;
  std::vector<double> payload;
};

void write_field(const std::string& path, const VectorField& f);
void write_field(const std::string& path, const ScalarField& f);
FieldDump read_field(const std::string& path);
VectorField dump_to_vector_field(const FieldDump& d, std::shared_ptr<const GridDomain> g);
ScalarField dump_to_scalar_field(const FieldDump& d, std::shared_ptr<const GridDomain> g);

// Grid dump: JSON summary plus a flat binary point list
// (3 x int64 lattice coordinates per point, one interior-flag byte).
Json grid_summary(const GridDomain& g);
void write_grid_points(const std::string& path, const GridDomain& g);

// Ledger CSV, one row per step. wall_ms is informational and excluded from
// determinism comparisons.
std::string ledger_csv(const RunLedger& ledger);
RunLedger parse_ledger_csv(const std::string& text);
// CSV with the wall_ms column blanked, for bit-exact comparisons.
std::string ledger_csv_no_timing(const RunLedger& ledger);

Json run_summary(const RunResult& res);

// Legacy VTK structured points over the lattice bounding box; zeros outside
// the grid.
void write_vtk(const std::string& path, const VectorField& f, const std::string& name);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::uint64_t fnv1a64(const void* data, std::size_t bytes);

}  // namespace nsfd
