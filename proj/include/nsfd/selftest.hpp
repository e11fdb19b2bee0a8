#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsfd/field.hpp"

namespace nsfd {

// Deterministic generators shared by the invariant battery and the test
// suites.
ScalarField random_scalar(std::shared_ptr<const GridDomain> g, std::uint64_t seed,
                          bool zero_boundary);
VectorField random_vector(std::shared_ptr<const GridDomain> g, std::uint64_t seed,
                          bool zero_boundary);
// Exactly divergence free (to roundoff) and vanishing on the boundary: the
// discrete curl of a random potential that vanishes on the boundary and on
// the first interior layer.
VectorField random_discrete_solenoidal(std::shared_ptr<const GridDomain> g, std::uint64_t seed);

// Unit box [0,1]^3 grid whose interior is n^3 (h = 1/(n+5)).
std::shared_ptr<const GridDomain> unit_box_grid(int interior_per_axis);
std::shared_ptr<const GridDomain> unit_box_grid_h(double h);
std::shared_ptr<const GridDomain> ball_grid(double radius, double h);
std::shared_ptr<const GridDomain> lshape_grid(double h);

struct SelfTestReport {
  int passed = 0;
  int failed = 0;
  std::vector<std::string> lines;
  bool ok() const { return failed == 0; }
};

// Fixed-seed invariant battery over small built-in grids; the CLI `check`
// subcommand runs exactly this.
SelfTestReport selftest();

}  // namespace nsfd
