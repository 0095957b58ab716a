#pragma once

#include <cstdint>
#include <string>

#include "geomonge/io.hpp"

namespace geomonge {

struct Scenario {
  std::string name;        // built-in name or "custom"
  std::uint64_t seed = 0;
  Json config;             // overrides / custom file references
};

/// Built-ins: "intro-1d" (degenerate line where every coupling ties),
/// "counterexample" (glued sheets where monotone is not optimal),
/// "identity" (mu = nu), "mcp-segment" (contraction fixture).
/// "custom" reads space/mu/nu files from the config. Reports are
/// deterministic for a fixed (scenario, seed).
Json run_scenario(const Scenario& sc);

/// Writes the report plus plot-ready CSV sidecars (one per entry in
/// report["csv_sidecars"]) next to the output path.
void export_report(const Json& report, const std::string& path);

}  // namespace geomonge
