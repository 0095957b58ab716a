#pragma once

#include <string>

#include <json.hpp>

#include "geomonge/flow.hpp"
#include "geomonge/kantorovich.hpp"
#include "geomonge/rays.hpp"
#include "geomonge/space.hpp"

namespace geomonge {

using Json = nlohmann::ordered_json;

// Space files: { "n", "labels"?, "d" | "metric":"euclidean", "dL", "tol" }
// with "inf" entries in dL marking unreachable pairs.
Json space_to_json(const FiniteGeodesicSpace& space);
FiniteGeodesicSpace space_from_json(const Json& j);

Json plan_to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const Json& j, int n);

// Rays files: { "n", "section", "rays":[{"points","params"}], "a", "b",
// "isolated" }; a/b are keyed by ray index.
Json rays_to_json(const RaySystem& rs);
RaySystem rays_from_json(const Json& j);

// Measure files: CSV lines `point_index,weight` (header optional).
DiscreteMeasure measure_from_csv(const std::string& path, int n);
void measure_to_csv(const DiscreteMeasure& mu, const std::string& path);

// Per-ray interval tables as CSV: ray,cell,param_lo,param_hi,value.
void interval_table_to_csv(const DiscreteCurrent& current, const std::string& path);

Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace geomonge
