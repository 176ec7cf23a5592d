#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mono/ctp.hpp"

namespace mono {

// A rational map plus marked data as loaded from a JSON document. The schema
// is strict: exactly the keys name, numerator, denominator, marked_points,
// base_point (optional), options (optional); anything else is rejected with
// the offending key named. Complex numbers are [re, im] pairs; the string
// "inf" marks the point at infinity.
struct MapDocument {
  std::string name;
  RationalMap f;
  std::vector<SpherePt> marked;
  std::optional<cpx> base;
  Options options;
};

MapDocument parse_map_document(const std::string& text);
MapDocument load_map_document(const std::string& path);

// Canonical serialization: fixed key order, two-space indent, options
// reduced to the fields that differ from defaults. Bundled documents are
// stored in this form, so load/serialize round-trips them byte-identically.
std::string serialize_map_document(const MapDocument& doc);

}  // namespace mono
