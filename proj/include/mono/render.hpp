#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mono/dessin.hpp"

namespace mono {

// Plain-text description of a planar tree: vertex table with rotation
// order, edge incidences, and the two edge permutations in cycle notation.
std::string tree_text(const Dessin& T);

// Self-contained SVG 1.1 drawing of the tree. Edges are the actual preimage
// curves (traced by lifting the critical-value segment from each edge label),
// vertices are disks filled by side.
std::string tree_svg(const RationalMap& f, const Dessin& T,
                     const Tolerances& tol = {});

// Self-contained SVG 1.1 drawing of the level set |f(z)| = 1 (the preimage
// of the unit circle), computed by marching squares on a cells x cells grid
// over the square [-half_width, half_width]^2. Critical points are marked.
std::string level_set_svg(const RationalMap& f, double half_width = 2.2,
                          int cells = 160);

// CSV export of one lifted path: header t,re,im then one row per sample.
std::string trace_csv(const std::vector<std::pair<double, SpherePt>>& trace);

}  // namespace mono
