#pragma once

#include <iosfwd>
#include <vector>

#include "corrint/convexint.hpp"

namespace corrint {

struct MeshStats {
  std::size_t vertices = 0, faces = 0, degenerate = 0;
};

/// Chart grid with the B-face included exactly and no duplicate hi-end on periodic axes.
std::vector<Vec> export_grid(const ChartDomain& dom, const std::vector<int>& counts);

/// Triangulated image of a 2D chart grid; periodic axes wrap, faces are counter-clockwise in the chart.
MeshStats write_obj_surface(std::ostream& os, const LayeredMap& m, const std::vector<int>& counts,
                            int level = -1);
/// Polyline image of a 1D chart as an `l` record, closed on periodic charts.
MeshStats write_obj_curve(std::ostream& os, const LayeredMap& m, int samples, int level = -1,
                          std::size_t first_index = 1);
/// Header `x0..,u0..,defect` with the spectral norm of g − ∇uᵀ∇u at each grid point.
void write_grid_csv(std::ostream& os, const LayeredMap& m, const std::vector<int>& counts,
                    int level = -1);
void write_stages_csv(std::ostream& os, const RunReport& rep);

}  // namespace corrint
