#pragma once

#include "sispec/mesh.hpp"

namespace sispec {

/// Icosahedron subdivided `subdivisions` times and projected to the unit
/// sphere. Subdivision 4 gives 2562 vertices / 5120 faces.
TriMesh icosphere(int subdivisions, double radius = 1.0);

/// Unit sphere with a smooth deterministic asymmetric radial modulation;
/// useful where symmetric shapes would make correspondences ambiguous.
TriMesh bumpy_sphere(int subdivisions, double amplitude = 0.15);

/// Axis-aligned grid of (nx-1)*(ny-1)*2 triangles in the z = 0 plane.
TriMesh planar_grid(int nx, int ny, double spacing = 1.0);

}  // namespace sispec
