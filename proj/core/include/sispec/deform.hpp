#pragma once

#include "sispec/mesh.hpp"

namespace sispec {

/// Scales the region within geodesic distance `radius` of `seed` about the
/// region centroid by `factor`, blended to identity at the region boundary
/// with a C1 cosine falloff. Connectivity is unchanged, so the identity map
/// is ground truth for the deformed pair.
TriMesh local_scale_deform(const TriMesh& mesh, int seed, double radius,
                           double factor);

}  // namespace sispec
