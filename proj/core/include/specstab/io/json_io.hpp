#pragma once

#include <iosfwd>
#include <string>

#include "specstab/eigensolve/eigensolve.hpp"
#include "specstab/geometry/domain.hpp"

namespace specstab {

/// {"name": ..., "outer": [[x, y], ...], "holes": [[[x, y], ...], ...]}
std::string domain_to_json(const PolygonalDomain& d);
/// Inverse of domain_to_json; "name" and "holes" are optional. Throws ValidationError with
/// the offending field on malformed input.
PolygonalDomain domain_from_json(const std::string& text);

/// {"domain": ..., "h": ..., "vertices": [[x, y]...], "triangles": [[i, j, k]...], "boundary": [0/1...]}
void write_mesh_json(std::ostream& os, const TriMesh& m);
/// Reads the layout of write_mesh_json ("domain" and "h" optional); boundary entries may be
/// 0/1 or booleans.
TriMesh mesh_from_json(const std::string& text);

/// Kind, eigenvalues, residuals, iterations; nodal vectors when requested.
void write_eigenset_json(std::ostream& os, const EigenSet& e, bool include_vectors = false);

}  // namespace specstab
