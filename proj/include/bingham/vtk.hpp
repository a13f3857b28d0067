#pragma once

#include "bingham/model.hpp"

#include <string>

namespace bingham {

/// Legacy ASCII VTK export over the linear triangles of the mesh. Vertex data
/// only: "velocity" from the vertex dofs, "strain_norm" (|Tu| for the given
/// form) and "div" sampled per element at its corners and averaged across
/// adjacent elements.
void write_vtk(const std::string& path, const Mesh& mesh, const DofMap& dm,
               const VelocityField& u, TensorForm form);

} // namespace bingham
