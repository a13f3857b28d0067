#include "bingham/vtk.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace bingham {

void write_vtk(const std::string& path, const Mesh& mesh, const DofMap& dm,
               const VelocityField& u, TensorForm form) {
  const int nv = mesh.vertex_count();
  std::vector<double> strain_norm(nv, 0.0);
  std::vector<double> divergence(nv, 0.0);
  std::vector<int> hits(nv, 0);

  const Eigen::Vector2d corner_ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int k = 0; k < 3; ++k) {
      const P2Basis b = p2_basis(corner_ref[k]);
      Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d gp = geo.jac_inv_t * b.grad[i];
        grad.row(0) += u.dofs[DofMap::vec_dof(geo.nodes[i], 0)] * gp.transpose();
        grad.row(1) += u.dofs[DofMap::vec_dof(geo.nodes[i], 1)] * gp.transpose();
      }
      const Eigen::Matrix2d tensor =
          (form == TensorForm::Sym) ? Eigen::Matrix2d(0.5 * (grad + grad.transpose())) : grad;
      const int v = mesh.triangles[t][k];
      strain_norm[v] += tensor.norm();
      divergence[v] += grad.trace();
      ++hits[v];
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (hits[v] > 0) {
      strain_norm[v] /= hits[v];
      divergence[v] /= hits[v];
    }
  }

  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) {
    throw std::runtime_error("write_vtk: cannot open " + path);
  }
  std::fprintf(fp, "# vtk DataFile Version 2.0\n");
  std::fprintf(fp, "bingham solution\n");
  std::fprintf(fp, "ASCII\n");
  std::fprintf(fp, "DATASET UNSTRUCTURED_GRID\n");
  std::fprintf(fp, "POINTS %d double\n", nv);
  for (const auto& p : mesh.vertices) {
    std::fprintf(fp, "%.9g %.9g 0\n", p.x(), p.y());
  }
  std::fprintf(fp, "CELLS %d %d\n", mesh.triangle_count(), 4 * mesh.triangle_count());
  for (const auto& tri : mesh.triangles) {
    std::fprintf(fp, "3 %d %d %d\n", tri[0], tri[1], tri[2]);
  }
  std::fprintf(fp, "CELL_TYPES %d\n", mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    std::fprintf(fp, "5\n");
  }
  std::fprintf(fp, "POINT_DATA %d\n", nv);
  std::fprintf(fp, "VECTORS velocity double\n");
  for (int v = 0; v < nv; ++v) {
    std::fprintf(fp, "%.9g %.9g 0\n", u.dofs[DofMap::vec_dof(v, 0)],
                 u.dofs[DofMap::vec_dof(v, 1)]);
  }
  std::fprintf(fp, "SCALARS strain_norm double 1\nLOOKUP_TABLE default\n");
  for (int v = 0; v < nv; ++v) {
    std::fprintf(fp, "%.9g\n", strain_norm[v]);
  }
  std::fprintf(fp, "SCALARS div double 1\nLOOKUP_TABLE default\n");
  for (int v = 0; v < nv; ++v) {
    std::fprintf(fp, "%.9g\n", divergence[v]);
  }
  std::fclose(fp);
}

} // namespace bingham
