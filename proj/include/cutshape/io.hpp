#pragma once

#include <fstream>
#include <string>

#include "cutshape/levelset.hpp"
#include "cutshape/mesh.hpp"
#include "cutshape/shapeopt.hpp"

namespace cutshape {

/// Legacy VTK of the refined mesh with the level set as point data, plus
/// the displacement (point data) and von Mises stress (cell data) if given.
void write_levelset_vtk(const std::string& path, const Mesh& fine, const LevelSetField& phi,
                        const NodalVectorField* displacement = nullptr,
                        const Vector* von_mises = nullptr);

/// SVG of the background grid, the design-domain outline and the extracted
/// zero level set.
void write_boundary_svg(const std::string& path, const Mesh& coarse, const CutGeometry& cut);

/// Iteration log: iter,t,T,J,compliance,volume,accepted,components.
class IterationLog {
 public:
  explicit IterationLog(const std::string& path);
  void append(const IterationRecord& record);

 private:
  std::ofstream out_;
};

std::string format_record(const IterationRecord& record);

}  // namespace cutshape
