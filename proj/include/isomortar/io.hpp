// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ISOMORTAR_IO_HPP
#define ISOMORTAR_IO_HPP

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

#include "isomortar/assembly.hpp"
#include "isomortar/torque.hpp"

namespace isomortar {

/// Header plus one row per result; failed angles keep alpha and leave the
/// other fields empty. wall_time_s is written only when record_timing.
void write_torque_csv(std::ostream& out, const std::vector<TorqueResult>& rows,
                      bool record_timing);

/// "rows cols nnz" followed by one "row col value" line per entry.
void write_coordinate(std::ostream& out, const SparseMatrix& m);
void write_vector(std::ostream& out, const Eigen::VectorXd& v);

/// Legacy VTK polydata of all patch boundary faces, n x n quads per face.
void write_geometry_vtk(std::ostream& out, const MultipatchModel& model, int n = 8);

struct FieldBlock {
  const EdgeSpace* space;
  const Eigen::VectorXd* coeffs;
  const Materials* materials;
  double rotation = 0;  ///< rigid rotation applied to points and vectors
};

/// Legacy VTK unstructured grid: per patch an n^3 point lattice of hexahedra
/// with point data B, H and the material reluctivity.
void write_fields_vtk(std::ostream& out, const std::vector<FieldBlock>& blocks, int n = 6);

}  // namespace isomortar

#endif  // ISOMORTAR_IO_HPP
