#pragma once

#include <functional>

#include <Eigen/Core>

#include "convcool/mesh.hpp"

namespace convcool {

using ScalarField = Eigen::VectorXd;    // P2 coefficients
using VectorField = Eigen::VectorXd;    // vector-P2, interleaved (x, y) per node
using PressureField = Eigen::VectorXd;  // P1 coefficients

using ScalarFunction = std::function<double(double, double)>;

/// Nodal interpolation onto the P2 Lagrange space.
ScalarField interpolate_p2(const DofMap& dofmap, const ScalarFunction& f);

/// Nodal interpolation onto the vector-P2 space.
VectorField interpolate_velocity(const DofMap& dofmap, const ScalarFunction& fx,
                                 const ScalarFunction& fy);

/// Nodal interpolation onto the P1 space (mesh vertices).
PressureField interpolate_p1(const Mesh& mesh, const ScalarFunction& f);

}  // namespace convcool
