#pragma once

#include <Eigen/Dense>

namespace igenkrylov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace igenkrylov
