#pragma once

#include <Eigen/Dense>

namespace afcm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

}  // namespace afcm
