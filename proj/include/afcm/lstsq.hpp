#pragma once

#include "afcm/types.hpp"

namespace afcm {

struct LstsqResult {
  VectorXd coeffs;
  double residual_norm = 0;
  long rank = 0;
};

/// Minimum-norm least-squares solution via a rank-revealing complete
/// orthogonal factorization (LAPACK dgelsy). rank_tol is the relative
/// condition threshold used to pick the effective rank.
LstsqResult lstsq_min_norm(const MatrixXd& A, const VectorXd& b, double rank_tol);

/// Multi right-hand-side variant; one factorization shared by all columns.
MatrixXd lstsq_min_norm_multi(const MatrixXd& A, const MatrixXd& B, double rank_tol);

}  // namespace afcm
