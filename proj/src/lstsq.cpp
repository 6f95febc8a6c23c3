#include "afcm/lstsq.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>

namespace afcm {

namespace {

MatrixXd solve_dgelsy(const MatrixXd& A, const MatrixXd& B, double rank_tol, long* rank_out) {
  if (A.rows() == 0 || A.cols() == 0) {
    throw std::invalid_argument("lstsq: empty matrix");
  }
  if (A.rows() != B.rows()) {
    throw std::invalid_argument("lstsq: rhs row count does not match the matrix");
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw std::invalid_argument("lstsq: non-finite entries in the system");
  }
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  const lapack_int nrhs = static_cast<lapack_int>(B.cols());
  const lapack_int ldb = std::max(m, n);

  MatrixXd a = A;  // dgelsy overwrites the factorization in place
  MatrixXd b = MatrixXd::Zero(ldb, nrhs);
  b.topRows(m) = B;
  std::vector<lapack_int> jpvt(static_cast<size_t>(n), 0);
  lapack_int rank = 0;
  const lapack_int info =
      LAPACKE_dgelsy(LAPACK_COL_MAJOR, m, n, nrhs, a.data(), m, b.data(), ldb, jpvt.data(),
                     rank_tol, &rank);
  if (info != 0) {
    throw std::runtime_error("lstsq: dgelsy failed with info=" + std::to_string(info));
  }
  if (rank_out) *rank_out = rank;
  return b.topRows(n);
}

}  // namespace

LstsqResult lstsq_min_norm(const MatrixXd& A, const VectorXd& b, double rank_tol) {
  LstsqResult out;
  out.coeffs = solve_dgelsy(A, b, rank_tol, &out.rank);
  out.residual_norm = (A * out.coeffs - b).norm();
  return out;
}

MatrixXd lstsq_min_norm_multi(const MatrixXd& A, const MatrixXd& B, double rank_tol) {
  return solve_dgelsy(A, B, rank_tol, nullptr);
}

}  // namespace afcm
