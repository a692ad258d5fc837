#include "bll/lanczos.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "bll/error.hpp"

namespace bll {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void orthonormalize(const MatrixXd& W, MatrixXd& Q, MatrixXd& R) {
  Eigen::HouseholderQR<MatrixXd> qr(W);
  Q = qr.householderQ() * MatrixXd::Identity(W.rows(), W.cols());
  R = qr.matrixQR().topRows(W.cols()).triangularView<Eigen::Upper>();
}

}  // namespace

LanczosResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& A, Index K, const LanczosOptions& opts) {
  const Index n = A.rows();
  const Index b = opts.block;
  if (K < 1 || K > n) throw Error(ErrorCode::KTooLarge, "requested pairs exceed dimension");

  Eigen::SparseMatrix<double> shifted = A;
  for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= opts.shift;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "shift is not below the spectrum");

  const Index Kb = std::min(n - b, K + std::max<Index>(2 * b, K / 10));
  const Index maxdim = std::min(n - b, 2 * Kb + 10 * b);
  const Index keep = std::min(Kb + Kb / 4, maxdim - b);
  if (Kb < K || keep < Kb) throw Error(ErrorCode::KTooLarge, "dimension too small for block Lanczos");

  MatrixXd Qm = MatrixXd::Zero(n, maxdim + b);
  MatrixXd Tm = MatrixXd::Zero(maxdim + b, maxdim + b);
  {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    MatrixXd X(n, b);
    for (Index c = 0; c < b; ++c)
      for (Index r = 0; r < n; ++r) X(r, c) = uni(rng);
    MatrixXd Q, R;
    orthonormalize(X, Q, R);
    Qm.leftCols(b) = Q;
  }

  LanczosResult out;
  double tol = opts.tol;
  Index j = 0;
  Index step = 0;
  while (true) {
    MatrixXd W = llt.solve(MatrixXd(Qm.middleCols(j, b)));
    out.solves += b;
    Tm.block(0, j, j + b, b).setZero();
    for (int pass = 0; pass < 2; ++pass) {
      MatrixXd H = Qm.leftCols(j + b).transpose() * W;
      W.noalias() -= Qm.leftCols(j + b) * H;
      Tm.block(0, j, j + b, b) += H;
    }
    Tm.block(j, 0, b, j + b) = Tm.block(0, j, j + b, b).transpose();
    MatrixXd Qn, R;
    orthonormalize(W, Qn, R);
    const Index m = j + b;
    ++step;

    if (m + b > maxdim || step % 5 == 0) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(Tm.topLeftCorner(m, m));
      const VectorXd theta = es.eigenvalues().reverse();
      const MatrixXd S = es.eigenvectors().rowwise().reverse();
      const MatrixXd RS = R * S.bottomRows(b).leftCols(K);
      bool converged = true;
      for (Index k = 0; k < K && converged; ++k)
        converged = RS.col(k).norm() / theta[k] < tol;
      if (converged) {
        MatrixXd Y = Qm.leftCols(m) * S.leftCols(K);
        const MatrixXd G = Y.transpose() * (A * Y);
        Eigen::SelfAdjointEigenSolver<MatrixXd> rr(0.5 * (G + G.transpose()));
        out.values = rr.eigenvalues();
        out.vectors = Y * rr.eigenvectors();
        const MatrixXd res = A * out.vectors - out.vectors * out.values.asDiagonal();
        double worst = 0.0;
        for (Index k = 0; k < K; ++k)
          worst = std::max(worst, res.col(k).norm() / (std::abs(out.values[k]) + 1.0));
        if (worst <= 1e-9) return out;
        tol *= 0.01;
        if (tol < 1e-15) throw Error(ErrorCode::ConvergenceFailure, "residual target not reached");
      }
      if (m + b > maxdim) {
        if (++out.restarts > opts.max_restarts)
          throw Error(ErrorCode::ConvergenceFailure, "restart budget exhausted");
        Qm.leftCols(keep) = Qm.leftCols(m) * S.leftCols(keep);
        Tm.setZero();
        Tm.topLeftCorner(keep, keep) = theta.head(keep).asDiagonal();
        const MatrixXd C = R * S.bottomRows(b).leftCols(keep);
        Qm.middleCols(keep, b) = Qn;
        Tm.block(keep, 0, b, keep) = C;
        Tm.block(0, keep, keep, b) = C.transpose();
        j = keep;
        continue;
      }
    }
    Qm.middleCols(m, b) = Qn;
    Tm.block(m, j, b, b) = R;
    Tm.block(j, m, b, b) = R.transpose();
    j = m;
  }
}

}  // namespace bll
