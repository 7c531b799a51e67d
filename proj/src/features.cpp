#include "beat/features.h"

#include "beat/errors.h"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace beat {

Eigen::MatrixXd motion_windows(const PositionTrack& track, std::size_t window, std::size_t stride) {
  if (window == 0 || stride == 0) throw std::invalid_argument("window and stride must be positive");
  const std::size_t T = track.frame_count();
  if (T < window) return Eigen::MatrixXd(0, static_cast<Eigen::Index>(window) * track.positions.cols());
  const std::size_t count = (T - window) / stride + 1;
  const Eigen::Index width = track.positions.cols();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(window) * width);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t f = 0; f < window; ++f) {
      out.block(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(f) * width, 1, width) =
          track.positions.row(static_cast<Eigen::Index>(k * stride + f));
    }
  }
  return out;
}

WindowPca::WindowPca(const Eigen::MatrixXd& real_windows, std::size_t dims) {
  if (real_windows.rows() < 2) throw DataMismatch("PCA needs at least 2 real windows");
  mean_ = real_windows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = real_windows.rowwise() - mean_.transpose();
  const auto keep = static_cast<Eigen::Index>(
      std::min<std::size_t>({dims, static_cast<std::size_t>(real_windows.rows() - 1),
                             static_cast<std::size_t>(real_windows.cols())}));
  // Gram-matrix route keeps the eigenproblem at rows x rows when windows are wide.
  if (centered.rows() < centered.cols()) {
    const Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    basis_.resize(centered.cols(), keep);
    for (Eigen::Index k = 0; k < keep; ++k) {
      const Eigen::Index idx = gram.rows() - 1 - k;
      Eigen::VectorXd direction = centered.transpose() * eig.eigenvectors().col(idx);
      const double norm = direction.norm();
      if (norm > 0.0) direction /= norm;
      basis_.col(k) = direction;
    }
  } else {
    const Eigen::MatrixXd cov = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    basis_.resize(centered.cols(), keep);
    for (Eigen::Index k = 0; k < keep; ++k) basis_.col(k) = eig.eigenvectors().col(cov.rows() - 1 - k);
  }
  // Eigenvector signs are arbitrary; pin them so projections are reproducible.
  for (Eigen::Index k = 0; k < keep; ++k) {
    Eigen::Index arg = 0;
    basis_.col(k).cwiseAbs().maxCoeff(&arg);
    if (basis_(arg, k) < 0.0) basis_.col(k) *= -1.0;
  }
}

Eigen::MatrixXd WindowPca::project(const Eigen::MatrixXd& windows) const {
  if (windows.cols() != mean_.size()) throw DataMismatch("window width does not match PCA fit");
  return (windows.rowwise() - mean_.transpose()) * basis_;
}

}  // namespace beat
