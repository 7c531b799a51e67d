#include "beat/metrics.h"

#include "beat/errors.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace beat {

namespace {

void check_same_shape(const PositionTrack& a, const PositionTrack& b) {
  if (a.frame_count() != b.frame_count() || a.joint_count() != b.joint_count()) {
    throw DataMismatch("truth and prediction differ in shape (" + std::to_string(a.frame_count()) +
                       "x" + std::to_string(a.joint_count()) + " vs " +
                       std::to_string(b.frame_count()) + "x" + std::to_string(b.joint_count()) + ")");
  }
}

}  // namespace

std::vector<double> pck(const PositionTrack& truth, const PositionTrack& pred, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  check_same_shape(truth, pred);
  const std::size_t J = truth.joint_count();
  if (J == 0) throw DataMismatch("no joints");
  std::vector<double> recall(truth.frame_count());
  for (std::size_t t = 0; t < recall.size(); ++t) {
    std::size_t hits = 0;
    for (std::size_t j = 0; j < J; ++j) {
      if ((truth.at(t, j) - pred.at(t, j)).norm() < delta) ++hits;
    }
    recall[t] = static_cast<double>(hits) / static_cast<double>(J);
  }
  return recall;
}

double srgr(const std::vector<ClipPair>& clips, double delta) {
  if (clips.empty()) throw DataMismatch("srgr needs at least one clip");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& clip : clips) {
    const auto recall = pck(clip.truth, clip.pred, delta);
    if (clip.weights.scores.size() != recall.size()) {
      throw DataMismatch("semantic weights have " + std::to_string(clip.weights.scores.size()) +
                         " frames, clip has " + std::to_string(recall.size()));
    }
    for (std::size_t t = 0; t < recall.size(); ++t) {
      const double w = clip.weights.scores[t];
      if (w < 0.0 || w > 1.0) throw DataMismatch("semantic weight outside [0,1]");
      weighted += w * recall[t];
      total += w;
    }
  }
  if (total <= 0.0) throw DataMismatch("all semantic weights are zero; SRGR is undefined");
  return weighted / total;
}

double l1_diversity(const Eigen::MatrixXd& clips) {
  const Eigen::Index n = clips.rows();
  if (n < 2) throw DataMismatch("l1 diversity needs at least 2 clips");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) sum += (clips.row(i) - clips.row(j)).lpNorm<1>();
  }
  // Each unordered pair appears twice among ordered pairs.
  const auto N = static_cast<double>(n);
  return 2.0 * sum / (2.0 * N * (N - 1.0));
}

Eigen::MatrixXd flatten_clips(const std::vector<PositionTrack>& clips) {
  if (clips.empty()) return {};
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  const std::size_t J = clips.front().joint_count();
  for (const auto& c : clips) {
    if (c.joint_count() != J) throw DataMismatch("clips differ in joint count");
    shortest = std::min(shortest, c.frame_count());
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(clips.size()), static_cast<Eigen::Index>(shortest * 3 * J));
  for (std::size_t k = 0; k < clips.size(); ++k) {
    const std::size_t begin = (clips[k].frame_count() - shortest) / 2;
    Eigen::Index col = 0;
    for (std::size_t t = begin; t < begin + shortest; ++t) {
      for (Eigen::Index c = 0; c < clips[k].positions.cols(); ++c) {
        out(static_cast<Eigen::Index>(k), col++) = clips[k].positions(static_cast<Eigen::Index>(t), c);
      }
    }
  }
  return out;
}

GaussianStats gaussian_stats(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) throw DataMismatch("gaussian_stats needs at least 2 samples");
  if (!features.allFinite()) throw NumericError("non-finite feature values");
  GaussianStats stats;
  stats.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - stats.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(features.rows() - 1);
  stats.cov = 0.5 * (cov + cov.transpose());
  return stats;
}

Eigen::MatrixXd sqrtm_spd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DataMismatch("sqrtm_spd needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw NumericError("matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  Eigen::VectorXd values = eig.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -kSymmetryTolerance * scale) {
      throw NumericError("matrix is not positive semi-definite (eigenvalue " +
                         std::to_string(values[i]) + ")");
    }
    values[i] = std::sqrt(std::max(0.0, values[i]));
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return v * values.asDiagonal() * v.transpose();
}

double frechet_distance(const GaussianStats& real, const GaussianStats& gen) {
  const Eigen::Index d = real.mean.size();
  if (gen.mean.size() != d || real.cov.rows() != d || gen.cov.rows() != d || real.cov.cols() != d ||
      gen.cov.cols() != d) {
    throw DataMismatch("Gaussian statistics differ in dimension");
  }
  const Eigen::MatrixXd root_real = sqrtm_spd(real.cov);
  Eigen::MatrixXd inner = root_real * gen.cov * root_real;
  inner = 0.5 * (inner + inner.transpose());
  const double cross = sqrtm_spd(inner).trace();
  const double value = (real.mean - gen.mean).squaredNorm() + real.cov.trace() + gen.cov.trace() - 2.0 * cross;
  if (value < 0.0) {
    if (value < -kTraceClamp) throw NumericError("Frechet distance is materially negative");
    return 0.0;
  }
  return value;
}

double fgd(const Eigen::MatrixXd& real_features, const Eigen::MatrixXd& gen_features) {
  if (real_features.cols() != gen_features.cols()) {
    throw DataMismatch("feature sets differ in dimension");
  }
  const Eigen::Index d = real_features.cols();
  if (real_features.rows() < d + 1 || gen_features.rows() < d + 1) {
    std::cerr << "warning: fewer samples than dimensions + 1; covariance is rank deficient\n";
  }
  return frechet_distance(gaussian_stats(real_features), gaussian_stats(gen_features));
}

double beat_align(const BeatSequence& gesture, const BeatSequence& audio, double sigma) {
  if (gesture.times.empty()) throw DataMismatch("no gesture beats");
  if (audio.times.empty()) throw DataMismatch("no audio beats");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  validate_beats(gesture);
  validate_beats(audio);
  const auto& a = audio.times;
  double sum = 0.0;
  for (double g : gesture.times) {
    const auto it = std::lower_bound(a.begin(), a.end(), g);
    double nearest = std::numeric_limits<double>::infinity();
    if (it != a.end()) nearest = std::min(nearest, std::abs(*it - g));
    if (it != a.begin()) nearest = std::min(nearest, std::abs(*std::prev(it) - g));
    sum += std::exp(-(nearest * nearest) / (2.0 * sigma * sigma));
  }
  return sum / static_cast<double>(gesture.times.size());
}

}  // namespace beat
