#pragma once

// Gesture evaluation metrics: PCK/SRGR, L1 diversity, Frechet gesture
// distance and BeatAlign.

#include "beat/annotation.h"
#include "beat/beatsig.h"
#include "beat/motion.h"

#include <Eigen/Core>

#include <vector>

namespace beat {

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct ClipPair {
  PositionTrack truth;
  PositionTrack pred;
  ScoreTrack weights;  // per-frame semantic relevance
};

inline constexpr double kDefaultPckDelta = 2.0;  // centimeters
inline constexpr double kDefaultBeatSigma = 0.1;  // seconds
inline constexpr double kSymmetryTolerance = 1e-8;
inline constexpr double kTraceClamp = 1e-6;

// recall[t] = fraction of joints with |p - p_hat| < delta (strict).
std::vector<double> pck(const PositionTrack& truth, const PositionTrack& pred, double delta);

// Sum over clips and frames of lambda_t * recall_t divided by the sum of
// lambda_t. Throws beat::DataMismatch when every weight is zero.
double srgr(const std::vector<ClipPair>& clips, double delta);

// Rows are flattened clips of equal length. Sum over ordered pairs of the L1
// distance, divided by 2N(N-1).
double l1_diversity(const Eigen::MatrixXd& clips);

// Flattens global joint positions, centre-cropping every clip to the
// shortest frame count in the set.
Eigen::MatrixXd flatten_clips(const std::vector<PositionTrack>& clips);

// Sample mean and (N-1)-normalized covariance, symmetrized.
GaussianStats gaussian_stats(const Eigen::MatrixXd& features);

// Principal square root of a symmetric PSD matrix via eigendecomposition.
// Eigenvalues down to -1e-8 (relative) are clamped to zero.
Eigen::MatrixXd sqrtm_spd(const Eigen::MatrixXd& m);

// |mu_r - mu_g|^2 + Tr(S_r + S_g - 2 (S_r S_g)^{1/2}), with the trace of the
// cross term taken as Tr(sqrtm(S_r^{1/2} S_g S_r^{1/2})).
double frechet_distance(const GaussianStats& real, const GaussianStats& gen);

double fgd(const Eigen::MatrixXd& real_features, const Eigen::MatrixXd& gen_features);

// Mean over gesture beats of exp(-min_a |g - a|^2 / (2 sigma^2)).
double beat_align(const BeatSequence& gesture, const BeatSequence& audio,
                  double sigma = kDefaultBeatSigma);

}  // namespace beat
