#pragma once

#include "beat/camn/model.h"

#include <cstdint>
#include <string>
#include <vector>

namespace beat::camn {

struct GradcheckEntry {
  std::string parameter;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double max_rel_error = 0.0;
  std::size_t below_floor = 0;  // entries whose |a| + |n| was under the floor
};

// Gradients smaller than this sit at the resolution of a central difference
// on a loss of order 100, so the denominator is clamped to it.
inline constexpr double kGradientFloor = 1e-5;

// |a - n| / max(floor, |a| + |n|)
double relative_error(double analytic, double numeric, double floor = kGradientFloor);

// Central-difference check of the generator total loss (discriminator held
// fixed) on `samples` generator scalars drawn uniformly at random.
GradcheckReport gradcheck_generator(Camn& model, const std::vector<ModalityBatch>& batch, std::size_t samples = 100,
                                    double eps = 1e-4, std::uint64_t seed = 1);

}  // namespace beat::camn
