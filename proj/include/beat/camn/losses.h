#pragma once

#include "beat/camn/model.h"

#include <vector>

namespace beat::camn {

// mean|body - truth| + alpha * mean|hands - truth|.
Var reconstruction_loss(Var body_pred, Var body_true, Var hands_pred, Var hands_true, double alpha);

// -mean(log score). Scores must lie in (0, 1].
Var adversarial_loss(Var score);

// Binary cross-entropy: -mean(log real) - mean(log(1 - fake)).
Var discriminator_loss(Var real_score, Var fake_score);

// lambda_mean * beta0 * reconstruction + beta1 * adversarial.
Var total_loss(Var reconstruction, Var adversarial, double lambda_mean, double beta0, double beta1);

// Frame-weighted mean of the semantic scores across a batch.
double lambda_mean(const std::vector<ModalityBatch>& batch);

}  // namespace beat::camn
