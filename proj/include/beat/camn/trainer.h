#pragma once

#include "beat/camn/model.h"
#include "beat/ndiff/adam.h"

#include <vector>

namespace beat::camn {

struct StepLosses {
  double generator = 0.0;      // total weighted generator loss
  double reconstruction = 0.0;
  double adversarial = 0.0;
  double discriminator = 0.0;
  double lambda_mean = 0.0;
};

struct TrainOptions {
  Ablation ablation;
  // When false the discriminator is frozen and its loss is not computed.
  bool train_discriminator = true;
};

// Generator total loss for a batch, built on `tape` with teacher forcing and
// the discriminator at its current parameters.
Var generator_loss(Tape& tape, Camn& model, const std::vector<ModalityBatch>& batch, const Ablation& ablation = {});

// Values of one generator evaluation without any parameter update.
StepLosses evaluate_losses(Camn& model, const std::vector<ModalityBatch>& batch, const Ablation& ablation = {});

class Trainer {
 public:
  explicit Trainer(Camn& model, TrainOptions options = {});

  // One generator forward, a discriminator update on detached predictions,
  // then a generator update through the updated discriminator. Throws
  // NumericError when a loss is not finite.
  StepLosses step(const std::vector<ModalityBatch>& batch);

  std::size_t steps() const { return generator_state_.step; }

 private:
  Camn& model_;
  TrainOptions options_;
  ndiff::OptimizerState generator_state_;
  ndiff::OptimizerState discriminator_state_;
};

}  // namespace beat::camn
