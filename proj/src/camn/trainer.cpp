#include "beat/camn/trainer.h"

#include "beat/camn/losses.h"
#include "beat/errors.h"

#include <cmath>

namespace beat::camn {

namespace {

struct GeneratorGraph {
  std::vector<Decoded> outputs;
  Var reconstruction;
  Var adversarial;
  Var total;
  double lambda = 1.0;
};

// Generator loss over decoded outputs already on `tape`. The discriminator
// parameters are bound at their current values.
GeneratorGraph generator_losses(Tape& tape, Camn& model, const std::vector<ModalityBatch>& batch,
                                std::vector<Decoded> outputs, const Ablation& ablation) {
  if (batch.empty()) throw DataMismatch("empty training batch");
  const CamnConfig& c = model.config();
  GeneratorGraph g;
  g.outputs = std::move(outputs);
  Var rec, adv;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Decoded& d = g.outputs[i];
    Var r = reconstruction_loss(d.body, tape.constant(batch[i].body), d.hands, tape.constant(batch[i].hands), c.alpha);
    Var a = adversarial_loss(model.discriminate(tape, d.body, d.hands));
    rec = i == 0 ? r : ndiff::add(rec, r);
    adv = i == 0 ? a : ndiff::add(adv, a);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  g.reconstruction = ndiff::scale(rec, inv);
  g.adversarial = ndiff::scale(adv, inv);
  g.lambda = ablation.semantic ? 1.0 : lambda_mean(batch);
  g.total = total_loss(g.reconstruction, g.adversarial, g.lambda, c.beta0, c.beta1);
  return g;
}

std::vector<Decoded> forward_all(Tape& tape, Camn& model, const std::vector<ModalityBatch>& batch,
                                 const Ablation& ablation) {
  std::vector<Decoded> outputs;
  for (const auto& seq : batch) outputs.push_back(model.forward(tape, seq, ablation));
  return outputs;
}

StepLosses summarize(const GeneratorGraph& g) {
  StepLosses out;
  out.generator = g.total.value().item();
  out.reconstruction = g.reconstruction.value().item();
  out.adversarial = g.adversarial.value().item();
  out.lambda_mean = g.lambda;
  return out;
}

void require_finite(double value, const char* what, std::size_t step) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string(what) + " loss is not finite at step " + std::to_string(step));
  }
}

}  // namespace

Var generator_loss(Tape& tape, Camn& model, const std::vector<ModalityBatch>& batch, const Ablation& ablation) {
  return generator_losses(tape, model, batch, forward_all(tape, model, batch, ablation), ablation).total;
}

StepLosses evaluate_losses(Camn& model, const std::vector<ModalityBatch>& batch, const Ablation& ablation) {
  Tape tape;
  return summarize(generator_losses(tape, model, batch, forward_all(tape, model, batch, ablation), ablation));
}

Trainer::Trainer(Camn& model, TrainOptions options) : model_(model), options_(std::move(options)) {
  generator_state_.config.lr = model.config().lr;
  discriminator_state_.config.lr = model.config().lr * model.config().disc_lr_scale;
}

StepLosses Trainer::step(const std::vector<ModalityBatch>& batch) {
  const std::size_t step_index = generator_state_.step + 1;

  Tape gen_tape;
  if (batch.empty()) throw DataMismatch("empty training batch");
  std::vector<Decoded> outputs = forward_all(gen_tape, model_, batch, options_.ablation);

  double disc_loss = 0.0;
  if (options_.train_discriminator) {
    Tape disc_tape;
    Var loss;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      Var real = model_.discriminate(disc_tape, disc_tape.constant(batch[i].body), disc_tape.constant(batch[i].hands));
      Var fake = model_.discriminate(disc_tape, disc_tape.constant(outputs[i].body.value()),
                                     disc_tape.constant(outputs[i].hands.value()));
      Var term = discriminator_loss(real, fake);
      loss = i == 0 ? term : ndiff::add(loss, term);
    }
    loss = ndiff::scale(loss, 1.0 / static_cast<double>(batch.size()));
    disc_loss = loss.value().item();
    require_finite(disc_loss, "discriminator", step_index);
    model_.discriminator().zero_grad();
    disc_tape.backward(loss);
    ndiff::adam_step(model_.discriminator(), discriminator_state_);
  }

  // The discriminator parameters are first bound on gen_tape here, so the
  // generator sees the updated discriminator.
  const GeneratorGraph g = generator_losses(gen_tape, model_, batch, std::move(outputs), options_.ablation);
  StepLosses out = summarize(g);
  out.discriminator = disc_loss;
  require_finite(out.generator, "generator", step_index);

  model_.generator().zero_grad();
  gen_tape.backward(g.total);
  ndiff::adam_step(model_.generator(), generator_state_);
  model_.discriminator().zero_grad();
  return out;
}

}  // namespace beat::camn
