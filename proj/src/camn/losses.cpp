#include "beat/camn/losses.h"

#include "beat/errors.h"

#include <stdexcept>

namespace beat::camn {

Var reconstruction_loss(Var body_pred, Var body_true, Var hands_pred, Var hands_true, double alpha) {
  return ndiff::add(ndiff::l1_loss(body_pred, body_true), ndiff::scale(ndiff::l1_loss(hands_pred, hands_true), alpha));
}

Var adversarial_loss(Var score) {
  for (double s : score.value().data()) {
    if (!(s > 0.0 && s <= 1.0)) throw NumericError("discriminator score " + std::to_string(s) + " outside (0,1]");
  }
  return ndiff::scale(ndiff::mean(ndiff::log(score)), -1.0);
}

Var discriminator_loss(Var real_score, Var fake_score) {
  Var real_term = ndiff::mean(ndiff::log(real_score));
  Var fake_term = ndiff::mean(ndiff::log(ndiff::add_scalar(ndiff::scale(fake_score, -1.0), 1.0)));
  return ndiff::scale(ndiff::add(real_term, fake_term), -1.0);
}

Var total_loss(Var reconstruction, Var adversarial, double lambda_mean, double beta0, double beta1) {
  if (!(lambda_mean >= 0.0 && lambda_mean <= 1.0)) throw std::invalid_argument("lambda_mean outside [0,1]");
  return ndiff::add(ndiff::scale(reconstruction, lambda_mean * beta0), ndiff::scale(adversarial, beta1));
}

double lambda_mean(const std::vector<ModalityBatch>& batch) {
  double total = 0.0;
  std::size_t frames = 0;
  for (const auto& seq : batch) {
    for (double l : seq.lambda) total += l;
    frames += seq.lambda.size();
  }
  if (frames == 0) throw DataMismatch("batch has no semantic scores");
  return total / static_cast<double>(frames);
}

}  // namespace beat::camn
