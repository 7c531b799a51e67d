#include "beat/camn/gradcheck.h"

#include "beat/camn/trainer.h"

#include <algorithm>
#include <cmath>

namespace beat::camn {

double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max(floor, std::abs(analytic) + std::abs(numeric));
}

GradcheckReport gradcheck_generator(Camn& model, const std::vector<ModalityBatch>& batch, std::size_t samples,
                                    double eps, std::uint64_t seed) {
  auto& params = model.generator();
  params.zero_grad();
  {
    Tape tape;
    tape.backward(generator_loss(tape, model, batch));
  }
  model.discriminator().zero_grad();

  auto loss_value = [&] {
    Tape tape;
    return generator_loss(tape, model, batch).value().item();
  };

  ndiff::Rng rng(seed);
  const std::size_t total = params.scalar_count();
  GradcheckReport report;
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t flat = rng.index(total);
    std::size_t k = 0;
    while (flat >= params[k].value.size()) flat -= params[k++].value.size();
    ndiff::Parameter& p = params[k];

    const double original = p.value[flat];
    p.value[flat] = original + eps;
    const double plus = loss_value();
    p.value[flat] = original - eps;
    const double minus = loss_value();
    p.value[flat] = original;

    GradcheckEntry e;
    e.parameter = p.name;
    e.index = flat;
    e.analytic = p.grad[flat];
    e.numeric = (plus - minus) / (2.0 * eps);
    e.rel_error = relative_error(e.analytic, e.numeric);
    if (std::abs(e.analytic) + std::abs(e.numeric) < kGradientFloor) ++report.below_floor;
    report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace beat::camn
