// Acceptance suite: one PASS/FAIL line per primary criterion, each with its
// measured values and wall time. Exits non-zero when any criterion fails.

#include "cli_runner.h"
#include "support.h"

#include "beat/annotation.h"
#include "beat/bvh.h"
#include "beat/camn/gradcheck.h"
#include "beat/camn/losses.h"
#include "beat/camn/toy_corpus.h"
#include "beat/camn/trainer.h"
#include "beat/kinematics.h"
#include "beat/metrics.h"
#include "beat/ndiff/ops.h"
#include "beat/skeleton.h"
#include "beat/textgrid.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

using namespace beat;
using namespace beat::testing;
using beat::ndiff::Tensor;
using beat::ndiff::Var;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* name, double budget_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < budget_seconds, "runtime budget " + std::to_string(budget_seconds) + " s");
  if (!o.pass) ++failures;
  std::printf("%s  %-18s %.2fs %s\n", o.pass ? "PASS" : "FAIL", name, seconds, o.detail.str().c_str());
  std::fflush(stdout);
}

GaussianStats gauss(Eigen::VectorXd mean, Eigen::MatrixXd cov) { return {std::move(mean), std::move(cov)}; }

void metric_closed_forms(Outcome& o) {
  ndiff::Rng rng(1);
  double worst_identity = 0, worst_shift = 0, worst_diag = 0, worst_sym = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + static_cast<int>(rng.index(16));
    const Eigen::MatrixXd s1 = random_spd(rng, n), s2 = random_spd(rng, n);
    Eigen::VectorXd m1(n), m2(n);
    for (int i = 0; i < n; ++i) m1(i) = rng.normal(), m2(i) = rng.normal();
    worst_identity = std::max(worst_identity, std::abs(frechet_distance(gauss(m1, s1), gauss(m1, s1))));

    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
    unit(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)))) = 1.0;
    worst_shift = std::max(worst_shift, std::abs(frechet_distance(gauss(m1, s1), gauss(m1 + unit, s1)) - 1.0));

    Eigen::VectorXd a(n), b(n);
    double expected = 0;
    for (int i = 0; i < n; ++i) {
      a(i) = rng.uniform(0.01, 9), b(i) = rng.uniform(0.01, 9);
      expected += std::pow(std::sqrt(a(i)) - std::sqrt(b(i)), 2);
    }
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    worst_diag = std::max(worst_diag,
                          std::abs(frechet_distance(gauss(z, a.asDiagonal()), gauss(z, b.asDiagonal())) - expected));

    worst_sym = std::max(worst_sym, std::abs(frechet_distance(gauss(m1, s1), gauss(m2, s2)) -
                                             frechet_distance(gauss(m2, s2), gauss(m1, s1))));
  }
  o.detail << "identity=" << worst_identity << " unit_shift_err=" << worst_shift << " diagonal_err=" << worst_diag
           << " symmetry=" << worst_sym;
  o.require(worst_identity <= 1e-8, "identity");
  o.require(worst_shift <= 1e-8, "unit shift");
  o.require(worst_diag <= 1e-8, "diagonal");
  o.require(worst_sym <= 1e-8, "symmetry");
}

void sqrtm_reconstruction(Outcome& o) {
  ndiff::Rng rng(2);
  double worst = 0, worst_oracle = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + static_cast<int>(rng.index(64));
    const Eigen::MatrixXd m = random_spd(rng, n, 1e-3, 100);
    const Eigen::MatrixXd s = sqrtm_spd(m);
    worst = std::max(worst, (s * s - m).norm() / (1 + m.norm()));
    if (k % 10 == 0) worst_oracle = std::max(worst_oracle, (s - denman_beavers_sqrt(m)).norm() / (1 + s.norm()));
  }
  o.detail << "max ||S^2-M||/(1+||M||)=" << worst << " vs_denman_beavers=" << worst_oracle;
  o.require(worst <= 1e-6, "reconstruction");
  o.require(worst_oracle <= 1e-6, "iterative oracle");
}

void beat_align_cases(Outcome& o) {
  BeatSequence a;
  a.times = {0.4, 1.1, 1.9, 2.6};
  const double same = beat_align(a, a, 0.1);
  BeatSequence g;
  for (double t : a.times) g.times.push_back(t + 0.1);
  const double shifted = beat_align(g, a, 0.1);
  bool monotone = true;
  double previous = 1.0;
  for (int k = 0; k <= 30; ++k) {
    BeatSequence s;
    for (double t : a.times) s.times.push_back(t + 0.01 * k);
    const double v = beat_align(s, a, 0.1);
    monotone = monotone && v <= previous;
    previous = v;
  }
  o.detail << "identical=" << same << " offset_0.1=" << shifted;
  o.require(same == 1.0, "identical beats");
  o.require(std::abs(shifted - std::exp(-0.5)) <= 1e-9 && std::abs(shifted - 0.606531) < 5e-7, "0.606531");
  o.require(monotone, "monotone");
}

std::vector<ClipPair> random_clip_set(ndiff::Rng& rng) {
  std::vector<ClipPair> clips;
  const std::size_t joints = 1 + rng.index(8);
  for (int k = 0; k < 5; ++k) {
    const std::size_t frames = 1 + rng.index(20);
    ClipPair c{random_positions(rng, frames, joints), {}, {}};
    c.pred = c.truth;
    for (Eigen::Index i = 0; i < c.pred.positions.size(); ++i) c.pred.positions.data()[i] += rng.uniform(-2.5, 2.5);
    for (std::size_t t = 0; t < frames; ++t) c.weights.scores.push_back(rng.index(11) / 10.0);
    c.weights.scores[0] = 1.0;
    clips.push_back(c);
  }
  return clips;
}

void srgr_cases(Outcome& o) {
  ndiff::Rng rng(3);
  auto clips = random_clip_set(rng);
  auto perfect = clips;
  for (auto& c : perfect) c.pred = c.truth;
  const double p = srgr(perfect, 2.0);

  double worst_uniform = 0;
  bool recount_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    auto set = random_clip_set(rng);
    // Brute-force recount: weighted hit counts summed clip by clip, frame by frame.
    double num = 0, den = 0;
    for (const auto& c : set)
      for (std::size_t t = 0; t < c.truth.frame_count(); ++t) {
        std::size_t hits = 0;
        for (std::size_t j = 0; j < c.truth.joint_count(); ++j)
          if ((c.truth.at(t, j) - c.pred.at(t, j)).norm() < 2.0) ++hits;
        num += c.weights.scores[t] * (static_cast<double>(hits) / static_cast<double>(c.truth.joint_count()));
        den += c.weights.scores[t];
      }
    recount_exact = recount_exact && srgr(set, 2.0) == num / den;

    double total = 0;
    std::size_t frames = 0;
    for (auto& c : set) {
      c.weights.scores.assign(c.truth.frame_count(), 0.7);
      for (double r : pck(c.truth, c.pred, 2.0)) total += r;
      frames += c.truth.frame_count();
    }
    worst_uniform = std::max(worst_uniform, std::abs(srgr(set, 2.0) - total / static_cast<double>(frames)));
  }
  o.detail << "perfect=" << p << " uniform_vs_mean_pck=" << worst_uniform
           << " bruteforce=" << (recount_exact ? "exact" : "differs");
  o.require(p == 1.0, "perfect prediction");
  o.require(worst_uniform <= 1e-12, "uniform lambda");
  o.require(recount_exact, "brute-force recount");
}

void annotation_table(Outcome& o) {
  // Inter-rater reliability table of the semantic annotations: score,
  // frames (x1e5), agreement and sum columns as printed.
  struct Row {
    double score, frames, agreement, sum;
  };
  const std::vector<Row> printed = {
      {0.0, 262.99, 1.0, 262.99}, {0.1, 8.25, 0.9, 7.43}, {0.2, 8.20, 0.8, 6.56}, {0.3, 7.85, 0.7, 5.50},
      {0.4, 3.53, 0.6, 2.19},     {0.5, 3.90, 0.5, 1.95}, {0.6, 6.25, 0.6, 3.75}, {0.7, 8.69, 0.7, 6.08},
      {0.8, 8.73, 0.8, 6.99},     {0.9, 6.78, 0.9, 6.10}, {1.0, 7.13, 1.0, 7.13}};
  std::vector<std::pair<double, double>> hist;
  for (const auto& r : printed) hist.emplace_back(r.score, r.frames);
  const AgreementTable t = semantic_agreement_table(hist);
  bool rows_match = t.rows.size() == printed.size();
  std::size_t matched = 0;
  std::ostringstream sum_mismatches;
  for (std::size_t i = 0; rows_match && i < printed.size(); ++i) {
    matched += std::abs(t.rows[i].agreement - printed[i].agreement) < 1e-12;
    // The printed sum column is informational; two of its entries are not frames x agreement.
    if (std::abs(t.rows[i].weighted - printed[i].sum) > 0.005 + 1e-9)
      sum_mismatches << " " << printed[i].score << ":" << t.rows[i].weighted << "!=" << printed[i].sum;
  }
  rows_match = rows_match && matched == printed.size();
  // Independent recomputation of the weighted averages.
  double num = 0, den = 0;
  for (const auto& r : printed)
    if (r.score > 0) num += r.frames * std::max(r.score, 1 - r.score), den += r.frames;
  o.detail << "agreement_rows_matched=" << matched << "/11 avg_w_0.0=" << t.average_with_zero
           << " avg_wo_0.0=" << t.average_without_zero << " (printed 0.83; recomputed from the table's rows) printed_sum_mismatches:" << sum_mismatches.str();
  o.require(rows_match, "agreement rows");
  o.require(std::abs(t.average_with_zero - 0.95) <= 0.01, "average with 0.0");
  o.require(std::abs(t.average_without_zero - num / den) <= 1e-12 && std::abs(t.average_without_zero - 0.77) < 0.01,
            "average without 0.0");
}

void parsers(Outcome& o) {
  double worst = 0;
  bool structure = true;
  for (int k = 0; k < 30; ++k) {
    ndiff::Rng rng(400 + k);
    const MotionClip clip = random_clip(rng, random_skeleton(rng, 1 + rng.index(30)), 1 + rng.index(12), 30, 180);
    const MotionClip back = parse_bvh(write_bvh(clip));
    structure = structure && back.skeleton.size() == clip.skeleton.size() && back.fps == clip.fps;
    worst = std::max(worst, (back.frames - clip.frames).cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < clip.skeleton.size(); ++j)
      worst = std::max(worst, (back.skeleton[j].offset - clip.skeleton[j].offset).cwiseAbs().maxCoeff());

    AlignedTranscript t;
    double time = 0;
    for (std::size_t w = 0, n = 1 + rng.index(15); w < n; ++w) {
      const double len = rng.uniform(0.01, 1.0);
      t.entries.push_back({w % 4 == 3 ? kPadToken : "w" + std::to_string(rng.index(100)), time, time + len});
      time += len;
    }
    const AlignedTranscript tb = parse_textgrid(write_textgrid(t));
    structure = structure && tb.entries.size() == t.entries.size();
    for (std::size_t w = 0; structure && w < t.entries.size(); ++w) {
      structure = tb.entries[w].token == t.entries[w].token;
      worst = std::max({worst, std::abs(tb.entries[w].start - t.entries[w].start),
                        std::abs(tb.entries[w].end - t.entries[w].end)});
    }
  }
  MotionClip beat_clip;
  beat_clip.skeleton = beat_skeleton();
  beat_clip.frames = RowMatrix::Zero(2, static_cast<Eigen::Index>(channel_count(beat_clip.skeleton)));
  const std::size_t channels = parse_bvh(write_bvh(beat_clip)).channel_count();
  const std::size_t fixture_channels = read_bvh_file(std::string(BEAT_TEST_DATA) + "/seed.bvh").channel_count();
  o.detail << "max_roundtrip_err=" << worst << " channels=" << channels << " fixture_channels=" << fixture_channels;
  o.require(structure, "structure");
  o.require(worst <= 1e-5, "values");
  o.require(channels == 231 && fixture_channels == 231, "231 channels");
}

void kinematics(Outcome& o) {
  bool prefix_exact = true;
  for (int k = 0; k < 20; ++k) {
    ndiff::Rng rng(500 + k);
    const Skeleton sk = random_skeleton(rng, 2 + rng.index(20));
    MotionClip clip = random_clip(rng, sk, 2, 30);
    clip.frames.rightCols(clip.frames.cols() - 3).setZero();
    const PositionTrack p = forward_kinematics(clip);
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t j = 0; j < sk.size(); ++j) {
        Eigen::Vector3d expected = clip.frames.row(static_cast<Eigen::Index>(t)).head<3>().transpose();
        std::vector<std::size_t> chain;
        for (std::optional<std::size_t> a = j; a; a = sk[*a].parent) chain.push_back(*a);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) expected += sk[*it].offset;
        prefix_exact = prefix_exact && p.at(t, j) == expected;
      }
  }
  MotionClip arm = parse_bvh(
      "HIERARCHY\nROOT R\n{\n OFFSET 0 0 0\n CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"
      " JOINT A\n {\n  OFFSET 10 0 0\n  CHANNELS 3 Zrotation Xrotation Yrotation\n  End Site\n  {\n   OFFSET 1 0 0\n"
      "  }\n }\n}\nMOTION\nFrames: 1\nFrame Time: 0.0333333\n0 0 0 90 0 0 0 0 0\n");
  const double err = (forward_kinematics(arm).at(0, 1) - Eigen::Vector3d(0, 10, 0)).norm();
  o.detail << "prefix_sum=" << (prefix_exact ? "exact" : "differs") << " rot90_err=" << err;
  o.require(prefix_exact, "prefix sum");
  o.require(err <= 1e-6, "90 degree case");
}

Tensor rnd(ndiff::Rng& rng, ndiff::Shape s) { return random_tensor(rng, std::move(s)); }

void ndiff_gradients(Outcome& o) {
  using namespace beat::ndiff;
  Rng rng(6);
  auto through = [](Var y) {
    Rng w(99);
    return sum(mul(y, y.tape()->constant(random_tensor(w, y.shape()))));
  };
  using Build = std::function<Var(const std::vector<Var>&)>;
  const Tensor a = rnd(rng, {3, 4}), b = rnd(rng, {3, 4});
  const std::vector<std::tuple<const char*, std::vector<Tensor>, Build>> ops = {
      {"add", {a, b}, [](auto& v) { return add(v[0], v[1]); }},
      {"sub", {a, b}, [](auto& v) { return sub(v[0], v[1]); }},
      {"mul", {a, b}, [](auto& v) { return mul(v[0], v[1]); }},
      {"scale", {a}, [](auto& v) { return scale(v[0], 1.7); }},
      {"add_scalar", {a}, [](auto& v) { return add_scalar(v[0], -0.3); }},
      {"leaky_relu", {a}, [](auto& v) { return leaky_relu(v[0]); }},
      {"sigmoid", {a}, [](auto& v) { return sigmoid(v[0]); }},
      {"tanh", {a}, [](auto& v) { return ndiff::tanh(v[0]); }},
      {"log", {random_tensor(rng, {3, 4}, 0.2, 2)}, [](auto& v) { return ndiff::log(v[0]); }},
      {"sum", {a}, [](auto& v) { return sum(v[0]); }},
      {"mean", {a}, [](auto& v) { return mean(v[0]); }},
      {"l1_loss", {a, b}, [](auto& v) { return l1_loss(v[0], v[1]); }},
      {"dense", {rnd(rng, {5, 3}), rnd(rng, {3, 4}), rnd(rng, {4})}, [](auto& v) { return dense(v[0], v[1], v[2]); }},
      {"matmul", {rnd(rng, {5, 3}), rnd(rng, {3, 4})}, [](auto& v) { return matmul(v[0], v[1]); }},
      {"conv1d", {rnd(rng, {9, 3}), rnd(rng, {2, 3, 3}), rnd(rng, {2})},
       [](auto& v) { return conv1d(v[0], v[1], v[2], 2); }},
      {"lstm_seq", {rnd(rng, {6, 2}), rnd(rng, {2, 12}), rnd(rng, {3, 12}), rnd(rng, {12})},
       [](auto& v) { return lstm_seq(v[0], v[1], v[2], v[3]); }},
      {"embedding", {rnd(rng, {5, 3})}, [](auto& v) { return embedding({4, 0, 4}, v[0]); }},
      {"concat", {a, b}, [](auto& v) { return concat({v[0], v[1]}, 1); }},
      {"slice_rows", {a}, [](auto& v) { return slice_rows(v[0], 1, 3); }},
      {"repeat_rows", {rnd(rng, {1, 3})}, [](auto& v) { return repeat_rows(v[0], 4); }},
      {"mean_rows", {a}, [](auto& v) { return mean_rows(v[0]); }},
  };
  double worst_op = 0;
  std::string worst_name;
  for (const auto& [name, inputs, build] : ops) {
    const double e = max_fd_error(inputs, [&](Tape&, const std::vector<Var>& v) { return through(build(v)); });
    if (e > worst_op) worst_op = e, worst_name = name;
  }
  camn::Camn model(camn::CamnConfig::toy(), 1);
  const auto batch = camn::toy_corpus(model.config(), 1, 16);
  const camn::GradcheckReport r = camn::gradcheck_generator(model, batch, 100, 1e-4, 1);
  o.detail << "ops=" << ops.size() << " max_op_rel_err=" << worst_op << " (" << worst_name << ")"
           << " camn_toy_T16_max_rel_err=" << r.max_rel_error << " over " << r.entries.size() << " params";
  o.require(worst_op < 1e-4, "op gradients");
  o.require(r.max_rel_error < 1e-3 && r.entries.size() == 100, "CaMN gradient");
}

void camn_contracts(Outcome& o) {
  using namespace beat::camn;
  const CamnConfig full;
  Camn model(full, 1);
  ndiff::Tape tape;
  const auto seq = toy_corpus(full, 1, 12).front();
  const Decoded d = model.forward(tape, seq);
  const bool shapes = d.body.shape() == ndiff::Shape{12, 81} && d.hands.shape() == ndiff::Shape{12, 144};

  Camn toy(CamnConfig::toy(), 2);
  const std::size_t T = 90, j = 70, f = toy.config().context;
  const auto base = toy_corpus(toy.config(), 1, T).front();
  auto encoded = [&](const ModalityBatch& b) {
    ndiff::Tape t;
    const Encoded e = toy.encode(t, b);
    return std::vector<Tensor>{e.text.value(), e.emotion.value(), e.audio.value(), e.face.value()};
  };
  const auto before = encoded(base);
  auto perturbed = base;
  for (std::size_t c = 0; c < perturbed.words.cols(); ++c) perturbed.words.at(j, c) += 1;
  for (std::size_t c = 0; c < perturbed.audio.cols(); ++c) perturbed.audio.at(j, c) += 0.5;
  for (std::size_t c = 0; c < perturbed.face.cols(); ++c) perturbed.face.at(j, c) += 0.5;
  perturbed.emotions[j] = (perturbed.emotions[j] + 1) % toy.config().emotions;
  const auto after = encoded(perturbed);
  bool local = true, reach_exact = true;
  for (std::size_t s = 0; s < before.size(); ++s) {
    for (std::size_t i = 0; i < T; ++i) {
      double change = 0;
      for (std::size_t c = 0; c < before[s].cols(); ++c)
        change = std::max(change, std::abs(before[s].at(i, c) - after[s].at(i, c)));
      const std::size_t dist = i > j ? i - j : j - i;
      if (dist > f) local = local && change == 0.0;
      if (dist == f) reach_exact = reach_exact && change > 0.0;
    }
  }

  ndiff::Tape lt;
  auto s = [&](double v) { return lt.constant(Tensor::scalar(v)); };
  const Var b0 = lt.constant(Tensor({3, 81})), b1 = lt.constant(Tensor({3, 81}, 1.0));
  const Var h0 = lt.constant(Tensor({3, 144})), h1 = lt.constant(Tensor({3, 144}, 1.0));
  const std::vector<std::pair<double, double>> cases = {
      {reconstruction_loss(b0, b0, h0, h0, full.alpha).value().item(), 0.0},
      {reconstruction_loss(b1, b0, h1, h0, full.alpha).value().item(), 1.02},
      {reconstruction_loss(b0, b0, h1, h0, full.alpha).value().item(), 0.02},
      {adversarial_loss(s(0.5)).value().item(), -std::log(0.5)},
      {adversarial_loss(s(0.25)).value().item(), -std::log(0.25)},
      {total_loss(s(1.02), s(0.2), 1.0, full.beta0, full.beta1).value().item(), 106.0},
      {total_loss(s(1.02), s(0.2), 0.5, full.beta0, full.beta1).value().item(), 55.0},
  };
  double loss_err = 0;
  for (const auto& [got, want] : cases) loss_err = std::max(loss_err, std::abs(got - want));

  o.detail << "body=(12," << d.body.value().cols() << ") hands=(12," << d.hands.value().cols()
           << ") fused_dim=" << full.fused_dim() << " (549 stated in the text; component sum is 529)"
           << " locality=" << (local ? "ok" : "violated") << " reach_exact=" << (reach_exact ? "yes" : "no")
           << " max_loss_err=" << loss_err;
  o.require(shapes, "shapes");
  o.require(full.fused_dim() == 529 && d.fused.value().cols() == 529, "fused dim");
  o.require(local && reach_exact, "locality");
  o.require(loss_err <= 1e-9, "loss arithmetic");
}

void toy_training(Outcome& o) {
  using namespace beat::camn;
  const CamnConfig c = CamnConfig::toy();
  const auto corpus = toy_corpus(c, 10, 64);
  auto run = [&] {
    Camn model(c, 1);
    Trainer trainer(model);
    std::vector<double> losses;
    for (int s = 0; s < 500; ++s) losses.push_back(trainer.step(corpus).generator);
    return losses;
  };
  const auto first = run();
  const auto second = run();
  const double ratio = first.back() / first.front();
  o.detail << "initial=" << first.front() << " final=" << first.back() << " ratio=" << ratio
           << " repeat=" << (first == second ? "bit-identical" : "differs");
  o.require(ratio <= 0.5, "loss halves");
  o.require(first == second, "determinism");
}

void cli_contract(Outcome& o) {
  CliSandbox box("acceptance");
  struct Case {
    std::string args;
    int exit_code;
    std::string golden;  // empty: exit code only
  };
  const std::vector<Case> cases = {
      {"convert --in data/walk.bvh --fps 30 --out w30.bvh", 0, "convert_resample.out"},
      {"eval beatalign --gesture data/beats_a.csv --audio data/beats_a.csv", 0, "eval_beatalign_same.json"},
      {"eval fgd --real data/features_real.csv --gen data/features_same.csv", 0, "eval_fgd_same.json"},
      {"eval l1div --bvh data/walk.bvh data/walk_pred.bvh data/walk_short.bvh", 0, "eval_l1div.json"},
      {"stats --agreement data/tab2.csv", 0, "agreement.json"},
      {"beats --audio data/speech.wav", 0, "beats_audio.csv"},
      {"convert --in data/bad.bvh --out x.bvh", 2, ""},
      {"frobnicate", 2, ""},
      {"eval fgd --real data/features_real.csv --gen data/features_wide.csv", 3, ""},
      {"eval srgr --truth data/walk.bvh data/walk.bvh --pred data/walk.bvh --scores data/beats_a.csv", 3, ""},
      {"camn train --camn-config data/diverge.json --steps 5", 4, ""},
      {"camn gradcheck --toy --threshold 1e-12", 4, ""},
  };
  std::size_t ok = 0;
  for (const auto& c : cases) {
    const CliResult a = box.run(c.args), b = box.run(c.args);
    bool pass = a.exit_code == c.exit_code && a.out == b.out;
    if (pass && !c.golden.empty()) pass = matches_golden(c.golden, a.out);
    if (pass) ++ok;
    else o.detail << " [" << c.args << " -> exit " << a.exit_code << "]";
  }
  o.detail << "cases=" << ok << "/" << cases.size();
  o.require(ok == cases.size(), "exit codes and golden reports");
}

}  // namespace

int main() {
  criterion("metric-closed-form", 1, metric_closed_forms);
  criterion("sqrtm", 10, sqrtm_reconstruction);
  criterion("beatalign", 1, beat_align_cases);
  criterion("srgr", 1, srgr_cases);
  criterion("annotation-tab2", 1, annotation_table);
  criterion("parsers", 5, parsers);
  criterion("fk", 1, kinematics);
  criterion("ndiff-gradcheck", 120, ndiff_gradients);
  criterion("camn-contracts", 60, camn_contracts);
  criterion("toy-training", 600, toy_training);
  criterion("cli", 30, cli_contract);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
