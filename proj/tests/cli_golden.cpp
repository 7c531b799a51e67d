#include "cli_runner.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

using beat::testing::CliResult;
using beat::testing::CliSandbox;
using beat::testing::matches_golden;
using beat::testing::slurp;
using beat::testing::without_line;

namespace {

void expect_golden(const std::string& name, const std::string& actual) {
  std::string expected;
  EXPECT_TRUE(matches_golden(name, actual, &expected)) << name << "\n--- expected\n"
                                                       << expected << "--- actual\n"
                                                       << actual;
}

// Runs twice and requires byte-identical stdout, then checks the golden copy.
CliResult run_golden(const CliSandbox& box, const std::string& name, const std::string& args, int exit_code = 0) {
  const CliResult a = box.run(args);
  const CliResult b = box.run(args);
  EXPECT_EQ(a.exit_code, exit_code) << args << "\n" << a.err;
  EXPECT_EQ(a.out, b.out) << args;
  expect_golden(name, a.out);
  return a;
}

}  // namespace

TEST(CliConvert, ResampleBvh) {
  CliSandbox box("resample");
  run_golden(box, "convert_resample.out", "convert --in data/walk.bvh --fps 30 --out w30.bvh");
  expect_golden("walk30.bvh", slurp(box.path("w30.bvh")));
}

TEST(CliConvert, ForwardKinematicsCsv) {
  CliSandbox box("fk");
  run_golden(box, "convert_fk.out", "convert --in data/small.bvh --fk --out small.csv");
  expect_golden("small_positions.csv", slurp(box.path("small.csv")));
}

TEST(CliConvert, TextGridFramesAndAudio) {
  CliSandbox box("tg");
  run_golden(box, "convert_textgrid.out", "convert --in data/speech.TextGrid --fps 10 --out words.csv");
  expect_golden("speech_words.csv", slurp(box.path("words.csv")));
  run_golden(box, "convert_wav.out", "convert --in data/speech.wav --rate 8000 --out s8k.wav");
}

TEST(CliConvert, ParseErrorExitsTwoWithLine) {
  CliSandbox box("bad");
  const CliResult r = box.run("convert --in data/bad.bvh --out x.bvh");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("data/bad.bvh: line 15"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(box.path("x.bvh")));
}

TEST(CliUsage, ErrorsExitTwo) {
  CliSandbox box("usage");
  EXPECT_EQ(box.run("").exit_code, 2);
  EXPECT_EQ(box.run("frobnicate").exit_code, 2);
  EXPECT_EQ(box.run("convert --in data/missing.bvh --out x.bvh").exit_code, 2);
  EXPECT_EQ(box.run("eval srgr --truth data/walk.bvh --pred data/walk.bvh --scores data/beats_a.csv --joints "
                    "elbows")
                .exit_code,
            2);
  EXPECT_EQ(box.run("camn ablate --toy --drop nose").exit_code, 2);
  EXPECT_EQ(box.run("--help").exit_code, 0);
}

TEST(CliUsage, WriteFailureExitsOne) {
  CliSandbox box("write");
  EXPECT_EQ(box.run("convert --in data/small.bvh --out no/such/dir/x.bvh").exit_code, 1);
}

TEST(CliConfig, FileAndEnvironmentWithFlagOverride) {
  CliSandbox box("config");
  std::ofstream(box.path("run.ini")) << "[eval.beatalign]\nsigma = 0.2\n";
  const std::string args = "eval beatalign --gesture data/beats_b.csv --audio data/beats_a.csv";
  const CliResult file = box.run("--config run.ini " + args);
  const CliResult env = box.run(args, "BEAT_CONFIG=run.ini");
  const CliResult flag = box.run(args + " --sigma 0.1", "BEAT_CONFIG=run.ini");
  EXPECT_EQ(nlohmann::json::parse(file.out)["value"], 0.882497);
  EXPECT_EQ(file.out, env.out);
  EXPECT_EQ(nlohmann::json::parse(flag.out)["value"], 0.606531);
}

TEST(CliAnnotate, FrameScores) {
  CliSandbox box("annotate");
  run_golden(box, "annotate.csv", "annotate --annotation data/semantic.txt --textgrid data/speech.TextGrid --fps 30");
}

TEST(CliStats, TablesAndLowScoreFraction) {
  CliSandbox box("stats");
  ASSERT_EQ(box.run("annotate --annotation data/semantic.txt --textgrid data/speech.TextGrid --out s.csv").exit_code, 0);
  const CliResult r = run_golden(box, "stats.json", "stats --scores s.csv --textgrid data/speech.TextGrid --out-dir t");
  EXPECT_EQ(r.err, "low-score fraction (<= 0.2): 0.400\n");
  expect_golden("stats_histogram.csv", slurp(box.path("t/histogram.csv")));
  expect_golden("stats_words.csv", slurp(box.path("t/words.csv")));
}

TEST(CliStats, AgreementTable) {
  CliSandbox box("agreement");
  const CliResult r = run_golden(box, "agreement.json", "stats --agreement data/tab2.csv");
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["average_with_zero"].get<double>(), 0.95, 0.01);
}

TEST(CliStats, EmptyInputAndMismatch) {
  CliSandbox box("stats_edge");
  const CliResult empty = run_golden(box, "stats_empty.json", "stats");
  EXPECT_EQ(empty.err, "low-score fraction (<= 0.2): 0.000\n");
  ASSERT_EQ(box.run("annotate --annotation data/semantic.txt --textgrid data/speech.TextGrid --fps 60 --out s.csv")
                .exit_code,
            0);
  EXPECT_EQ(box.run("stats --scores s.csv --textgrid data/speech.TextGrid").exit_code, 3);
  EXPECT_EQ(box.run("stats --scores s.csv s.csv --textgrid data/speech.TextGrid").exit_code, 3);
}

TEST(CliBeats, AudioOnsets) {
  CliSandbox box("beats");
  run_golden(box, "beats_audio.csv", "beats --audio data/speech.wav");
  run_golden(box, "beats_motion.csv", "beats --bvh data/walk.bvh --joints body");
}

TEST(CliEval, ReportsAreDeterministic) {
  CliSandbox box("eval");
  run_golden(box, "eval_beatalign_same.json", "eval beatalign --gesture data/beats_a.csv --audio data/beats_a.csv");
  run_golden(box, "eval_beatalign_offset.json", "eval beatalign --gesture data/beats_b.csv --audio data/beats_a.csv");
  run_golden(box, "eval_fgd_same.json", "eval fgd --real data/features_real.csv --gen data/features_same.csv");
  run_golden(box, "eval_fgd_bvh.json",
             "eval fgd --real-bvh data/walk.bvh --gen-bvh data/walk_pred.bvh --window 20 --stride 5 --dims 4");
  run_golden(box, "eval_l1div.json", "eval l1div --bvh data/walk.bvh data/walk_pred.bvh data/walk_short.bvh");
  ASSERT_EQ(box.run("annotate --annotation data/semantic.txt --textgrid data/speech.TextGrid --fps 60 --frames 60 "
                    "--out s60.csv")
                .exit_code,
            0);
  run_golden(box, "eval_srgr_perfect.json", "eval srgr --truth data/walk.bvh --pred data/walk.bvh --scores s60.csv");
  run_golden(box, "eval_srgr.json", "eval srgr --truth data/walk.bvh --pred data/walk_pred.bvh --scores s60.csv");
}

TEST(CliEval, MismatchedSetsExitThree) {
  CliSandbox box("eval_mismatch");
  ASSERT_EQ(box.run("annotate --annotation data/semantic.txt --textgrid data/speech.TextGrid --fps 60 --frames 60 "
                    "--out s60.csv")
                .exit_code,
            0);
  EXPECT_EQ(box.run("eval srgr --truth data/walk.bvh data/walk.bvh --pred data/walk.bvh --scores s60.csv").exit_code,
            3);
  EXPECT_EQ(box.run("eval srgr --truth data/walk.bvh --pred data/walk_short.bvh --scores s60.csv").exit_code, 3);
  EXPECT_EQ(box.run("eval fgd --real data/features_real.csv --gen data/features_wide.csv").exit_code, 3);
}

TEST(CliCamn, GradcheckPassesAndThresholdFails) {
  CliSandbox box("gradcheck");
  const CliResult ok = box.run("camn gradcheck --toy");
  EXPECT_EQ(ok.exit_code, 0) << ok.out;
  EXPECT_LT(nlohmann::json::parse(ok.out)["max_rel_error"].get<double>(), 1e-3);
  EXPECT_EQ(box.run("camn gradcheck --toy --threshold 1e-12").exit_code, 4);
}

TEST(CliCamn, TrainIsReproducible) {
  CliSandbox box("train");
  ASSERT_EQ(box.run("camn train --toy --steps 3 --sequences 2 --frames 16 --out a").exit_code, 0);
  ASSERT_EQ(box.run("camn train --toy --steps 3 --sequences 2 --frames 16 --out b").exit_code, 0);
  for (const char* f : {"losses.csv", "checkpoint.json", "discriminator.json", "config.json"})
    EXPECT_EQ(slurp(box.path(std::string("a/") + f)), slurp(box.path(std::string("b/") + f))) << f;
  const std::string ma = slurp(box.path("a/manifest.json")), mb = slurp(box.path("b/manifest.json"));
  EXPECT_NE(ma.find("\"created\""), std::string::npos);
  EXPECT_EQ(without_line(ma, "\"created\""), without_line(mb, "\"created\""));
  const auto manifest = nlohmann::json::parse(ma);
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_EQ(manifest["losses"].size(), 3u);

  // A saved model reloads and evaluates.
  const CliResult fwd = box.run("camn forward --model a --frames 16");
  EXPECT_EQ(fwd.exit_code, 0) << fwd.err;
}

TEST(CliCamn, DivergenceExitsFour) {
  CliSandbox box("diverge");
  EXPECT_EQ(box.run("camn train --camn-config data/diverge.json --steps 5").exit_code, 4);
}

TEST(CliCamn, SynthesizeKeepsSeedFrames) {
  CliSandbox box("synth");
  const std::string args = "camn synthesize --toy --seed-pose data/seed.bvh --len 120 --audio data/speech.wav "
                           "--textgrid data/speech.TextGrid --emotion 2 --speaker 3";
  ASSERT_EQ(box.run(args + " --out a.bvh").exit_code, 0);
  ASSERT_EQ(box.run(args + " --out b.bvh").exit_code, 0);
  const std::string a = slurp(box.path("a.bvh"));
  EXPECT_EQ(a, slurp(box.path("b.bvh")));
  EXPECT_NE(a.find("Frames: 120"), std::string::npos);

  std::istringstream out(a.substr(a.find("Frame Time"))), seed_text(slurp(box.path("data/seed.bvh")));
  std::string line, seed_line;
  std::getline(out, line);
  while (std::getline(seed_text, seed_line) && seed_line.rfind("Frame Time", 0) != 0) {
  }
  for (int t = 0; t < 8; ++t) {
    std::getline(out, line);
    std::getline(seed_text, seed_line);
    EXPECT_EQ(line, seed_line) << "frame " << t;
  }
  EXPECT_EQ(box.run("camn synthesize --toy --seed-pose data/seed.bvh --len 4 --out c.bvh").exit_code, 3);
  EXPECT_EQ(box.run("camn synthesize --toy --seed-pose data/small.bvh --len 20 --out c.bvh").exit_code, 3);
}
