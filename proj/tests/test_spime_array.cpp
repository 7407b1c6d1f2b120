#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spime/spime_array.hpp"

using namespace spime;

namespace {

SpimeJob random_job(std::mt19937_64& rng, std::size_t units, std::size_t blocks) {
  SpimeJob job;
  for (std::size_t u = 0; u < units; ++u) {
    job.keys.push_back(oracle::random_block(rng));
    std::vector<Block128> seq;
    for (std::size_t b = 0; b < blocks; ++b) seq.push_back(oracle::random_block(rng));
    job.inputs.push_back(std::move(seq));
  }
  return job;
}

SpimeConfig config(std::size_t units, std::size_t blocks) {
  return SpimeConfig{units, blocks * 128, false};
}

}  // namespace

TEST(SpimeArray, RejectsBadConfig) {
  EXPECT_THROW(SpimeArraySim(SpimeConfig{0, 128, false}), ConfigError);
  EXPECT_THROW(SpimeArraySim(SpimeConfig{4, 100, false}), ConfigError);
  EXPECT_THROW(SpimeArraySim(SpimeConfig{4, 0, false}), ConfigError);
}

TEST(SpimeArray, BuildsAtLargestEvaluatedSize) {
  SpimeArraySim array(config(4096, 1));
  EXPECT_EQ(array.size(), 4096u);
  for (std::size_t i = 0; i < array.size(); ++i) {
    ASSERT_EQ(array.unit(i).controller().state(), ControllerState::Idle);
    ASSERT_EQ(array.unit(i).core().current_state(), CoreState::Idle);
  }
}

TEST(SpimeArray, RejectsShapeMismatch) {
  std::mt19937_64 rng(41);
  SpimeArraySim array(config(4, 2));
  EXPECT_THROW(array.run_job(random_job(rng, 3, 2)), ConfigError);
  EXPECT_THROW(array.run_job(random_job(rng, 4, 3)), ConfigError);
  auto job = random_job(rng, 4, 2);
  job.keys.pop_back();
  EXPECT_THROW(array.run_job(job), ConfigError);
}

TEST(SpimeArray, OutputsMatchReferencePerBlock) {
  std::mt19937_64 rng(42);
  const auto job = random_job(rng, 16, 4);
  SpimeArraySim array(config(16, 4));
  const auto r = array.run_job(job);
  ASSERT_EQ(r.outputs.size(), 16u);
  for (std::size_t u = 0; u < 16; ++u) {
    EXPECT_TRUE(r.done_flags[u]);
    ASSERT_EQ(r.outputs[u].size(), 4u);
    for (std::size_t b = 0; b < 4; ++b)
      ASSERT_EQ(r.outputs[u][b], oracle::reference_encrypt(job.keys[u], job.inputs[u][b]));
  }
}

TEST(SpimeArray, TotalCyclesIsBlocksTimesEndToEnd) {
  std::mt19937_64 rng(43);
  for (std::size_t blocks : {1u, 2u, 8u, 64u}) {
    SpimeArraySim array(config(2, blocks));
    const auto r = array.run_job(random_job(rng, 2, blocks));
    EXPECT_EQ(r.total_cycles, blocks * PimUnit::kEndToEndCycles) << blocks;
  }
}

TEST(SpimeArray, TotalCyclesIndependentOfUnitCount) {
  std::mt19937_64 rng(44);
  SpimeArraySim small(config(1, 8));
  SpimeArraySim large(config(256, 8));
  EXPECT_EQ(small.run_job(random_job(rng, 1, 8)).total_cycles,
            large.run_job(random_job(rng, 256, 8)).total_cycles);
}

TEST(SpimeArray, SingleUnitMatchesStandalonePair) {
  const auto key = Block128::from_hex("000102030405060708090a0b0c0d0e0f");
  const auto pt = Block128::from_hex("00112233445566778899aabbccddeeff");
  SpimeArraySim array(config(1, 1));
  const auto r = array.run_job(SpimeJob{{key}, {{pt}}});
  PimUnit unit;
  const auto run = run_block(unit, key, pt);
  EXPECT_EQ(r.outputs[0][0], run.ciphertext);
  EXPECT_EQ(r.total_cycles, run.end_to_end_cycles);
}

TEST(SpimeArray, ParallelEquivalenceWithIndependentRuns) {
  std::mt19937_64 rng(45);
  const auto job = random_job(rng, 32, 3);
  SpimeArraySim array(config(32, 3));
  const auto all = array.run_job(job);
  for (std::size_t u = 0; u < 32; ++u) {
    SpimeArraySim single(config(1, 3));
    const auto one = single.run_job(SpimeJob{{job.keys[u]}, {job.inputs[u]}});
    ASSERT_EQ(one.outputs[0], all.outputs[u]);
    ASSERT_EQ(one.total_cycles, all.total_cycles);
  }
}

TEST(SpimeArray, DeterministicAcrossRepeatedRuns) {
  std::mt19937_64 rng(46);
  const auto job = random_job(rng, 8, 4);
  SpimeArraySim array(config(8, 4));
  const auto a = array.run_job(job);
  const auto b = array.run_job(job);
  EXPECT_EQ(a, b);
}

TEST(SpimeArray, PerturbingOneUnitChangesOnlyThatUnit) {
  std::mt19937_64 rng(47);
  auto job = random_job(rng, 8, 2);
  SpimeArraySim array(config(8, 2));
  const auto base = array.run_job(job);
  job.inputs[3][1][5] ^= 0x01;
  const auto changed = array.run_job(job);
  for (std::size_t u = 0; u < 8; ++u) {
    if (u == 3) {
      EXPECT_EQ(changed.outputs[u][0], base.outputs[u][0]);
      EXPECT_NE(changed.outputs[u][1], base.outputs[u][1]);
    } else {
      EXPECT_EQ(changed.outputs[u], base.outputs[u]);
    }
  }
}

TEST(SpimeArray, TickObservations) {
  const auto key = Block128::from_hex("000102030405060708090a0b0c0d0e0f");
  const auto pt = Block128::from_hex("00112233445566778899aabbccddeeff");
  SpimeArraySim array(config(4, 1));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(array.unit(i).controller().state(), ControllerState::Idle);
    EXPECT_EQ(array.unit(i).core().current_state(), CoreState::Idle);
  }
  array.load_job(SpimeJob{{key, key, key, key}, {{pt}, {pt}, {pt}, {pt}}});
  while (!array.finished()) {
    const auto obs = array.tick();
    ASSERT_EQ(obs.size(), 4u);
    for (const auto& o : obs) ASSERT_EQ(o, obs[0]);
  }
  EXPECT_EQ(array.cycle(), PimUnit::kEndToEndCycles);
}

TEST(SpimeArray, ManualTickingMatchesRunJob) {
  std::mt19937_64 rng(48);
  const auto job = random_job(rng, 5, 3);
  SpimeArraySim a(config(5, 3));
  SpimeArraySim b(config(5, 3));
  const auto direct = a.run_job(job);
  b.load_job(job);
  std::size_t ticks = 0;
  while (!b.finished()) {
    b.tick();
    ++ticks;
  }
  EXPECT_EQ(b.result(), direct);
  EXPECT_EQ(ticks, direct.total_cycles);
}

TEST(SpimeArray, TraceCsvHasUnitColumn) {
  std::mt19937_64 rng(49);
  SpimeArraySim array(SpimeConfig{2, 128, true});
  array.run_job(random_job(rng, 2, 1));
  std::ostringstream os;
  array.write_trace_csv(os);
  std::istringstream lines(os.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "unit,cycle,state,aes_start,aes_done,done,core_state,round");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 2 * PimUnit::kEndToEndCycles);
}

TEST(JobFile, ParsesAndWritesSameShape) {
  std::istringstream in(
      "# two units\n"
      "000102030405060708090a0b0c0d0e0f 00112233445566778899aabbccddeeff\n"
      "\n"
      "2b7e151628aed2a6abf7158809cf4f3c 3243f6a8885a308d313198a2e0370734,"
      "00112233445566778899aabbccddeeff\r\n");
  const auto job = parse_job(in);
  ASSERT_EQ(job.keys.size(), 2u);
  EXPECT_EQ(job.inputs[0].size(), 1u);
  EXPECT_EQ(job.inputs[1].size(), 2u);
  EXPECT_EQ(job.inputs[1][0].to_hex(), "3243f6a8885a308d313198a2e0370734");

  std::ostringstream out;
  write_blocks_file(out, job.keys, job.inputs);
  EXPECT_EQ(out.str(),
            "000102030405060708090a0b0c0d0e0f 00112233445566778899aabbccddeeff\n"
            "2b7e151628aed2a6abf7158809cf4f3c 3243f6a8885a308d313198a2e0370734,"
            "00112233445566778899aabbccddeeff\n");
}

TEST(JobFile, ErrorsReportLineNumber) {
  std::istringstream in(
      "000102030405060708090a0b0c0d0e0f 00112233445566778899aabbccddeeff\n"
      "000102030405060708090a0b0c0d0e0f 00112233445566778899aabbccddeeff,zz\n");
  try {
    parse_job(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream missing("000102030405060708090a0b0c0d0e0f\n");
  EXPECT_THROW(parse_job(missing), ParseError);
}
