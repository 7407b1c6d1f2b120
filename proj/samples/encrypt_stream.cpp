// Encrypts a short stream of blocks on a 4-unit array and prints the
// ciphertexts alongside the analytical figures for the same configuration.

#include <cstdio>

#include "spime/spime.hpp"

int main() {
  using namespace spime;

  const auto key = Block128::from_hex("000102030405060708090a0b0c0d0e0f");
  SpimeJob job;
  for (int unit = 0; unit < 4; ++unit) {
    job.keys.push_back(key);
    std::vector<Block128> blocks;
    for (int b = 0; b < 2; ++b) {
      Block128 pt = Block128::from_hex("00112233445566778899aabbccddeeff");
      pt[15] = static_cast<Byte>(unit * 2 + b);
      blocks.push_back(pt);
    }
    job.inputs.push_back(blocks);
  }

  SpimeArraySim array(SpimeConfig{4, 256, false});
  const auto result = array.run_job(job);
  for (std::size_t u = 0; u < result.outputs.size(); ++u)
    for (const auto& ct : result.outputs[u]) std::printf("unit %zu: %s\n", u, ct.to_hex().c_str());
  std::printf("total cycles: %llu\n", static_cast<unsigned long long>(result.total_cycles));

  const auto catalog = builtin_catalog();
  const auto perf = evaluate(PerfQuery{4, 500, AesCoreSim::kCyclesPerBlock, 256},
                             find_device(catalog, "U55C"));
  std::printf("model @500 MHz: latency %.4f us, throughput %.6f, LUT %.6f%%\n", perf.latency_us,
              perf.throughput_gbps, perf.lut_util_pct);
}
