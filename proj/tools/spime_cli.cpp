// spime: command-line front end for the encryption array simulator and the
// analytical performance model.
//
//   spime encrypt  --key K (--plaintext P | --input FILE) [--output FILE] [--verify]
//   spime simulate --input JOB [--num-pims N] [--trace FILE] [--output FILE]
//   spime sweep    [--figure 3..7 | --num-pims .. --fmax-mhz .. --block-bits .. --device ..]
//   spime devices
//
// Exit codes: 0 ok, 2 usage/malformed input, 3 I/O, 4 verification mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spime/spime.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerify = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write to " + path + " failed");
}

std::vector<spime::DeviceSpec> load_devices(const std::string& catalog_path) {
  if (catalog_path.empty()) {
    try {
      return spime::default_catalog();
    } catch (const std::ios_base::failure& e) {
      throw IoError(e.what());
    }
  }
  auto in = open_input(catalog_path);
  return spime::load_catalog(in);
}

struct EncryptOpts {
  std::string key, plaintext, input, output;
  bool verify = false;
};

void cmd_encrypt(const EncryptOpts& o) {
  const auto key = spime::Block128::from_hex(o.key);
  const auto schedule = spime::expand_key(key);

  std::vector<spime::Block128> plaintexts;
  if (!o.input.empty()) {
    auto in = open_input(o.input);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      try {
        plaintexts.push_back(spime::Block128::from_hex(line));
      } catch (const spime::ParseError& e) {
        throw spime::ParseError(e.what(), lineno);
      }
    }
  } else {
    plaintexts.push_back(spime::Block128::from_hex(o.plaintext));
  }

  std::vector<spime::Block128> ciphertexts;
  for (const auto& pt : plaintexts) {
    const auto run = spime::encrypt_block(key, pt);
    if (o.verify && run.ciphertext != spime::encrypt_reference(schedule, pt)) {
      throw VerifyError("FSM ciphertext " + run.ciphertext.to_hex() + " for plaintext " +
                        pt.to_hex() + " disagrees with the reference composition");
    }
    ciphertexts.push_back(run.ciphertext);
  }
  with_output(o.output, [&](std::ostream& os) {
    for (const auto& c : ciphertexts) os << c.to_hex() << '\n';
  });
}

struct SimulateOpts {
  std::string input, output, trace;
  std::optional<std::size_t> num_pims;
};

void cmd_simulate(const SimulateOpts& o) {
  auto in = open_input(o.input);
  const auto job = spime::parse_job(in);
  if (job.inputs.empty()) throw spime::ParseError("job file " + o.input + " has no units");
  if (o.num_pims && *o.num_pims != job.inputs.size()) {
    throw spime::ConfigError("--num-pims " + std::to_string(*o.num_pims) + " but job file has " +
                             std::to_string(job.inputs.size()) + " units");
  }

  spime::SpimeConfig cfg;
  cfg.num_pims = job.inputs.size();
  cfg.per_pim_block_bits = job.inputs.front().size() * 128;
  cfg.trace_enabled = !o.trace.empty();

  spime::SpimeArraySim array(cfg);
  const auto result = array.run_job(job);

  if (!o.output.empty()) {
    with_output(o.output, [&](std::ostream& os) {
      spime::write_blocks_file(os, job.keys, result.outputs);
    });
  }
  if (cfg.trace_enabled) {
    with_output(o.trace, [&](std::ostream& os) { array.write_trace_csv(os); });
  }

  std::cout << "units: " << cfg.num_pims << '\n'
            << "blocks_per_unit: " << cfg.blocks_per_pim() << '\n'
            << "end_to_end_cycles_per_block: " << spime::PimUnit::kEndToEndCycles << '\n'
            << "core_cycles_per_block: " << spime::AesCoreSim::kCyclesPerBlock << '\n'
            << "total_cycles: " << result.total_cycles << '\n';
  if (o.output.empty()) spime::write_blocks_file(std::cout, job.keys, result.outputs);
}

struct SweepOpts {
  std::optional<int> figure;
  std::vector<unsigned> num_pims;
  std::vector<double> fmax_mhz;
  std::vector<unsigned> block_bits;
  std::vector<std::string> devices;
  unsigned cycles_per_task = spime::AesCoreSim::kCyclesPerBlock;
  bool per_unit = false;
  std::string output, catalog;
};

void cmd_sweep(const SweepOpts& o) {
  const auto catalog = load_devices(o.catalog);
  std::vector<spime::SweepPoint> points;
  if (o.figure) {
    points = spime::figure_grid(*o.figure, catalog);
    for (auto& p : points) p.query.cycles_per_task = o.cycles_per_task;
  } else {
    std::vector<spime::DeviceSpec> devices;
    if (o.devices.empty()) {
      devices = catalog;
    } else {
      for (const auto& name : o.devices) devices.push_back(spime::find_device(catalog, name));
    }
    points = spime::make_grid(
        devices, o.fmax_mhz.empty() ? spime::kPaperFmaxMhz : o.fmax_mhz,
        o.num_pims.empty() ? spime::kPaperPimCounts : o.num_pims,
        o.block_bits.empty() ? std::vector<unsigned>{1024} : o.block_bits, o.cycles_per_task);
  }
  const auto rows = spime::sweep(points, o.per_unit ? spime::ThroughputMode::PerUnit
                                                    : spime::ThroughputMode::Aggregate);
  with_output(o.output, [&](std::ostream& os) { spime::write_sweep_csv(os, rows); });
}

void cmd_devices(const std::string& catalog_path) {
  const auto catalog = load_devices(catalog_path);
  std::printf("%-8s %-22s %9s %8s %6s %6s %6s\n", "Device", "Part", "LUTs (K)", "FFs (K)", "BRAM",
              "URAM", "DSPs");
  for (const auto& d : catalog) {
    std::printf("%-8s %-22s %9g %8g %6g %6g %6g\n", d.name.c_str(), d.part.c_str(),
                d.luts / 1000.0, d.ffs / 1000.0, d.bram, d.uram, d.dsps);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPiME encryption array simulator and performance model"};
  app.require_subcommand(1);

  EncryptOpts enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt 128-bit blocks through the core FSM");
  encrypt->add_option("--key", enc.key, "128-bit key, 32 hex chars")->required();
  auto* pt_opt = encrypt->add_option("--plaintext", enc.plaintext, "Plaintext block, 32 hex chars");
  auto* in_opt = encrypt->add_option("--input", enc.input, "File with one plaintext block per line");
  pt_opt->excludes(in_opt);
  encrypt->add_option("--output", enc.output, "Write ciphertexts here instead of stdout");
  encrypt->add_flag("--verify", enc.verify, "Cross-check against the reference composition");

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Run a job through the cycle-accurate array");
  simulate->add_option("--input", sim.input, "Job file: '<key> <block>[,<block>...]' per unit")
      ->required();
  simulate->add_option("--num-pims", sim.num_pims, "Expected unit count")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trace", sim.trace, "Write a per-cycle trace CSV here");
  simulate->add_option("--output", sim.output, "Write the result file here");

  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the performance model over a grid");
  auto* fig_opt = sweep->add_option("--figure", sw.figure, "Preset grid for figure 3..7")
                      ->check(CLI::Range(3, 7));
  sweep->add_option("--num-pims", sw.num_pims, "Unit counts")->excludes(fig_opt)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--fmax-mhz", sw.fmax_mhz, "Clock frequencies (MHz)")->excludes(fig_opt)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--block-bits", sw.block_bits, "Per-unit block sizes in bits")
      ->excludes(fig_opt)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--device", sw.devices, "Device names from the catalog")->excludes(fig_opt);
  sweep->add_option("--cycles-per-task", sw.cycles_per_task, "Cycles per 128-bit block")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--per-unit", sw.per_unit, "Per-unit throughput instead of aggregate");
  sweep->add_option("--output", sw.output, "Write CSV here instead of stdout");
  sweep->add_option("--catalog", sw.catalog, "Device catalog CSV");

  std::string devices_catalog;
  auto* devices = app.add_subcommand("devices", "List the FPGA device catalog");
  devices->add_option("--catalog", devices_catalog, "Device catalog CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*encrypt) {
      if (pt_opt->count() == 0 && in_opt->count() == 0) {
        throw spime::ConfigError("one of --plaintext or --input is required");
      }
      cmd_encrypt(enc);
    } else if (*simulate) {
      cmd_simulate(sim);
    } else if (*sweep) {
      cmd_sweep(sw);
    } else if (*devices) {
      cmd_devices(devices_catalog);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const VerifyError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
