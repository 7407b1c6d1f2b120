#pragma once

// Top-level array: NUM_PiMs controller+core pairs on one clock, fed from
// preloaded per-unit input buffers and collected into output buffers.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spime/pim_controller.hpp"

namespace spime {

struct SpimeConfig {
  std::size_t num_pims = 1;
  std::size_t per_pim_block_bits = 128;
  bool trace_enabled = false;

  std::size_t blocks_per_pim() const { return per_pim_block_bits / 128; }

  void validate() const {
    if (num_pims == 0) throw ConfigError("num_pims must be at least 1");
    if (per_pim_block_bits == 0 || per_pim_block_bits % 128 != 0) {
      throw ConfigError("per_pim_block_bits must be a positive multiple of 128, got " +
                        std::to_string(per_pim_block_bits));
    }
  }
};

struct SpimeJob {
  std::vector<Block128> keys;                 // one per unit
  std::vector<std::vector<Block128>> inputs;  // one block sequence per unit
};

struct SpimeResult {
  std::vector<std::vector<Block128>> outputs;
  std::uint64_t total_cycles = 0;
  std::vector<bool> done_flags;

  friend bool operator==(const SpimeResult&, const SpimeResult&) = default;
};

struct UnitObservation {
  ControllerState ctrl_state = ControllerState::Idle;
  CoreState core_state = CoreState::Idle;
  bool aes_start = false;
  bool aes_done = false;
  bool done = false;

  friend bool operator==(const UnitObservation&, const UnitObservation&) = default;
};

class SpimeArraySim {
 public:
  explicit SpimeArraySim(SpimeConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    units_.resize(cfg_.num_pims);
    drivers_.resize(cfg_.num_pims);
  }

  const SpimeConfig& config() const { return cfg_; }
  std::size_t size() const { return units_.size(); }
  const PimUnit& unit(std::size_t i) const { return units_.at(i); }
  std::uint64_t cycle() const { return cycle_; }

  /// Reset every unit and preload the per-unit key and input buffers.
  void load_job(const SpimeJob& job) {
    check_shape(job);
    reset();
    for (std::size_t i = 0; i < units_.size(); ++i) {
      units_[i].set_key(job.keys[i]);
      drivers_[i].inputs = job.inputs[i];
    }
  }

  void reset() {
    for (auto& u : units_) u.reset();
    for (auto& d : drivers_) d = Driver{};
    cycle_ = 0;
    trace_.clear();
  }

  /// One global clock edge. A unit raises its start input whenever its
  /// controller is idle and blocks remain; with equal-length buffers all
  /// units see the same start pulses.
  std::vector<UnitObservation> tick() {
    std::vector<UnitObservation> obs(units_.size());
    for (std::size_t i = 0; i < units_.size(); ++i) {
      obs[i] = tick_unit(i);
    }
    ++cycle_;
    return obs;
  }

  bool finished() const {
    for (std::size_t i = 0; i < units_.size(); ++i) {
      if (!drivers_[i].complete() || !units_[i].ready()) return false;
    }
    return true;
  }

  SpimeResult result() const {
    SpimeResult r;
    r.total_cycles = cycle_;
    r.outputs.reserve(drivers_.size());
    r.done_flags.reserve(drivers_.size());
    for (const auto& d : drivers_) {
      r.outputs.push_back(d.outputs);
      r.done_flags.push_back(d.complete());
    }
    return r;
  }

  SpimeResult run_job(const SpimeJob& job) {
    load_job(job);
    while (!finished()) tick();
    return result();
  }

  /// Rows are `unit,` followed by the unit trace columns; empty unless
  /// trace_enabled.
  void write_trace_csv(std::ostream& os) const {
    os << "unit," << kUnitTraceHeader << '\n';
    for (const auto& [unit, rec] : trace_) os << unit << ',' << rec << '\n';
  }

 private:
  struct Driver {
    std::vector<Block128> inputs;
    std::vector<Block128> outputs;
    std::size_t next = 0;
    bool in_flight = false;

    bool complete() const { return !in_flight && next == inputs.size(); }
  };

  void check_shape(const SpimeJob& job) const {
    if (job.keys.size() != cfg_.num_pims || job.inputs.size() != cfg_.num_pims) {
      throw ConfigError("job has " + std::to_string(job.inputs.size()) + " input buffers and " +
                        std::to_string(job.keys.size()) + " keys, array has " +
                        std::to_string(cfg_.num_pims) + " units");
    }
    for (std::size_t i = 0; i < job.inputs.size(); ++i) {
      if (job.inputs[i].size() != cfg_.blocks_per_pim()) {
        throw ConfigError("unit " + std::to_string(i) + " has " +
                          std::to_string(job.inputs[i].size()) + " blocks, expected " +
                          std::to_string(cfg_.blocks_per_pim()));
      }
    }
  }

  UnitObservation tick_unit(std::size_t i) {
    PimUnit& u = units_[i];
    Driver& d = drivers_[i];
    const bool start = !d.in_flight && d.next < d.inputs.size() && u.ready();
    if (start) u.set_data_in(d.inputs[d.next]);
    u.step(start);
    if (start) d.in_flight = true;
    if (u.controller().done()) {
      d.outputs.push_back(u.controller().data_out());
      d.in_flight = false;
      ++d.next;
    }
    if (cfg_.trace_enabled) trace_.emplace_back(i, u.trace_record());
    return {u.controller().state(), u.core().current_state(), u.controller().aes_start(),
            u.core().done(), u.controller().done()};
  }

  SpimeConfig cfg_;
  std::vector<PimUnit> units_;
  std::vector<Driver> drivers_;
  std::uint64_t cycle_ = 0;
  std::vector<std::pair<std::size_t, UnitTraceRecord>> trace_;
};

// Job / result text files: one line per unit,
//   <key-hex32> <block-hex32>[,<block-hex32>...]
// Blank lines and lines starting with '#' are skipped.

inline SpimeJob parse_job(std::istream& is) {
  SpimeJob job;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string key_hex, blocks_csv, extra;
    if (!(fields >> key_hex >> blocks_csv)) throw ParseError("expected '<key> <blocks>'", lineno);
    if (fields >> extra) throw ParseError("unexpected trailing field '" + extra + "'", lineno);

    try {
      job.keys.push_back(Block128::from_hex(key_hex));
      std::vector<Block128> blocks;
      std::size_t pos = 0;
      while (true) {
        const auto comma = blocks_csv.find(',', pos);
        blocks.push_back(Block128::from_hex(std::string_view(blocks_csv).substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      job.inputs.push_back(std::move(blocks));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return job;
}

inline void write_blocks_file(std::ostream& os, const std::vector<Block128>& keys,
                              const std::vector<std::vector<Block128>>& blocks) {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    os << keys[i].to_hex() << ' ';
    for (std::size_t j = 0; j < blocks[i].size(); ++j) {
      if (j) os << ',';
      os << blocks[i][j].to_hex();
    }
    os << '\n';
  }
}

}  // namespace spime
