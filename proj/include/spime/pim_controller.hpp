#pragma once

// Per-unit controller FSM (IDLE -> START_AES -> WAIT_AES -> DONE) and the
// controller+core pair it drives.

#include <cstdint>
#include <ostream>
#include <string_view>

#include "spime/aes_core.hpp"

namespace spime {

enum class ControllerState : std::uint8_t { Idle, StartAes, WaitAes, Done };

constexpr std::string_view to_string(ControllerState s) {
  switch (s) {
    case ControllerState::Idle: return "IDLE";
    case ControllerState::StartAes: return "START_AES";
    case ControllerState::WaitAes: return "WAIT_AES";
    case ControllerState::Done: return "DONE";
  }
  return "?";
}

class PimControllerSim {
 public:
  PimControllerSim() { reset(); }

  /// Clears state and the handshake flags. data_out keeps its last value;
  /// only the power-on state zeroes it.
  void reset() {
    state_ = ControllerState::Idle;
    aes_start_ = false;
    done_ = false;
  }

  void step(bool start, bool aes_done, const Block128& aes_data_out) {
    switch (state_) {
      case ControllerState::Idle:
        if (start) {
          aes_start_ = true;
          state_ = ControllerState::StartAes;
        }
        break;
      case ControllerState::StartAes:
        aes_start_ = false;
        state_ = ControllerState::WaitAes;
        break;
      case ControllerState::WaitAes:
        if (aes_done) {
          data_out_ = aes_data_out;
          done_ = true;
          state_ = ControllerState::Done;
        }
        break;
      case ControllerState::Done:
        done_ = false;
        state_ = ControllerState::Idle;
        break;
    }
  }

  ControllerState state() const { return state_; }
  bool aes_start() const { return aes_start_; }
  bool done() const { return done_; }
  const Block128& data_out() const { return data_out_; }

  friend bool operator==(const PimControllerSim&, const PimControllerSim&) = default;

 private:
  ControllerState state_ = ControllerState::Idle;
  bool aes_start_ = false;
  bool done_ = false;
  Block128 data_out_{};
};

/// Combined per-cycle trace row for one controller+core pair.
struct UnitTraceRecord {
  std::uint64_t cycle = 0;
  ControllerState ctrl_state = ControllerState::Idle;
  bool aes_start = false;
  bool aes_done = false;
  bool done = false;
  CoreState core_state = CoreState::Idle;
  unsigned round = 0;
};

inline constexpr std::string_view kUnitTraceHeader =
    "cycle,state,aes_start,aes_done,done,core_state,round";

inline std::ostream& operator<<(std::ostream& os, const UnitTraceRecord& r) {
  return os << r.cycle << ',' << to_string(r.ctrl_state) << ',' << (r.aes_start ? 1 : 0) << ','
            << (r.aes_done ? 1 : 0) << ',' << (r.done ? 1 : 0) << ',' << to_string(r.core_state)
            << ',' << r.round;
}

/// One processing unit: a controller wired directly to its core. Plaintext
/// and round keys are routed straight from the unit's input ports; the
/// controller's aes_start and the core's done/data_out cross as registered
/// signals, so each side sees the other's value from the previous edge.
class PimUnit {
 public:
  /// Start sampled -> START_AES -> core samples start -> 11 core cycles ->
  /// controller samples done -> DONE cycle -> ready again.
  static constexpr unsigned kEndToEndCycles = 1 + 1 + AesCoreSim::kCyclesPerBlock + 1 + 1;

  PimUnit() = default;

  void reset() {
    ctrl_.reset();
    core_.reset();
    cycle_ = 0;
  }

  void set_key(const Block128& key) { round_keys_ = expand_key(key); }
  void set_round_keys(const RoundKeySchedule& rks) { round_keys_ = rks; }
  void set_data_in(const Block128& data) { data_in_ = data; }

  void step(bool start) {
    const bool aes_start = ctrl_.aes_start();
    const bool aes_done = core_.done();
    const Block128 aes_out = core_.data_out();
    ctrl_.step(start, aes_done, aes_out);
    core_.step(AesCoreInputs{aes_start, data_in_, round_keys_});
    ++cycle_;
  }

  bool ready() const { return ctrl_.state() == ControllerState::Idle; }

  const PimControllerSim& controller() const { return ctrl_; }
  const AesCoreSim& core() const { return core_; }
  std::uint64_t cycle() const { return cycle_; }

  UnitTraceRecord trace_record() const {
    return {cycle_, ctrl_.state(), ctrl_.aes_start(), core_.done(), ctrl_.done(),
            core_.current_state(), core_.round()};
  }

  friend bool operator==(const PimUnit&, const PimUnit&) = default;

 private:
  PimControllerSim ctrl_;
  AesCoreSim core_;
  RoundKeySchedule round_keys_{};
  Block128 data_in_{};
  std::uint64_t cycle_ = 0;
};

struct BlockRun {
  Block128 ciphertext{};
  unsigned end_to_end_cycles = 0;  // start sampled through return to IDLE
  unsigned done_latency = 0;       // start sampled through done assertion
};

/// Drive one block through a controller+core pair: start is held for one
/// cycle, and the run ends when the controller is ready again.
inline BlockRun run_block(PimUnit& unit, const Block128& key, const Block128& plaintext) {
  unit.set_key(key);
  unit.set_data_in(plaintext);

  BlockRun run;
  bool start = true;
  do {
    unit.step(start);
    start = false;
    ++run.end_to_end_cycles;
    if (unit.controller().done()) {
      run.ciphertext = unit.controller().data_out();
      run.done_latency = run.end_to_end_cycles;
    }
  } while (!unit.ready());
  return run;
}

}  // namespace spime
