#pragma once

// Cycle-accurate model of the iterative AES-128 core FSM
// (IDLE -> INIT -> ROUND x9 -> FINAL -> IDLE).

#include <cstdint>
#include <ostream>
#include <string_view>

#include "spime/aes_primitives.hpp"

namespace spime {

enum class CoreState : std::uint8_t { Idle, Init, Round, Final };

constexpr std::string_view to_string(CoreState s) {
  switch (s) {
    case CoreState::Idle: return "IDLE";
    case CoreState::Init: return "INIT";
    case CoreState::Round: return "ROUND";
    case CoreState::Final: return "FINAL";
  }
  return "?";
}

/// Values on the core's input ports during one cycle. The cipher-key port
/// is not modelled: expansion happens upstream and arrives pre-unpacked.
struct AesCoreInputs {
  bool start = false;
  Block128 data_in{};
  RoundKeySchedule round_keys{};
};

/// One row of the optional per-cycle trace. `cycle` is the index of the
/// clock edge just committed, counted from reset.
struct CoreTraceRecord {
  std::uint64_t cycle = 0;
  CoreState state = CoreState::Idle;
  unsigned round = 0;
  bool done = false;
};

inline constexpr std::string_view kCoreTraceHeader = "cycle,state,round,done";

inline std::ostream& operator<<(std::ostream& os, const CoreTraceRecord& r) {
  return os << r.cycle << ',' << to_string(r.state) << ',' << r.round << ',' << (r.done ? 1 : 0);
}

class AesCoreSim {
 public:
  /// Cycles from INIT entry through the done-asserting FINAL edge.
  static constexpr unsigned kCyclesPerBlock = 1 + 9 + 1;
  static constexpr unsigned kLastRound = 9;

  AesCoreSim() { reset(); }

  void reset() {
    current_state_ = CoreState::Idle;
    state_reg_ = StateMatrix{};
    round_ = 0;
    round_keys_ = RoundKeySchedule{};
    done_ = false;
    data_out_ = Block128{};
    cycle_count_ = 0;
  }

  /// Advance one clock edge. Every register is computed from the values
  /// held before the edge and committed together.
  void step(const AesCoreInputs& in) {
    round_keys_ = in.round_keys;

    CoreState next = CoreState::Idle;
    switch (current_state_) {
      case CoreState::Idle:
        done_ = false;
        next = in.start ? CoreState::Init : CoreState::Idle;
        break;
      case CoreState::Init:
        round_ = 0;
        state_reg_ = add_round_key(to_state(in.data_in), round_keys_.keys[0]);
        next = CoreState::Round;
        break;
      case CoreState::Round: {
        state_reg_ = add_round_key(mix_columns(shift_rows(sub_bytes(state_reg_))),
                                   round_keys_.keys[round_ + 1]);
        ++round_;
        next = round_ == kLastRound ? CoreState::Final : CoreState::Round;
        break;
      }
      case CoreState::Final:
        state_reg_ = add_round_key(shift_rows(sub_bytes(state_reg_)),
                                   round_keys_.keys[RoundKeySchedule::kRounds]);
        data_out_ = to_block(state_reg_);
        done_ = true;
        next = CoreState::Idle;
        break;
    }
    current_state_ = next;
    ++cycle_count_;
  }

  CoreState current_state() const { return current_state_; }
  const StateMatrix& state_reg() const { return state_reg_; }
  unsigned round() const { return round_; }
  const RoundKeySchedule& round_keys() const { return round_keys_; }
  bool done() const { return done_; }
  const Block128& data_out() const { return data_out_; }
  std::uint64_t cycle_count() const { return cycle_count_; }

  CoreTraceRecord trace_record() const { return {cycle_count_, current_state_, round_, done_}; }

  friend bool operator==(const AesCoreSim&, const AesCoreSim&) = default;

 private:
  CoreState current_state_ = CoreState::Idle;
  StateMatrix state_reg_{};
  unsigned round_ = 0;
  RoundKeySchedule round_keys_{};
  bool done_ = false;
  Block128 data_out_{};
  std::uint64_t cycle_count_ = 0;
};

struct CoreEncryption {
  Block128 ciphertext{};
  unsigned cycles = 0;  // INIT entry through done, IDLE excluded
};

/// Expand, reset, pulse start for one cycle and step until done.
inline CoreEncryption encrypt_block(const Block128& key, const Block128& plaintext) {
  AesCoreSim core;
  AesCoreInputs in{true, plaintext, expand_key(key)};
  core.step(in);  // IDLE samples start
  in.start = false;

  CoreEncryption result;
  while (!core.done()) {
    core.step(in);
    ++result.cycles;
  }
  result.ciphertext = core.data_out();
  return result;
}

}  // namespace spime
