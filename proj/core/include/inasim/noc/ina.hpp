#ifndef INASIM_NOC_INA_HPP
#define INASIM_NOC_INA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "inasim/noc/packet.hpp"

namespace ina::noc {

class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(const std::string& what)
      : std::runtime_error(what) {}
};

class GatherSlotError : public std::runtime_error {
 public:
  explicit GatherSlotError(const std::string& what)
      : std::runtime_error(what) {}
};

// Two's-complement wrapping add; the accumulation primitive.
inline uint32_t ina_accumulate(uint32_t operand1, uint32_t operand2) {
  return operand1 + operand2;
}

// Partial sum waiting at a router for a matching chain packet.
struct PendingOperand {
  long long chain_id = -1;
  long long round = -1;
  std::vector<uint32_t> values;   // one word per PE slot
  long long ready_cycle = 0;
  bool claimed = false;           // a matching head is in flight through this router
};

// True iff a pending operand with the head flit's chain identity exists.
bool ina_match(long long chain_id, long long round,
               std::span<const PendingOperand> pending);

// Accumulation-unit control: Idle -> AcquireOperand1 -> AcquireOperand2 ->
// Summation -> Idle.
enum class InaState { Idle, AcquireOperand1, AcquireOperand2, Summation };

enum class InaInput {
  None,
  MatchingHead,   // head flit of a matching chain arrived
  LocalOperand,   // local PE's partial sum latched from the NI side
  Traverse        // payload passes the switch; the add fires
};

struct InaUnitState {
  InaState state = InaState::Idle;
  std::optional<uint32_t> operand1;  // from the network
  std::optional<uint32_t> operand2;  // from the local NI
  long long chain_id = -1;
  uint32_t result = 0;

  bool operator==(const InaUnitState&) const = default;
};

// Advances the unit by one input. Returns the new state; when the Summation
// fires the result field holds the wrapped sum and both slots are cleared.
// Throws ProtocolViolation on a second matching head before Summation
// completes or on inputs the control logic cannot accept.
InaUnitState ina_step(const InaUnitState& unit, InaInput input,
                      uint32_t value = 0, long long chain_id = -1);

// Writes payload words into a gather packet's reserved slots starting at
// slot_index. Throws GatherSlotError on overflow or an already-filled slot.
void gather_append(Packet& gather, std::span<const uint32_t> payloads,
                   long long slot_index);

}  // namespace ina::noc

#endif
