#include "inasim/noc/ina.hpp"

namespace ina::noc {

bool ina_match(long long chain_id, long long round,
               std::span<const PendingOperand> pending) {
  for (const auto& op : pending) {
    if (op.chain_id == chain_id && op.round == round) return true;
  }
  return false;
}

InaUnitState ina_step(const InaUnitState& unit, InaInput input, uint32_t value,
                      long long chain_id) {
  InaUnitState next = unit;
  switch (input) {
    case InaInput::None:
      return next;
    case InaInput::MatchingHead:
      if (unit.state != InaState::Idle) {
        throw ProtocolViolation(
            "second matching chain head (chain " + std::to_string(chain_id) +
            ") before the previous summation completed");
      }
      next.state = InaState::AcquireOperand1;
      next.operand1 = value;
      next.chain_id = chain_id;
      return next;
    case InaInput::LocalOperand:
      if (unit.state != InaState::AcquireOperand1) {
        throw ProtocolViolation("local operand latched with no chain in flight");
      }
      next.state = InaState::AcquireOperand2;
      next.operand2 = value;
      return next;
    case InaInput::Traverse:
      if (unit.state != InaState::AcquireOperand2 || !unit.operand1 ||
          !unit.operand2) {
        throw ProtocolViolation("summation fired without both operands");
      }
      next.state = InaState::Idle;  // Summation completes within the traversal
      next.result = ina_accumulate(*unit.operand1, *unit.operand2);
      next.operand1.reset();
      next.operand2.reset();
      next.chain_id = -1;
      return next;
  }
  return next;
}

void gather_append(Packet& gather, std::span<const uint32_t> payloads,
                   long long slot_index) {
  if (gather.klass != PacketClass::Gather) {
    throw GatherSlotError("gather_append on a non-gather packet");
  }
  if (slot_index < 0 ||
      slot_index + static_cast<long long>(payloads.size()) >
          static_cast<long long>(gather.payload.size())) {
    throw GatherSlotError("gather payload exceeds the packet's reserved slots");
  }
  if (gather.slot_filled.size() != gather.payload.size()) {
    gather.slot_filled.assign(gather.payload.size(), false);
  }
  for (size_t i = 0; i < payloads.size(); ++i) {
    size_t slot = static_cast<size_t>(slot_index) + i;
    if (gather.slot_filled[slot]) {
      throw GatherSlotError("gather slot " + std::to_string(slot) +
                            " already filled");
    }
    gather.payload[slot] = payloads[i];
    gather.slot_filled[slot] = true;
  }
}

}  // namespace ina::noc
