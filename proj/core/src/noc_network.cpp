#include "inasim/noc/network.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace ina::noc {

namespace {

Port opposite(Port p) {
  switch (p) {
    case Port::North: return Port::South;
    case Port::South: return Port::North;
    case Port::East: return Port::West;
    case Port::West: return Port::East;
    case Port::Local: return Port::Local;
  }
  return Port::Local;
}

}  // namespace

int class_vc(PacketClass klass, int vcs) {
  bool collection = klass == PacketClass::InaChain || klass == PacketClass::Gather;
  return collection ? std::min(1, vcs - 1) : 0;
}

Network::Network(const MeshConfig& config) : config_(config) {
  config_.validate();
  long long routers = config_.n * config_.n;
  routers_.resize(routers);
  nis_.resize(routers);
  for (auto& r : routers_) {
    r.in.resize(kPorts);
    r.credits.resize(kPorts);
    for (int p = 0; p < kPorts; ++p) {
      r.credits[p] = {config_.buffer_depth, config_.buffer_depth};
    }
  }
  stats_.per_router.resize(routers);
}

bool Network::has_neighbor(NodeAddress a, Port p) const {
  switch (p) {
    case Port::North: return a.y + 1 < config_.n;
    case Port::South: return a.y > 0;
    case Port::East: return a.x + 1 < config_.n;
    case Port::West: return a.x > 0;
    case Port::Local: return false;
  }
  return false;
}

NodeAddress Network::neighbor(NodeAddress a, Port p) const {
  switch (p) {
    case Port::North: return {a.x, a.y + 1};
    case Port::South: return {a.x, a.y - 1};
    case Port::East: return {a.x + 1, a.y};
    case Port::West: return {a.x - 1, a.y};
    case Port::Local: break;
  }
  return a;
}

void Network::log_event(long long cycle, NodeAddress node, const char* kind,
                        long long id, long long vc_or_value) {
  if (!log_) return;
  *log_ << cycle << "," << rid(node) << "," << kind << "," << id << ","
        << vc_or_value << "\n";
}

std::optional<long long> Network::inject(Packet pkt) {
  int node = rid(pkt.src);
  if (static_cast<long long>(nis_[node].inject_q.size()) >=
      config_.ni_queue_packets) {
    return std::nullopt;  // backpressure
  }
  pkt.id = static_cast<long long>(packets_.size());
  if (pkt.present_cycle < cycle_) pkt.present_cycle = cycle_;
  if (pkt.klass == PacketClass::Gather &&
      pkt.slot_filled.size() != pkt.payload.size()) {
    pkt.slot_filled.assign(pkt.payload.size(), false);
  }
  packets_.push_back(std::move(pkt));
  nis_[node].inject_q.push_back(packets_.back().id);
  return packets_.back().id;
}

void Network::post_chain_operand(NodeAddress node, long long chain_id,
                                 long long round, std::vector<uint32_t> values,
                                 long long ready_cycle) {
  PendingOperand op;
  op.chain_id = chain_id;
  op.round = round;
  op.values = std::move(values);
  op.ready_cycle = ready_cycle;
  auto& pending = routers_[rid(node)].pending;
  for (const auto& existing : pending) {
    if (existing.chain_id == chain_id && existing.round == round) {
      throw ProtocolViolation("duplicate pending operand for chain " +
                              std::to_string(chain_id));
    }
  }
  pending.push_back(std::move(op));
}

void Network::post_gather_operand(NodeAddress node, long long round,
                                  long long slot_index,
                                  std::vector<uint32_t> values,
                                  long long ready_cycle) {
  auto& r = routers_[rid(node)];
  r.gather_ops.push_back({round, slot_index, std::move(values), ready_cycle});
}

void Network::tally_bus_transfer(NodeAddress dst, long long flits,
                                 long long hops) {
  auto& c = stats_.per_router[rid(dst)];
  c.ni_inject += 1;
  c.ni_eject += 1;
  c.link_traversal += flits * hops;
  stats_.totals.ni_inject += 1;
  stats_.totals.ni_eject += 1;
  stats_.totals.link_traversal += flits * hops;
}

void Network::tally_ni_inject(NodeAddress node) {
  stats_.per_router[rid(node)].ni_inject += 1;
  stats_.totals.ni_inject += 1;
  log_event(cycle_, node, "NI_INJ", -1, 0);
}

void Network::on_head_arrival(NodeAddress node, RouterState& router,
                              InputVc& vc, BufFlit& bf) {
  Packet& pkt = packets_[bf.flit.packet_id];
  vc.out_port = route_compute(node, pkt.dst);
  vc.out_granted = vc.out_port == Port::Local;
  vc.owner = pkt.id;

  if (pkt.klass == PacketClass::InaChain) {
    auto it = std::find_if(router.pending.begin(), router.pending.end(),
                           [&](const PendingOperand& op) {
                             return op.chain_id == pkt.chain_id &&
                                    op.round == pkt.round;
                           });
    if (it != router.pending.end()) {
      if (pkt.chain_mode == ChainMode::EjectInject) {
        // Eject to the PE, accumulate there, inject the result back: the
        // packet waits out the detour in its input VC.
        for (size_t i = 0; i < it->values.size() && i < pkt.payload.size(); ++i) {
          pkt.payload[i] = ina_accumulate(pkt.payload[i], it->values[i]);
        }
        long long stall = config_.ni_eject_latency + config_.local_acc_latency +
                          config_.ni_inject_latency +
                          2 * (pkt.flit_count - 1);
        bf.st_ready = std::max(bf.st_ready, it->ready_cycle) + stall;
        auto& c = stats_.per_router[rid(node)];
        c.ni_eject += 1;
        c.ni_inject += 1;
        stats_.totals.ni_eject += 1;
        stats_.totals.ni_inject += 1;
        log_event(cycle_, node, "NI_EJ", pkt.id, bf.flit.vc);
        log_event(cycle_, node, "NI_INJ", pkt.id, bf.flit.vc);
        router.pending.erase(it);
      } else if (pkt.chain_mode == ChainMode::InNetwork && ina_enabled_) {
        if (it->claimed) {
          throw ProtocolViolation("second head for chain " +
                                  std::to_string(pkt.chain_id) + " round " +
                                  std::to_string(pkt.round) +
                                  " before summation completed");
        }
        it->claimed = true;
        bf.acc_at_st = true;
        bf.st_ready = std::max(bf.st_ready, it->ready_cycle);
        if (router.ina_unit.state == InaState::Idle) {
          router.ina_unit = ina_step(router.ina_unit, InaInput::MatchingHead,
                                     pkt.payload.empty() ? 0 : pkt.payload[0],
                                     pkt.chain_id);
        }
      }
    }
  } else if (pkt.klass == PacketClass::Gather) {
    for (const auto& op : router.gather_ops) {
      if (op.round == pkt.round) {
        bf.st_ready = std::max(bf.st_ready, op.ready_cycle);
      }
    }
  }
}

void Network::process_arrivals(std::vector<SimEvent>&) {
  auto it = arrivals_.find(cycle_);
  if (it == arrivals_.end()) return;
  for (auto& [router_id, port, flit] : it->second) {
    auto& router = routers_[router_id];
    auto& vc = router.in[static_cast<int>(port)][flit.vc];
    if (static_cast<int>(vc.q.size()) >= config_.buffer_depth) {
      throw std::logic_error("credit violation: buffer over depth");
    }
    BufFlit bf;
    bf.flit = flit;
    bf.arrive = cycle_;
    bf.st_ready = cycle_ + (flit.head() ? 3 : 1);
    stats_.per_router[router_id].buffer_write += 1;
    stats_.totals.buffer_write += 1;
    if (flit.head()) {
      on_head_arrival(addr(router_id), router, vc, bf);
    }
    vc.q.push_back(std::move(bf));
    ++flits_in_routers_;
  }
  arrivals_.erase(it);
}

void Network::process_ni_inject() {
  for (size_t node = 0; node < nis_.size(); ++node) {
    auto& ni = nis_[node];
    if (ni.inject_q.empty()) continue;
    Packet& pkt = packets_[ni.inject_q.front()];
    if (cycle_ < pkt.present_cycle + config_.ni_inject_latency) continue;
    int v = class_vc(pkt.klass, config_.vcs);
    auto& router = routers_[node];
    auto& lvc = router.in[static_cast<int>(Port::Local)][v];
    if (ni.sent_flits == 0 && lvc.owner != -1) continue;  // VC busy
    if (static_cast<int>(lvc.q.size()) >= config_.buffer_depth) continue;

    long long seq = ni.sent_flits;
    Flit flit;
    flit.packet_id = pkt.id;
    flit.seq = static_cast<int>(seq);
    flit.vc = v;
    bool head = seq == 0;
    bool tail = seq == pkt.flit_count - 1;
    flit.kind = head && tail ? FlitKind::HeadTail
                : head       ? FlitKind::Head
                : tail       ? FlitKind::Tail
                             : FlitKind::Body;
    BufFlit bf;
    bf.flit = flit;
    bf.arrive = cycle_;
    bf.st_ready = cycle_ + (head ? 3 : 1);
    stats_.flits_created += 1;
    stats_.per_router[node].buffer_write += 1;
    stats_.totals.buffer_write += 1;
    if (head) {
      pkt.inject_cycle = cycle_;
      stats_.packets_injected += 1;
      stats_.per_router[node].ni_inject += 1;
      stats_.totals.ni_inject += 1;
      log_event(cycle_, pkt.src, "NI_INJ", pkt.id, v);
      on_head_arrival(addr(static_cast<int>(node)), router, lvc, bf);
    }
    lvc.q.push_back(std::move(bf));
    ++flits_in_routers_;
    if (tail) {
      ni.inject_q.pop_front();
      ni.sent_flits = 0;
    } else {
      ni.sent_flits += 1;
    }
  }
}

void Network::process_vc_allocation() {
  for (size_t id = 0; id < routers_.size(); ++id) {
    auto& router = routers_[id];
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < config_.vcs; ++v) {
        auto& ivc = router.in[p][v];
        if (ivc.q.empty() || ivc.out_granted) continue;
        const BufFlit& front = ivc.q.front();
        if (!front.flit.head()) continue;
        if (cycle_ < front.arrive + 1) continue;  // VA is stage 2
        NodeAddress here = addr(static_cast<int>(id));
        if (ivc.out_port == Port::Local) {
          ivc.out_granted = true;
          continue;
        }
        NodeAddress next = neighbor(here, ivc.out_port);
        auto& tvc = routers_[rid(next)]
                        .in[static_cast<int>(opposite(ivc.out_port))][v];
        if (tvc.owner == -1) {
          tvc.owner = front.flit.packet_id;
          ivc.out_granted = true;
        }
      }
    }
  }
}

void Network::retire_to_local(NodeAddress node, const BufFlit& bf,
                              std::vector<SimEvent>&) {
  stats_.flits_retired += 1;
  if (!bf.flit.tail()) return;
  const Packet& pkt = packets_[bf.flit.packet_id];
  long long when = pkt.absorb_at_end ? cycle_ + 1
                                     : cycle_ + 1 + config_.ni_eject_latency;
  deliveries_[when].push_back(pkt.id);
}

void Network::process_switch(std::vector<SimEvent>& events) {
  const int slots = kPorts * config_.vcs;
  for (size_t id = 0; id < routers_.size(); ++id) {
    auto& router = routers_[id];
    NodeAddress here = addr(static_cast<int>(id));
    for (int po = 0; po < kPorts; ++po) {
      int granted = -1;
      for (int k = 0; k < slots; ++k) {
        int idx = (router.sw_rr[po] + k) % slots;
        int p = idx / config_.vcs;
        int v = idx % config_.vcs;
        auto& ivc = router.in[p][v];
        if (ivc.q.empty()) continue;
        const BufFlit& front = ivc.q.front();
        if (static_cast<int>(ivc.out_port) != po || !ivc.out_granted) continue;
        if (front.st_ready > cycle_) continue;
        if (po != static_cast<int>(Port::Local) && router.credits[po][v] <= 0)
          continue;
        if (front.acc_at_st && router.ina_busy_cycle == cycle_)
          continue;  // one summation per router per cycle
        granted = idx;
        break;
      }
      if (granted < 0) continue;
      router.sw_rr[po] = (granted + 1) % slots;
      int p = granted / config_.vcs;
      int v = granted % config_.vcs;
      auto& ivc = router.in[p][v];
      BufFlit bf = ivc.q.front();
      ivc.q.pop_front();
      --flits_in_routers_;
      Packet& pkt = packets_[bf.flit.packet_id];

      auto& counters = stats_.per_router[id];
      counters.buffer_read += 1;
      counters.arbitration += 1;
      counters.crossbar_traversal += 1;
      stats_.totals.buffer_read += 1;
      stats_.totals.arbitration += 1;
      stats_.totals.crossbar_traversal += 1;

      if (p != static_cast<int>(Port::Local)) {
        NodeAddress up = neighbor(here, static_cast<Port>(p));
        routers_[rid(up)]
            .credits[static_cast<int>(opposite(static_cast<Port>(p)))][v] += 1;
      }

      if (bf.flit.head()) {
        if (bf.acc_at_st) {
          auto it = std::find_if(router.pending.begin(), router.pending.end(),
                                 [&](const PendingOperand& op) {
                                   return op.chain_id == pkt.chain_id &&
                                          op.round == pkt.round;
                                 });
          if (it != router.pending.end()) {
            for (size_t i = 0; i < it->values.size() && i < pkt.payload.size();
                 ++i) {
              pkt.payload[i] = ina_accumulate(pkt.payload[i], it->values[i]);
            }
            counters.ina_add += 1;
            counters.operand_latch += 1;
            stats_.totals.ina_add += 1;
            stats_.totals.operand_latch += 1;
            router.ina_busy_cycle = cycle_;
            if (router.ina_unit.state == InaState::AcquireOperand1 &&
                router.ina_unit.chain_id == pkt.chain_id) {
              router.ina_unit =
                  ina_step(router.ina_unit, InaInput::LocalOperand,
                           it->values.empty() ? 0 : it->values[0]);
              router.ina_unit = ina_step(router.ina_unit, InaInput::Traverse);
            }
            log_event(cycle_, here, "INA_ACC", pkt.chain_id,
                      pkt.payload.empty() ? 0 : pkt.payload[0]);
            router.pending.erase(it);
          }
        }
        if (pkt.klass == PacketClass::Gather) {
          for (auto it = router.gather_ops.begin();
               it != router.gather_ops.end();) {
            if (it->round == pkt.round) {
              gather_append(pkt, it->values, it->slot);
              counters.operand_latch +=
                  static_cast<long long>(it->values.size());
              stats_.totals.operand_latch +=
                  static_cast<long long>(it->values.size());
              it = router.gather_ops.erase(it);
            } else {
              ++it;
            }
          }
        }
      }

      if (po != static_cast<int>(Port::Local)) {
        counters.link_traversal += 1;
        stats_.totals.link_traversal += 1;
        router.credits[po][v] -= 1;
        NodeAddress next = neighbor(here, static_cast<Port>(po));
        arrivals_[cycle_ + 1 + config_.link_latency].push_back(
            {rid(next), opposite(static_cast<Port>(po)), bf.flit});
      } else {
        retire_to_local(here, bf, events);
      }

      if (bf.flit.tail()) {
        ivc.owner = -1;
        ivc.out_granted = false;
      }
    }
  }
}

void Network::process_deliveries(std::vector<SimEvent>& events) {
  auto it = deliveries_.find(cycle_);
  if (it == deliveries_.end()) return;
  for (long long id : it->second) {
    Packet& pkt = packets_[id];
    pkt.delivered = true;
    pkt.deliver_cycle = cycle_;
    stats_.packets_delivered += 1;
    stats_.latencies.push_back({pkt.id, pkt.klass, pkt.present_cycle,
                                pkt.inject_cycle, pkt.deliver_cycle});
    if (pkt.absorb_at_end) {
      // The completed partial sum stays in the router's collection buffer
      // and waits for the row gather.
      post_gather_operand(pkt.dst, pkt.round, pkt.gather_slot, pkt.payload,
                          cycle_);
      stats_.per_router[rid(pkt.dst)].operand_latch += 1;
      stats_.totals.operand_latch += 1;
    } else {
      stats_.per_router[rid(pkt.dst)].ni_eject += 1;
      stats_.totals.ni_eject += 1;
      log_event(cycle_, pkt.dst, "NI_EJ", pkt.id,
                class_vc(pkt.klass, config_.vcs));
    }
    SimEvent ev;
    ev.kind = SimEvent::Kind::Delivered;
    ev.cycle = cycle_;
    ev.node = pkt.dst;
    ev.packet_id = pkt.id;
    ev.chain_id = pkt.chain_id;
    ev.value = pkt.payload.empty() ? 0 : pkt.payload[0];
    events.push_back(ev);
  }
  deliveries_.erase(it);
}

void Network::check_livelock() {
  if ((cycle_ & 1023) != 0) return;
  for (const auto& pkt : packets_) {
    if (pkt.delivered || pkt.present_cycle < 0) continue;
    if (cycle_ - pkt.present_cycle > config_.livelock_bound) {
      throw LivelockError(
          "packet " + std::to_string(pkt.id) + " (" +
          packet_class_name(pkt.klass) + ") exceeded the age bound of " +
          std::to_string(config_.livelock_bound) +
          " cycles; drain timeout (possible missing local operand)");
    }
  }
}

std::vector<SimEvent> Network::step() {
  std::vector<SimEvent> events;
  process_arrivals(events);
  process_ni_inject();
  process_vc_allocation();
  process_switch(events);
  process_deliveries(events);
  check_livelock();
  ++cycle_;
  stats_.total_cycles = cycle_;
  return events;
}

bool Network::idle() const {
  if (flits_in_routers_ > 0 || !arrivals_.empty() || !deliveries_.empty())
    return false;
  for (const auto& ni : nis_) {
    if (!ni.inject_q.empty()) return false;
  }
  return true;
}

long long Network::next_activity() const {
  if (flits_in_routers_ > 0) return cycle_ + 1;
  long long best = -1;
  auto consider = [&](long long c) {
    c = std::max(c, cycle_);
    if (best < 0 || c < best) best = c;
  };
  if (!arrivals_.empty()) consider(arrivals_.begin()->first);
  if (!deliveries_.empty()) consider(deliveries_.begin()->first);
  for (const auto& ni : nis_) {
    if (ni.inject_q.empty()) continue;
    const Packet& pkt = packets_[ni.inject_q.front()];
    consider(ni.sent_flits > 0
                 ? cycle_
                 : pkt.present_cycle + config_.ni_inject_latency);
  }
  return best;
}

void Network::skip_to(long long cycle) {
  if (cycle <= cycle_) return;
  long long next = next_activity();
  if (flits_in_routers_ > 0 || (next >= 0 && next < cycle)) {
    throw std::logic_error("skip_to across pending activity");
  }
  cycle_ = cycle;
  stats_.total_cycles = cycle_;
}

SimStats run_until_drained(Network& net, std::vector<Packet> trace) {
  std::stable_sort(trace.begin(), trace.end(),
                   [](const Packet& a, const Packet& b) {
                     return a.present_cycle < b.present_cycle;
                   });
  size_t cursor = 0;
  std::deque<Packet> backlog;
  while (cursor < trace.size() || !backlog.empty() || !net.idle()) {
    // Skip idle stretches up to the next presentation.
    if (backlog.empty() && net.idle() && cursor < trace.size()) {
      long long due = trace[cursor].present_cycle;
      if (due > net.now()) net.skip_to(due);
    }
    while (cursor < trace.size() &&
           trace[cursor].present_cycle <= net.now()) {
      backlog.push_back(trace[cursor]);
      ++cursor;
    }
    while (!backlog.empty()) {
      Packet pkt = backlog.front();
      if (!net.inject(std::move(pkt))) break;  // retry next cycle
      backlog.pop_front();
    }
    net.step();
  }
  return net.stats();
}

}  // namespace ina::noc
