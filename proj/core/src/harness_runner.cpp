#include "inasim/harness/runner.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "inasim/traffic/values.hpp"

namespace ina::harness {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::WsIna: return "ws_ina";
    case Mode::WsPlain: return "ws_plain";
    case Mode::OsGather: return "os_gather";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "ws_ina") return Mode::WsIna;
  if (name == "ws_plain") return Mode::WsPlain;
  if (name == "os_gather") return Mode::OsGather;
  throw ConfigError("unknown mode '" + name +
                    "' (expected ws_ina, ws_plain, os_gather)");
}

traffic::Schedule make_schedule(const LayerShape& layer, Mode mode,
                                const MeshShape& mesh, const Precision& q,
                                const PeMemory& mem,
                                std::optional<long long> rounds_cap,
                                uint64_t seed) {
  switch (mode) {
    case Mode::WsIna:
      return traffic::gen_ws_trace(layer, mesh, q, mem, true, rounds_cap, seed);
    case Mode::WsPlain:
      return traffic::gen_ws_trace(layer, mesh, q, mem, false, rounds_cap,
                                   seed);
    case Mode::OsGather:
      return traffic::gen_os_trace(layer, mesh, q, mem, rounds_cap, seed);
  }
  throw ConfigError("bad mode");
}

namespace {

struct RowState {
  long long expected = 0;
  long long arrived = 0;
  bool launched = false;
};

struct Runner {
  const traffic::Schedule& sched;
  const RunOptions& opts;
  noc::MeshConfig cfg;
  noc::Network net;
  RunResult result;

  long long n, e, p;
  long long chain_flits, gather_flits;

  // per-round state
  long long round_ = 0;
  std::map<long long, RowState> rows_;
  std::map<long long, std::vector<uint32_t>> final_vals_;
  std::map<long long, long long> final_ready_;
  std::deque<noc::Packet> pending_;  // sorted by present_cycle
  std::deque<noc::Packet> backlog_;
  long long gathers_expected_ = 0;
  long long gathers_delivered_ = 0;

  Runner(const traffic::Schedule& s, const RunOptions& o)
      : sched(s), opts(o), cfg(make_config(s, o)), net(cfg) {
    n = s.mesh.n;
    e = s.mesh.e;
    p = s.parts.part_count;
    chain_flits = cfg.packet_flits(e);
    gather_flits = cfg.packet_flits(n * e);
    net.set_ina_enabled(s.ina_enabled);
    net.set_event_log(o.event_log);
  }

  static noc::MeshConfig make_config(const traffic::Schedule& s,
                                     const RunOptions& o) {
    noc::MeshConfig cfg = o.base;
    cfg.n = s.mesh.n;
    cfg.pes_per_router = s.mesh.e;
    cfg.validate();
    return cfg;
  }

  void record(const noc::Packet& pkt) {
    if (!opts.collect_trace) return;
    result.trace.push_back({net.now(), pkt.src, pkt.dst, pkt.klass,
                            pkt.flit_count, pkt.chain_id});
  }

  std::vector<uint32_t> part_values(long long round, long long column,
                                    long long group, long long part) const {
    std::vector<uint32_t> values(e, 0);
    long long begin = sched.parts.offsets[part];
    long long end = begin + sched.parts.sizes[part];
    for (long long s = 0; s < e; ++s) {
      auto work = sched.item(round, sched.lane_index(column, group, s));
      if (!work) continue;
      values[s] = traffic::partial_value(sched.seed, work->filter, work->pixel,
                                         begin, end);
    }
    return values;
  }

  void tally_streams(const traffic::RoundPlan& plan, long long round_start) {
    auto one = [&](const traffic::StreamOp& op) {
      long long flits = cfg.packet_flits(op.words);
      net.tally_bus_transfer(op.dst, flits, op.dst.x + 1);
      if (opts.collect_trace) {
        result.trace.push_back({round_start,
                                {0, op.dst.y},
                                op.dst,
                                noc::PacketClass::Stream,
                                flits,
                                -1});
      }
    };
    for (const auto& op : plan.weight_streams) one(op);
    for (const auto& op : plan.input_streams) one(op);
  }

  noc::Packet make_gather(long long row, long long present) {
    noc::Packet pkt;
    pkt.klass = noc::PacketClass::Gather;
    pkt.src = {0, static_cast<int>(row)};
    pkt.dst = {static_cast<int>(n - 1), static_cast<int>(row)};
    pkt.flit_count = gather_flits;
    pkt.payload.assign(n * e, 0);
    pkt.slot_filled.assign(n * e, false);
    pkt.round = round_;
    pkt.present_cycle = present;
    return pkt;
  }

  void launch_gather(long long row, long long present) {
    auto& state = rows_[row];
    if (state.launched) return;
    state.launched = true;
    ++gathers_expected_;
    noc::Packet pkt = make_gather(row, present);
    if (present <= net.now()) {
      backlog_.push_back(std::move(pkt));
    } else {
      pending_.push_back(std::move(pkt));
      std::stable_sort(pending_.begin(), pending_.end(),
                       [](const noc::Packet& a, const noc::Packet& b) {
                         return a.present_cycle < b.present_cycle;
                       });
    }
  }

  void setup_round(const traffic::RoundPlan& plan, long long round_start) {
    rows_.clear();
    final_vals_.clear();
    final_ready_.clear();
    gathers_expected_ = 0;
    gathers_delivered_ = 0;
    tally_streams(plan, round_start);

    if (p == 1) {
      // Results go straight from the PE into the router's collection
      // buffer; no chain traffic.
      long long ready =
          round_start + sched.parts.sizes[0] + cfg.ni_inject_latency;
      for (long long g = 0; g < sched.groups; ++g) {
        for (long long c = 0; c < n; ++c) {
          if (!sched.group_active(round_, c, g)) continue;
          long long row = sched.final_row(g);
          noc::NodeAddress node{static_cast<int>(c), static_cast<int>(row)};
          net.tally_ni_inject(node);
          net.post_gather_operand(node, round_, c * e,
                                  part_values(round_, c, g, 0), ready);
          rows_[row].expected += 1;
          rows_[row].arrived += 1;
        }
      }
      for (long long row : plan.gather_rows) launch_gather(row, ready);
      return;
    }

    for (const auto& chain : plan.chains) {
      long long c = chain.column, g = chain.group;
      noc::Packet pkt;
      pkt.klass = noc::PacketClass::InaChain;
      pkt.src = {static_cast<int>(c), static_cast<int>(sched.part_row(g, 0))};
      pkt.dst = {static_cast<int>(c), static_cast<int>(sched.final_row(g))};
      pkt.flit_count = chain_flits;
      pkt.payload = part_values(round_, c, g, 0);
      pkt.chain_id = chain.chain_id;
      pkt.round = round_;
      pkt.chain_mode = sched.ina_enabled ? noc::ChainMode::InNetwork
                                         : noc::ChainMode::EjectInject;
      pkt.absorb_at_end = sched.ina_enabled;
      pkt.gather_slot = c * e;
      pkt.present_cycle = round_start + sched.parts.sizes[0];
      pending_.push_back(std::move(pkt));
      rows_[sched.final_row(g)].expected += 1;

      for (long long j = 1; j < p; ++j) {
        std::vector<uint32_t> values = part_values(round_, c, g, j);
        long long ready = round_start + sched.parts.sizes[j];
        noc::NodeAddress node{static_cast<int>(c),
                              static_cast<int>(sched.part_row(g, j))};
        if (sched.ina_enabled || j + 1 < p) {
          net.post_chain_operand(node, chain.chain_id, round_,
                                 std::move(values), ready);
        } else {
          // Without accumulating routers the last node's share is added PE
          // side after the chain ejects there.
          final_vals_[chain.chain_id] = std::move(values);
          final_ready_[chain.chain_id] = ready;
        }
      }
    }
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const noc::Packet& a, const noc::Packet& b) {
                       return a.present_cycle < b.present_cycle;
                     });
  }

  void on_chain_delivered(const noc::SimEvent& ev) {
    const noc::Packet& pkt = net.packet(ev.packet_id);
    long long row = pkt.dst.y;
    if (!pkt.absorb_at_end) {
      // Plain flow: eject at the last node, add its share, hand the result
      // back to the router for the row gather.
      std::vector<uint32_t> sum = pkt.payload;
      const auto& local = final_vals_.at(pkt.chain_id);
      for (size_t i = 0; i < sum.size() && i < local.size(); ++i) {
        sum[i] = noc::ina_accumulate(sum[i], local[i]);
      }
      long long ready = std::max(ev.cycle, final_ready_.at(pkt.chain_id)) +
                        cfg.local_acc_latency + cfg.ni_inject_latency;
      net.tally_ni_inject(pkt.dst);
      net.post_gather_operand(pkt.dst, round_, pkt.gather_slot, std::move(sum),
                              ready);
    }
    auto& state = rows_[row];
    state.arrived += 1;
    if (state.arrived == state.expected) launch_gather(row, net.now());
  }

  void on_gather_delivered(const noc::SimEvent& ev) {
    ++gathers_delivered_;
    if (!opts.verify) return;
    const noc::Packet& pkt = net.packet(ev.packet_id);
    long long g = sched.group_of_row(pkt.dst.y);
    for (long long c = 0; c < n; ++c) {
      for (long long s = 0; s < e; ++s) {
        auto work = sched.item(round_, sched.lane_index(c, g, s));
        if (!work) continue;
        uint32_t expect = traffic::output_value(sched.seed, sched.layer,
                                                work->filter, work->pixel);
        size_t slot = static_cast<size_t>(c * e + s);
        bool ok = slot < pkt.payload.size() && pkt.slot_filled[slot] &&
                  pkt.payload[slot] == expect;
        if (ok) {
          ++result.verified_words;
        } else {
          ++result.mismatched_words;
        }
      }
    }
  }

  void drive_round() {
    while (true) {
      while (!pending_.empty() &&
             pending_.front().present_cycle <= net.now()) {
        backlog_.push_back(std::move(pending_.front()));
        pending_.pop_front();
      }
      while (!backlog_.empty()) {
        noc::Packet pkt = backlog_.front();
        if (!net.inject(std::move(pkt))) break;
        record(backlog_.front());
        backlog_.pop_front();
      }
      bool done = gathers_delivered_ == gathers_expected_ &&
                  gathers_expected_ ==
                      static_cast<long long>(rows_.size()) &&
                  pending_.empty() && backlog_.empty() && net.idle();
      if (done) break;
      if (backlog_.empty() && net.idle() && !pending_.empty() &&
          pending_.front().present_cycle > net.now()) {
        net.skip_to(pending_.front().present_cycle);
        continue;
      }
      for (const auto& ev : net.step()) {
        if (ev.kind != noc::SimEvent::Kind::Delivered) continue;
        const noc::Packet& pkt = net.packet(ev.packet_id);
        if (pkt.klass == noc::PacketClass::InaChain) {
          on_chain_delivered(ev);
        } else if (pkt.klass == noc::PacketClass::Gather) {
          on_gather_delivered(ev);
        }
      }
    }
  }

  RunResult run() {
    for (round_ = 0; round_ < sched.rounds; ++round_) {
      long long round_start = net.now();
      setup_round(sched.round_plan(round_), round_start);
      drive_round();
      // Barrier: the next round starts on a fresh cycle after full drain.
      net.skip_to(net.now() + 1);
    }
    result.stats = net.stats();
    result.rounds = sched.rounds;
    result.cycles = net.now();
    return std::move(result);
  }
};

}  // namespace

RunResult run_schedule(const traffic::Schedule& schedule,
                       const RunOptions& opts) {
  Runner runner(schedule, opts);
  return runner.run();
}

}  // namespace ina::harness
