#pragma once

// The processor transition function and the call-level drivers built on it.
// node_transition is the entire behavior of a processor for one tick; the
// engine calls it for every node in lockstep. Processors are anonymous: the
// function sees only port numbers, its own state, and whether it is the
// root. The node id in the context is passed through to instrumentation
// events and never influences behavior.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "snakenet/constructs.hpp"
#include "snakenet/engine.hpp"
#include "snakenet/node_state.hpp"
#include "snakenet/portgraph.hpp"

namespace snakenet {

struct NodeCtx {
  int node = -1;  // instrumentation only
  bool is_root = false;
  int delta = 2;
  std::int64_t tick = 0;
  // Connected ports in increasing order.
  std::vector<int> out_ports;
  std::vector<int> in_ports;
};

// in_frames[p-1] is the frame read through in-port p this tick (nullptr when
// the port is unwired).
using InFrames = std::vector<const Frame*>;

// emit(out_port, character) places a character on the wire leaving through
// out_port, to be read next tick.
using EmitSink = std::function<void(int, const Character&)>;
using TranscriptSink = std::function<void(TranscriptKind, const Character&)>;
using EventSink = std::function<void(ProtoEvent)>;

// Runs one tick of one processor. Throws SimulationFault on any observation
// the protocol rules out.
void node_transition(const NodeCtx& ctx, NodeState& st, const InFrames& in,
                     const EmitSink& emit, const TranscriptSink& transcript,
                     const EventSink& events);

// ---------------------------------------------------------------------------
// Call-level drivers.

// Result of one isolated call run: the initiator floods, the root answers,
// the loop is marked, the token circles, and everything is cleaned up.
struct RcaTrace {
  std::int64_t ticks = 0;           // tick of the completion event
  std::int64_t kill_tick = -1;      // cleanup release at the initiator
  std::int64_t token_absorb_tick = -1;
  std::int64_t completed_tick = -1;
  // Paths the root read, decoded from its transcript: initiator->root and
  // root->initiator.
  std::vector<std::pair<std::uint8_t, std::uint8_t>> in_path;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> out_path;
  Transcript transcript;
  std::vector<ProtoEvent> events;
  // Parent in-port adopted by each node for the inward flood (-1: never
  // visited). Index = node id; instrumentation data.
  std::vector<int> ig_parent_in;
  bool eradicated_on_time = false;   // network free of flood residue one tick
                                     // after the token came home
  bool pristine_at_completion = false;
};

// Runs one call in isolation: `initiator` starts at tick 0 carrying
// `payload` as its loop-token content. Budget is absolute ticks.
[[nodiscard]] RcaTrace run_rca_isolated(const PortGraph& g, int initiator,
                                        const Character& payload,
                                        std::int64_t max_ticks);

struct BcaTrace {
  std::int64_t ticks = 0;
  std::int64_t delivered_tick = -1;
  int delivered_node = -1;
  std::int64_t completed_tick = -1;
  std::vector<ProtoEvent> events;
  // Nodes marked by the backwards call, in marking order, with designations.
  std::vector<ProtoEvent> marks;
  bool pristine_at_completion = false;
};

// Runs one backwards delivery in isolation: the node at `edge`'s head end
// returns the traversal token to the node at its tail end, against the
// wire's direction. The delivered token carries the edge's ports.
[[nodiscard]] BcaTrace run_bca_isolated(const PortGraph& g, const Edge& edge,
                                        std::int64_t max_ticks);

// Full traversal from the root: returns the transcript and the tick count.
struct GtdResult {
  Transcript transcript;
  std::int64_t ticks = 0;
};

[[nodiscard]] GtdResult run_gtd(const PortGraph& g, std::int64_t max_ticks);
[[nodiscard]] GtdResult run_gtd(const PortGraph& g);  // default budget

}  // namespace snakenet
