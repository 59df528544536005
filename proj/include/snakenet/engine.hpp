#pragma once

// The synchronous execution engine: one Frame per wire, double-buffered, all
// processors stepped in lockstep. Frames written during tick t are read at
// tick t+1. The engine also carries the two observation channels: the
// root-side transcript (the protocol's official output) and a per-tick
// instrumentation log for tests.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "snakenet/constructs.hpp"
#include "snakenet/node_state.hpp"
#include "snakenet/portgraph.hpp"

namespace snakenet {

// A run exceeded its tick allowance without reaching its goal.
class TickBudgetExceeded : public std::runtime_error {
 public:
  explicit TickBudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

// A processor observed something the protocol claims cannot happen.
class SimulationFault : public std::runtime_error {
 public:
  explicit SimulationFault(const std::string& what)
      : std::runtime_error(what) {}
};

enum class TranscriptKind : std::uint8_t {
  Start,
  PathChar,   // a path-describing character read at the root
  LoopToken,  // the loop token passing the root
  RootEdge,   // a traversal event at the root itself
  Terminated,
};

struct TranscriptEvent {
  std::int64_t tick = 0;
  TranscriptKind kind{TranscriptKind::Start};
  Character ch;  // meaningful for PathChar, LoopToken, RootEdge

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;

  // "tick=<t> event=<...>" with the pinned event spellings.
  [[nodiscard]] std::string line() const;
  [[nodiscard]] std::string event_text() const;
};

using Transcript = std::vector<TranscriptEvent>;

[[nodiscard]] std::string transcript_to_text(const Transcript& t);
[[nodiscard]] std::string transcript_to_json(const Transcript& t);

// Instrumentation events for tests and tracing. These are observations, not
// protocol machinery: no processor behavior may depend on them.
enum class ProtoEventKind : std::uint8_t {
  NodeVisited,   // node, cls, port_a = parent in-port
  NodeMarked,    // node, cls = marking snake, port_a = pred, port_b = succ
  KillReleased,  // node
  UnmarkReleased,
  TokenReleased,  // node, ch = loop token
  TokenAbsorbed,  // node, ch = loop token
  RcaStarted,     // node, ch = payload
  RcaCompleted,   // node
  BcaStarted,         // node, port_a = watched in-port
  BcaPayloadDelivered,  // node, ch = delivered token
  BcaCompleted,       // node = delivery target
  RootReopened,
  DfsSent,      // node, port_a = out-port
  DfsReceived,  // node, port_a = out, port_b = in of the hop
  Terminated,
};

struct ProtoEvent {
  ProtoEventKind kind{ProtoEventKind::NodeVisited};
  std::int64_t tick = 0;
  int node = -1;
  CharClass cls{CharClass::IG};
  Character ch;
  std::uint8_t port_a = 0;
  std::uint8_t port_b = 0;

  friend bool operator==(const ProtoEvent&, const ProtoEvent&) = default;
};

class NetworkState {
 public:
  // The graph must satisfy validate(); violations throw std::invalid_argument.
  explicit NetworkState(std::shared_ptr<const PortGraph> graph);

  [[nodiscard]] const PortGraph& graph() const { return *graph_; }
  [[nodiscard]] std::int64_t tick() const { return tick_; }
  [[nodiscard]] bool terminated() const { return terminated_; }

  [[nodiscard]] const NodeState& node(int v) const;
  [[nodiscard]] NodeState& node_mut(int v);

  // Frame currently on a wire (what will be read next tick).
  [[nodiscard]] const Frame& wire(int edge_idx) const;

  // Marks the root as the traversal origin and logs the Start event. Only
  // valid at tick 0, once.
  void inject_start();

  // Seeds an isolated call at `initiator` with the given payload token.
  // Only valid at tick 0, once, and not combined with inject_start.
  void inject_call(int initiator, const Character& payload);

  // Advances one tick. Events observed during the tick are in
  // events_last_tick() afterwards; transcript events append to transcript().
  void step();

  // Steps until the traversal terminates. Throws TickBudgetExceeded when
  // tick() would pass max_ticks (an absolute tick count).
  void run_until_terminal(std::int64_t max_ticks);

  [[nodiscard]] const Transcript& transcript() const { return transcript_; }
  [[nodiscard]] const std::vector<ProtoEvent>& events_last_tick() const {
    return events_last_tick_;
  }
  [[nodiscard]] const std::vector<ProtoEvent>& event_log() const {
    return event_log_;
  }

  // True when no wire carries a character.
  [[nodiscard]] bool frames_blank() const;
  // Every processor pristine outside its traversal block, all wires blank.
  [[nodiscard]] bool snapshot_is_quiescent() const;
  // No growing-snake residue and no cleanup token anywhere.
  [[nodiscard]] bool growing_state_clean() const;

  void set_terminated() { terminated_ = true; }

 private:
  std::shared_ptr<const PortGraph> graph_;
  std::vector<NodeState> nodes_;
  std::vector<Frame> cur_, next_;  // frames indexed by edge
  std::int64_t tick_ = 0;
  bool injected_ = false;
  bool terminated_ = false;
  Transcript transcript_;
  std::vector<ProtoEvent> events_last_tick_;
  std::vector<ProtoEvent> event_log_;
};

// Default allowance for a full traversal, in ticks per node per diameter
// unit: budget = multiplier * nodes * diameter. Override the multiplier with
// the SNAKENET_TICK_BUDGET_MULT environment variable.
[[nodiscard]] std::int64_t tick_budget_multiplier();
[[nodiscard]] std::int64_t default_tick_budget(const PortGraph& g);

}  // namespace snakenet
