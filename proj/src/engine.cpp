#include "snakenet/engine.hpp"

#include <cstdlib>
#include <string>
#include <utility>

#include "json.hpp"

#include "snakenet/protocol.hpp"

namespace snakenet {

std::string TranscriptEvent::event_text() const {
  switch (kind) {
    case TranscriptKind::Start:
      return "Start";
    case TranscriptKind::PathChar:
      return "PathChar:" + ch.display();
    case TranscriptKind::LoopToken:
      return "Loop:" + ch.display();
    case TranscriptKind::RootEdge:
      return "RootEdge:" + ch.display();
    case TranscriptKind::Terminated:
      return "Terminated";
  }
  return "?";
}

std::string TranscriptEvent::line() const {
  return "tick=" + std::to_string(tick) + " event=" + event_text();
}

std::string transcript_to_text(const Transcript& t) {
  std::string out;
  for (const TranscriptEvent& ev : t) {
    out += ev.line();
    out += '\n';
  }
  return out;
}

std::string transcript_to_json(const Transcript& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TranscriptEvent& ev : t)
    arr.push_back({{"tick", ev.tick}, {"event", ev.event_text()}});
  return arr.dump(2) + "\n";
}

namespace {

// A processor with no arrivals and none of these has nothing to do this tick.
bool node_busy(const NodeState& st) {
  for (const GrowLane& l : st.lanes)
    if (!l.pipe.empty()) return true;
  if (!st.conv.pipe.empty() || !st.conv2.pipe.empty()) return true;
  if (st.hold.active) return true;
  if (st.dfs.pending != PendingKind::None) return true;
  return st.pending_unmark_rca || st.pending_unmark_bca;
}

}  // namespace

NetworkState::NetworkState(std::shared_ptr<const PortGraph> graph)
    : graph_(std::move(graph)) {
  if (!graph_) throw std::invalid_argument("network requires a graph");
  ValidationReport rep = graph_->validate();
  if (!rep.ok())
    throw std::invalid_argument("invalid network: " + rep.violations.front());
  nodes_.assign(static_cast<size_t>(graph_->nodes()), NodeState{});
  cur_.assign(static_cast<size_t>(graph_->edge_count()), Frame{});
  next_.assign(static_cast<size_t>(graph_->edge_count()), Frame{});
}

const NodeState& NetworkState::node(int v) const {
  return nodes_.at(static_cast<size_t>(v));
}

NodeState& NetworkState::node_mut(int v) {
  return nodes_.at(static_cast<size_t>(v));
}

const Frame& NetworkState::wire(int edge_idx) const {
  return cur_.at(static_cast<size_t>(edge_idx));
}

void NetworkState::inject_start() {
  if (tick_ != 0 || injected_)
    throw std::logic_error("injection is only possible into a fresh network");
  injected_ = true;
  NodeState& root = nodes_[static_cast<size_t>(graph_->root())];
  root.dfs.visited = true;
  root.dfs.pending = PendingKind::ProbeNext;
  transcript_.push_back(TranscriptEvent{0, TranscriptKind::Start, Character{}});
}

void NetworkState::inject_call(int initiator, const Character& payload) {
  if (tick_ != 0 || injected_)
    throw std::logic_error("injection is only possible into a fresh network");
  if (initiator < 0 || initiator >= graph_->nodes())
    throw std::invalid_argument("initiator out of range");
  injected_ = true;
  NodeState& st = nodes_[static_cast<size_t>(initiator)];
  st.dfs.pending = PendingKind::StartRca;
  st.dfs.pending_payload = payload;
}

void NetworkState::step() {
  const PortGraph& g = *graph_;
  ++tick_;
  for (Frame& f : next_) f = Frame{};
  events_last_tick_.clear();

  int cur_node = 0;
  const EmitSink emit = [&](int port, const Character& ch) {
    auto idx = g.edge_out(cur_node, port);
    if (!idx) throw SimulationFault("emission through an unwired port");
    next_[static_cast<size_t>(*idx)].push(ch);
  };
  const TranscriptSink tsink = [&](TranscriptKind k, const Character& ch) {
    transcript_.push_back(TranscriptEvent{tick_, k, ch});
  };
  const EventSink esink = [&](ProtoEvent ev) {
    ev.tick = tick_;
    if (ev.kind == ProtoEventKind::Terminated) terminated_ = true;
    events_last_tick_.push_back(ev);
    event_log_.push_back(ev);
  };

  NodeCtx ctx;
  ctx.delta = g.delta();
  ctx.tick = tick_;
  InFrames in(static_cast<size_t>(g.delta()), nullptr);

  for (int v = 0; v < g.nodes(); ++v) {
    bool any_input = false;
    for (int p = 1; p <= g.delta(); ++p) {
      auto idx = g.edge_in(v, p);
      const Frame* f =
          idx ? &cur_[static_cast<size_t>(*idx)] : nullptr;
      in[static_cast<size_t>(p - 1)] = f;
      if (f != nullptr && !f->empty()) any_input = true;
    }
    if (!any_input && !node_busy(nodes_[static_cast<size_t>(v)])) continue;

    cur_node = v;
    ctx.node = v;
    ctx.is_root = (v == g.root());
    ctx.out_ports = g.out_ports(v);
    ctx.in_ports = g.in_ports(v);
    node_transition(ctx, nodes_[static_cast<size_t>(v)], in, emit, tsink,
                    esink);
  }
  std::swap(cur_, next_);
}

void NetworkState::run_until_terminal(std::int64_t max_ticks) {
  while (!terminated_) {
    if (tick_ >= max_ticks)
      throw TickBudgetExceeded("no termination within " +
                               std::to_string(max_ticks) + " ticks");
    step();
  }
}

bool NetworkState::frames_blank() const {
  for (const Frame& f : cur_)
    if (!f.empty()) return false;
  return true;
}

bool NetworkState::snapshot_is_quiescent() const {
  if (!frames_blank()) return false;
  for (const NodeState& st : nodes_)
    if (!st.non_dfs_pristine()) return false;
  return true;
}

bool NetworkState::growing_state_clean() const {
  for (const NodeState& st : nodes_)
    if (!st.growing_clean()) return false;
  for (const Frame& f : cur_)
    for (const Character& c : f)
      if (is_growing_class(c.cls) || c.cls == CharClass::KILL) return false;
  return true;
}

std::int64_t tick_budget_multiplier() {
  if (const char* env = std::getenv("SNAKENET_TICK_BUDGET_MULT")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 256;
}

std::int64_t default_tick_budget(const PortGraph& g) {
  return tick_budget_multiplier() * g.nodes() *
         std::max(1, diameter(g));
}

}  // namespace snakenet
