#include "snakenet/protocol.hpp"

#include <algorithm>
#include <memory>
#include <string>

namespace snakenet {

namespace {

[[noreturn]] void fault(const std::string& msg) { throw SimulationFault(msg); }

struct Arrival {
  Character ch;
  int port = 0;
};

// Speed-1 constructs are re-emitted two ticks after being read (three ticks
// per hop); the cleanup and traversal tokens leave the same tick they arrive
// (one tick per hop).
constexpr int kSlowEmitOffset = dwell_ticks(SpeedClass::Speed1) - 1;

void clear_growing_lanes(NodeState& st) {
  for (GrowLane& l : st.lanes) l = GrowLane{};
}

void hold_token(NodeState& st, const Character& c, int out_port,
                std::int64_t now) {
  if (st.hold.active) fault("two loop-paced tokens held at once");
  st.hold = LoopHold{true, c, now + kSlowEmitOffset,
                     static_cast<std::uint8_t>(out_port)};
}

void activate_conv(NodeState& st, CharClass in_cls, CharClass out_cls,
                   int in_port, int out_port) {
  DyingConv* cv = nullptr;
  if (!st.conv.active && st.conv.pipe.empty()) cv = &st.conv;
  else if (!st.conv2.active && st.conv2.pipe.empty()) cv = &st.conv2;
  else fault("stream converter already busy");
  *cv = DyingConv{};
  cv->active = true;
  cv->in_cls = in_cls;
  cv->out_cls = out_cls;
  cv->in_port = static_cast<std::uint8_t>(in_port);
  cv->out_port = static_cast<std::uint8_t>(out_port);
  cv->promote_next = true;
  cv->just_ate_head = true;
}

// The channel currently consuming characters of this class through this wire.
DyingConv* match_conv(NodeState& st, CharClass cls, int port) {
  if (st.conv.active && st.conv.in_cls == cls && st.conv.in_port == port)
    return &st.conv;
  if (st.conv2.active && st.conv2.in_cls == cls && st.conv2.in_port == port)
    return &st.conv2;
  return nullptr;
}

}  // namespace

void node_transition(const NodeCtx& ctx, NodeState& st, const InFrames& in,
                     const EmitSink& emit, const TranscriptSink& transcript,
                     const EventSink& events) {
  const std::int64_t now = ctx.tick;
  const auto delta = static_cast<std::uint8_t>(ctx.delta);

  auto event = [&](ProtoEventKind kind, CharClass cls, const Character& ch,
                   int pa, int pb) {
    ProtoEvent ev;
    ev.kind = kind;
    ev.node = ctx.node;
    ev.cls = cls;
    ev.ch = ch;
    ev.port_a = static_cast<std::uint8_t>(pa);
    ev.port_b = static_cast<std::uint8_t>(pb);
    events(ev);
  };

  // ---- gather and star-resolve this tick's arrivals -----------------------
  std::vector<Arrival> grow, dying, tokens, dfs_raw;
  std::vector<int> kills, unmarks;
  for (int p : ctx.in_ports) {
    const Frame* f = in[static_cast<size_t>(p - 1)];
    if (f == nullptr) continue;
    for (const Character& raw : *f) {
      Character c = raw;
      if (is_growing_class(c.cls) || c.cls == CharClass::DFS)
        c = rewrite_star(c, static_cast<std::uint8_t>(p), delta);
      if (is_growing_class(c.cls)) grow.push_back({c, p});
      else if (is_dying_class(c.cls)) dying.push_back({c, p});
      else if (is_loop_token_class(c.cls)) tokens.push_back({c, p});
      else if (c.cls == CharClass::DFS) tokens.push_back({c, p});
      else if (c.cls == CharClass::KILL) kills.push_back(p);
      else if (c.cls == CharClass::UNMARK) unmarks.push_back(p);
    }
  }
  // A cleanup token erases growing-stream characters on contact. Arrivals of
  // a growing class share the node with a KILL this tick, so they are dead on
  // arrival no matter which ports carried them. Without this, a straggling
  // head travelling in lockstep one wire ahead of its chaser would slip
  // through every node the chaser sweeps.
  if (!kills.empty()) grow.clear();

  // ---- emissions scheduled for this tick -----------------------------------
  // Drained first: an entry leaves its pipe the tick it is due, before the
  // tick's arrivals are processed. This keeps a relay's pipe at three
  // residents even on the tick it inserts its own character ahead of a
  // passing tail.
  auto drain_broadcast = [&](Pipe& pipe) {
    if (pipe.empty() || pipe.front().emit_at > now) return;
    Pipe::Entry e = pipe.pop();
    if (e.emit_at != now) fault("missed a scheduled emission");
    for (int p : ctx.out_ports) {
      Character c = e.ch;
      if (e.per_port_out) c.out_port = static_cast<std::uint8_t>(p);
      emit(p, c);
    }
  };
  for (GrowLane& l : st.lanes) drain_broadcast(l.pipe);

  for (DyingConv* cv : {&st.conv, &st.conv2}) {
    if (!cv->pipe.empty() && cv->pipe.front().emit_at <= now) {
      Pipe::Entry e = cv->pipe.pop();
      if (e.emit_at != now) fault("missed a scheduled emission");
      emit(cv->out_port, e.ch);
    }
    if (!cv->active && cv->pipe.empty()) *cv = DyingConv{};
  }

  if (st.hold.active && st.hold.emit_at <= now) {
    if (st.hold.emit_at != now) fault("missed a token emission");
    emit(st.hold.out_port, st.hold.ch);
    st.hold = LoopHold{};
  }

  // ---- scheduled actions from last tick -----------------------------------
  auto flood = [&](CharClass cls) {
    GrowLane& ln = st.lane(cls);
    if (ln.visited || ln.creator || !ln.pipe.empty())
      fault("flood over a dirty lane");
    ln.visited = true;
    ln.creator = true;
    ln.out_cls = cls;
    for (int p : ctx.out_ports)
      emit(p, make_snake(cls, CharKind::Head, static_cast<std::uint8_t>(p),
                         kStarPort));
    ln.pipe.push(make_snake(cls, CharKind::Tail, 0, 0), now + 1, false);
  };
  auto start_bca = [&](int out_port, int in_port) {
    if (st.bca_phase != BcaPhase::Idle) fault("backwards call collision");
    st.bca_phase = BcaPhase::Seeking;
    st.bca_watch = static_cast<std::uint8_t>(in_port);
    st.bca_payload = make_token(CharClass::DFS,
                                static_cast<std::uint8_t>(out_port),
                                static_cast<std::uint8_t>(in_port));
    st.dfs.has_token = false;
    flood(CharClass::BIG);
    event(ProtoEventKind::BcaStarted, CharClass::BIG, st.bca_payload, in_port,
          0);
  };

  const PendingKind pending = st.dfs.pending;
  st.dfs.pending = PendingKind::None;
  switch (pending) {
    case PendingKind::None:
      break;
    case PendingKind::StartRca:
      if (st.rca_phase != RcaPhase::Idle) fault("call collision");
      st.rca_phase = RcaPhase::AwaitOG;
      st.rca_payload = st.dfs.pending_payload;
      flood(CharClass::IG);
      event(ProtoEventKind::RcaStarted, CharClass::IG, st.rca_payload, 0, 0);
      break;
    case PendingKind::StartBca:
      start_bca(st.dfs.pending_a, st.dfs.pending_b);
      break;
    case PendingKind::ProbeNext: {
      int next_port = 0;
      for (int p : ctx.out_ports)
        if ((st.dfs.finished & (1u << (p - 1))) == 0) {
          next_port = p;
          break;
        }
      if (next_port != 0) {
        st.dfs.probe_out = static_cast<std::uint8_t>(next_port);
        st.dfs.has_token = false;
        emit(next_port,
             make_token(CharClass::DFS, static_cast<std::uint8_t>(next_port),
                        kStarPort));
        event(ProtoEventKind::DfsSent, CharClass::DFS, Character{}, next_port,
              0);
      } else if (ctx.is_root) {
        transcript(TranscriptKind::Terminated, Character{});
        event(ProtoEventKind::Terminated, CharClass::DFS, Character{}, 0, 0);
      } else {
        start_bca(st.dfs.parent_out, st.dfs.parent_in);
      }
      break;
    }
    case PendingKind::ReleaseUnmarkRca:
      fault("unmark release must use its own flag");
    case PendingKind::ReleaseUnmarkBca:
      fault("unmark release must use its own flag");
  }

  if (st.pending_unmark_rca) {
    st.pending_unmark_rca = false;
    emit(st.slot1.succ, make_token(CharClass::UNMARK));
    st.rca_phase = RcaPhase::Unmarking;
    event(ProtoEventKind::UnmarkReleased, CharClass::ID, Character{},
          st.slot1.succ, 0);
  }
  if (st.pending_unmark_bca) {
    st.pending_unmark_bca = false;
    emit(st.bslot.succ, make_token(CharClass::UNMARK));
    st.bca_phase = BcaPhase::TargetUnmarkWait;
    event(ProtoEventKind::UnmarkReleased, CharClass::BID, Character{},
          st.bslot.succ, 0);
  }

  // ---- stage 1: growing snakes --------------------------------------------
  auto conv_take = [&](DyingConv& cv, const Arrival& a) {
    if (a.ch.kind == CharKind::Head) fault("head into an active converter");
    Character out = convert_class(a.ch, cv.out_cls);
    if (cv.promote_next && a.ch.kind == CharKind::Body) {
      out.kind = CharKind::Head;
      cv.promote_next = false;
    }
    cv.just_ate_head = false;
    cv.pipe.push(out, now + kSlowEmitOffset, false);
    if (a.ch.kind == CharKind::Tail) {
      cv.active = false;
      if (st.rca_phase == RcaPhase::MarkingID && a.ch.cls == CharClass::OG)
        st.rca_phase = RcaPhase::AwaitODTail;
      if (st.bca_phase == BcaPhase::Marking && a.ch.cls == CharClass::BIG) {
        // The growing snakes have served their purpose the moment the
        // watcher has converted the whole stream; clean them up now.
        st.bca_phase = BcaPhase::AwaitTailReturn;
        clear_growing_lanes(st);
        for (int q : ctx.out_ports) emit(q, make_token(CharClass::KILL));
        event(ProtoEventKind::KillReleased, CharClass::BIG, Character{}, 0, 0);
      }
    }
  };

  for (CharClass cls : {CharClass::IG, CharClass::OG, CharClass::BIG,
                        CharClass::BOG}) {
    std::vector<Arrival> items;
    for (const Arrival& a : grow)
      if (a.ch.cls == cls) items.push_back(a);
    if (items.empty()) continue;

    // Stream conversion feed at a call initiator or watcher.
    std::vector<Arrival> rest;
    for (const Arrival& a : items) {
      if (DyingConv* cv = match_conv(st, cls, a.port))
        conv_take(*cv, a);
      else
        rest.push_back(a);
    }
    items = std::move(rest);
    if (items.empty()) continue;

    // The initiator of the running call intercepts the returned snake's
    // head and otherwise consumes stray copies of that class silently.
    if (cls == CharClass::OG && st.rca_phase != RcaPhase::Idle) {
      if (st.rca_phase == RcaPhase::AwaitOG) {
        const Arrival* best = nullptr;
        for (const Arrival& a : items)
          if (a.ch.kind == CharKind::Head && (best == nullptr || a.port < best->port))
            best = &a;
        if (best != nullptr) {
          if (st.bslot.any()) fault("call loops overlap");
          st.slot1.pred_set = st.slot1.succ_set = true;
          st.slot1.pred = static_cast<std::uint8_t>(best->port);
          st.slot1.succ = best->ch.out_port;
          activate_conv(st, CharClass::OG, CharClass::ID, best->port,
                        best->ch.out_port);
          st.rca_phase = RcaPhase::MarkingID;
          event(ProtoEventKind::NodeMarked, CharClass::ID, best->ch,
                st.slot1.pred, st.slot1.succ);
        }
      }
      continue;  // all remaining copies die here
    }
    // The watcher of a backwards call eats the first head arriving through
    // the watched wire.
    if (cls == CharClass::BIG && st.bca_phase == BcaPhase::Seeking) {
      for (const Arrival& a : items) {
        if (a.port != st.bca_watch || a.ch.kind != CharKind::Head) continue;
        if (st.slot1.any() || st.slot2.any()) fault("call loops overlap");
        if (st.bslot.any()) fault("remarking the backwards loop");
        st.bslot.pred_set = st.bslot.succ_set = true;
        st.bslot.pred = static_cast<std::uint8_t>(a.port);
        st.bslot.succ = a.ch.out_port;
        activate_conv(st, CharClass::BIG, CharClass::BID, a.port,
                      a.ch.out_port);
        st.bca_phase = BcaPhase::Marking;
        event(ProtoEventKind::NodeMarked, CharClass::BID, a.ch, st.bslot.pred,
              st.bslot.succ);
        break;
      }
      continue;  // the creator drops every other copy
    }

    GrowLane& ln = st.lane(cls);
    if (ln.creator) continue;  // creators drop incoming copies

    if (ln.visited) {
      for (const Arrival& a : items) {
        if (a.port != ln.parent_in) continue;  // dropped
        if (a.ch.kind == CharKind::Head)
          fault("second head through a parent wire");
        if (ctx.is_root && cls == CharClass::IG &&
            st.root_phase == RootPhase::ConvertingIG)
          transcript(TranscriptKind::PathChar, a.ch);
        Character out = a.ch;
        if (ln.out_cls != cls) out = convert_class(out, ln.out_cls);
        if (a.ch.kind == CharKind::Tail) {
          // Tail growth: the relay contributes its own per-port character,
          // then passes the tail one tick later.
          ln.pipe.push(make_snake(ln.out_cls, CharKind::Body, kStarPort,
                                  kStarPort),
                       now + kSlowEmitOffset, true);
          ln.pipe.push(out, now + kSlowEmitOffset + 1, false);
        } else {
          ln.pipe.push(out, now + kSlowEmitOffset, false);
        }
      }
    } else {
      // Only heads open a lane. Non-head strays can legitimately appear
      // here after the cleanup token erased this lane mid-stream; they die.
      const Arrival* best = nullptr;
      for (const Arrival& a : items)
        if (a.ch.kind == CharKind::Head &&
            (best == nullptr || a.port < best->port))
          best = &a;
      if (best == nullptr) continue;
      ln.visited = true;
      ln.parent_in = static_cast<std::uint8_t>(best->port);
      ln.out_cls = cls;
      if (ctx.is_root && cls == CharClass::IG &&
          st.root_phase == RootPhase::Open) {
        // The root answers an arriving inward snake by re-creating it as
        // the outward snake, reading off the path as it goes.
        ln.out_cls = CharClass::OG;
        st.root_phase = RootPhase::ConvertingIG;
        GrowLane& og = st.lane(CharClass::OG);
        if (og.visited || og.creator) fault("outward lane dirty at the root");
        og.visited = og.creator = true;
        og.out_cls = CharClass::OG;
        transcript(TranscriptKind::PathChar, best->ch);
      }
      event(ProtoEventKind::NodeVisited, cls, best->ch, best->port, 0);
      Character out = best->ch;
      if (ln.out_cls != cls) out = convert_class(out, ln.out_cls);
      ln.pipe.push(out, now + kSlowEmitOffset, false);
    }
  }

  // ---- stage 2: dying snakes ----------------------------------------------
  for (const Arrival& a : dying) {
    const Character& c = a.ch;
    const int p = a.port;

    // Initiator trigger: the outward tail announces the fully marked loop.
    if (st.rca_phase == RcaPhase::AwaitODTail && c.cls == CharClass::OD &&
        c.kind == CharKind::Tail && st.slot1.pred_set && p == st.slot1.pred) {
      for (int q : ctx.out_ports) emit(q, make_token(CharClass::KILL));
      emit(st.slot1.succ, st.rca_payload);
      clear_growing_lanes(st);
      st.rca_phase = RcaPhase::AwaitToken;
      event(ProtoEventKind::KillReleased, CharClass::IG, Character{}, 0, 0);
      event(ProtoEventKind::TokenReleased, st.rca_payload.cls, st.rca_payload,
            st.slot1.succ, 0);
      continue;
    }
    // Watcher trigger: the marking tail circled the loop; hand the token
    // over along the marked wires.
    if (st.bca_phase == BcaPhase::AwaitTailReturn && c.cls == CharClass::BID &&
        c.kind == CharKind::Tail && st.bslot.pred_set && p == st.bslot.pred) {
      emit(st.bslot.succ, st.bca_payload);
      st.bca_phase = BcaPhase::AwaitUnmark;
      event(ProtoEventKind::TokenReleased, CharClass::DFS, st.bca_payload,
            st.bslot.succ, 0);
      continue;
    }

    if (DyingConv* cv = match_conv(st, c.cls, p)) {
      if (ctx.is_root && c.cls == CharClass::ID)
        transcript(TranscriptKind::PathChar, c);
      const bool was_fresh = cv->just_ate_head;
      conv_take(*cv, a);  // same rules: promote first body, pass tail
      if (c.kind == CharKind::Tail && c.cls == CharClass::BID && was_fresh) {
        // A head immediately followed by the tail: this node sits just
        // before the final wire of the backwards loop — the delivery lands
        // here.
        st.bca_payload_target = true;
      }
      continue;
    }

    if (c.kind == CharKind::Head) {
      if (ctx.is_root && c.cls == CharClass::ID) {
        if (st.root_phase != RootPhase::ConvertingIG)
          fault("inward dying head at a closed root");
        if (st.slot1.any() || st.slot2.any() || st.bslot.any())
          fault("remarking the root");
        st.slot1.pred_set = true;
        st.slot1.pred = static_cast<std::uint8_t>(p);
        st.slot2.succ_set = true;
        st.slot2.succ = c.out_port;
        st.root_phase = RootPhase::Marked;
        activate_conv(st, CharClass::ID, CharClass::OD, p, c.out_port);
        transcript(TranscriptKind::PathChar, c);
        event(ProtoEventKind::NodeMarked, CharClass::ID, c, p, c.out_port);
        continue;
      }
      MarkSlot* slot = nullptr;
      if (c.cls == CharClass::ID) slot = &st.slot1;
      else if (c.cls == CharClass::OD) slot = &st.slot2;
      else if (c.cls == CharClass::BID) slot = &st.bslot;
      else fault("unused dying class on a wire");
      if (c.cls == CharClass::BID && (st.slot1.any() || st.slot2.any()))
        fault("call loops overlap");
      if (c.cls != CharClass::BID && st.bslot.any())
        fault("call loops overlap");
      if (slot->any()) fault("remarking a node");
      slot->pred_set = slot->succ_set = true;
      slot->pred = static_cast<std::uint8_t>(p);
      slot->succ = c.out_port;
      activate_conv(st, c.cls, c.cls, p, c.out_port);
      event(ProtoEventKind::NodeMarked, c.cls, c, p, c.out_port);
      continue;
    }

    fault("unexpected dying character " + c.display());
  }

  // ---- stage 3: loop-paced tokens ------------------------------------------
  for (const Arrival& a : tokens) {
    const Character& c = a.ch;
    const int p = a.port;

    if (c.cls == CharClass::DFS) {
      if (st.bca_payload_target && st.bslot.pred_set && p == st.bslot.pred) {
        st.bca_payload_target = false;
        st.dfs.has_token = true;
        st.pending_unmark_bca = true;
        event(ProtoEventKind::BcaPayloadDelivered, CharClass::DFS, c, p, 0);
        continue;
      }
      if (st.bslot.pred_set && p == st.bslot.pred) {
        hold_token(st, c, st.bslot.succ, now);
        continue;
      }
      dfs_raw.push_back(a);  // a plain forward hop
      continue;
    }

    // The initiator's own loop token coming home.
    if (st.rca_phase == RcaPhase::AwaitToken && st.slot1.pred_set &&
        p == st.slot1.pred) {
      st.pending_unmark_rca = true;
      event(ProtoEventKind::TokenAbsorbed, c.cls, c, p, 0);
      continue;
    }
    // The root relays between its two half-loop designations and reports.
    if (ctx.is_root && st.root_phase == RootPhase::Marked &&
        !st.slot1.succ_set) {
      if (!st.slot1.pred_set || p != st.slot1.pred)
        fault("loop token through the wrong root port");
      transcript(TranscriptKind::LoopToken, c);
      hold_token(st, c, st.slot2.succ, now);
      continue;
    }
    // A marked relay; doubly-marked nodes alternate their designations.
    MarkSlot* s = (!st.loop_expect_second && st.slot1.pred_set) ? &st.slot1
                                                                : &st.slot2;
    if (!s->pred_set || p != s->pred)
      fault("loop token through an unmarked port");
    if (!s->succ_set) fault("loop designation incomplete");
    hold_token(st, c, s->succ, now);
    st.loop_expect_second = (s == &st.slot1) && st.slot2.pred_set;
  }

  // ---- stage 4: traversal token forward hops -------------------------------
  for (const Arrival& a : dfs_raw) {
    const int out_p = a.ch.out_port;
    const int in_p = a.ch.in_port;
    if (st.dfs.pending != PendingKind::None) fault("traversal collision");
    event(ProtoEventKind::DfsReceived, CharClass::DFS, a.ch, out_p, in_p);
    if (ctx.is_root) {
      transcript(TranscriptKind::RootEdge,
                 make_token(CharClass::FORWARD,
                            static_cast<std::uint8_t>(out_p),
                            static_cast<std::uint8_t>(in_p)));
      st.dfs.pending = PendingKind::StartBca;
      st.dfs.pending_a = static_cast<std::uint8_t>(out_p);
      st.dfs.pending_b = static_cast<std::uint8_t>(in_p);
    } else if (!st.dfs.visited) {
      st.dfs.visited = true;
      st.dfs.parent_in = static_cast<std::uint8_t>(in_p);
      st.dfs.parent_out = static_cast<std::uint8_t>(out_p);
      st.dfs.tok_out = static_cast<std::uint8_t>(out_p);
      st.dfs.tok_in = static_cast<std::uint8_t>(in_p);
      st.dfs.has_token = true;
      st.dfs.pending = PendingKind::StartRca;
      st.dfs.pending_payload = make_token(CharClass::FORWARD,
                                          static_cast<std::uint8_t>(out_p),
                                          static_cast<std::uint8_t>(in_p));
      st.dfs.after_rca = AfterRca::FwdFirst;
    } else {
      st.dfs.tok_out = static_cast<std::uint8_t>(out_p);
      st.dfs.tok_in = static_cast<std::uint8_t>(in_p);
      st.dfs.has_token = true;
      st.dfs.pending = PendingKind::StartRca;
      st.dfs.pending_payload = make_token(CharClass::FORWARD,
                                          static_cast<std::uint8_t>(out_p),
                                          static_cast<std::uint8_t>(in_p));
      st.dfs.after_rca = AfterRca::FwdRevisit;
    }
  }

  // ---- stage 5: cleanup token ----------------------------------------------
  // Nodes holding any growing-stream state erase it all and pass the token
  // on through every out-wire; nodes with nothing to erase absorb it
  // silently, which is what extinguishes the wave.
  if (!kills.empty()) {
    bool marked = false;
    for (const GrowLane& l : st.lanes)
      if (l.visited || l.creator || !l.pipe.empty()) marked = true;
    if (marked) {
      clear_growing_lanes(st);
      // A conversion still waiting on its stream is growing-stream state
      // too: contact cancels it and the gate reopens. Marked-path slots
      // stay untouched.
      if (ctx.is_root && st.root_phase == RootPhase::ConvertingIG)
        st.root_phase = RootPhase::Open;
      for (int q : ctx.out_ports) emit(q, make_token(CharClass::KILL));
    }
  }

  // ---- stage 6: unmark token -----------------------------------------------
  for (const int p : unmarks) {
    if (st.rca_phase == RcaPhase::Unmarking && st.slot1.pred_set &&
        p == st.slot1.pred) {
      st.slot1.clear();
      st.rca_phase = RcaPhase::Idle;
      st.rca_payload = Character{};
      event(ProtoEventKind::RcaCompleted, CharClass::IG, Character{}, 0, 0);
      switch (st.dfs.after_rca) {
        case AfterRca::FwdFirst:
          st.dfs.pending = PendingKind::ProbeNext;
          break;
        case AfterRca::FwdRevisit:
          st.dfs.pending = PendingKind::StartBca;
          st.dfs.pending_a = st.dfs.tok_out;
          st.dfs.pending_b = st.dfs.tok_in;
          break;
        case AfterRca::Back:
          st.dfs.finished |= static_cast<std::uint8_t>(
              1u << (st.dfs.probe_out - 1));
          st.dfs.pending = PendingKind::ProbeNext;
          break;
        case AfterRca::None:
          break;
      }
      st.dfs.after_rca = AfterRca::None;
      continue;
    }
    if (st.bca_phase == BcaPhase::TargetUnmarkWait && st.bslot.pred_set &&
        p == st.bslot.pred) {
      st.bslot.clear();
      st.bca_phase = BcaPhase::Idle;
      st.bca_watch = 0;
      st.bca_payload = Character{};
      event(ProtoEventKind::BcaCompleted, CharClass::BID, Character{}, 0, 0);
      if (ctx.is_root) {
        transcript(TranscriptKind::RootEdge, make_token(CharClass::BACK));
        st.dfs.finished |= static_cast<std::uint8_t>(
            1u << (st.dfs.probe_out - 1));
        st.dfs.pending = PendingKind::ProbeNext;
      } else {
        st.dfs.after_rca = AfterRca::Back;
        st.dfs.pending = PendingKind::StartRca;
        st.dfs.pending_payload = make_token(CharClass::BACK);
      }
      continue;
    }
    if (ctx.is_root && st.root_phase == RootPhase::Marked &&
        st.slot1.pred_set && p == st.slot1.pred) {
      emit(st.slot2.succ, make_token(CharClass::UNMARK));
      st.slot1.clear();
      st.slot2.clear();
      st.root_phase = RootPhase::Open;
      event(ProtoEventKind::RootReopened, CharClass::ID, Character{}, 0, 0);
      continue;
    }
    if (st.bslot.pred_set && p == st.bslot.pred) {
      emit(st.bslot.succ, make_token(CharClass::UNMARK));
      st.bslot.clear();
      if (st.bca_phase == BcaPhase::AwaitUnmark) {
        st.bca_phase = BcaPhase::Idle;
        st.bca_watch = 0;
        st.bca_payload = Character{};
      }
      continue;
    }
    if (st.slot1.pred_set && p == st.slot1.pred) {
      emit(st.slot1.succ, make_token(CharClass::UNMARK));
      st.slot1.clear();
      continue;
    }
    if (st.slot2.pred_set && p == st.slot2.pred) {
      emit(st.slot2.succ, make_token(CharClass::UNMARK));
      st.slot2.clear();
      continue;
    }
    fault("unmark token at an unmarked node");
  }

}

// ---------------------------------------------------------------------------
// Drivers.

namespace {

std::shared_ptr<const PortGraph> shared_copy(const PortGraph& g) {
  return std::make_shared<const PortGraph>(g);
}

}  // namespace

RcaTrace run_rca_isolated(const PortGraph& g, int initiator,
                          const Character& payload, std::int64_t max_ticks) {
  if (initiator == g.root())
    throw std::invalid_argument("the root cannot initiate a call");
  NetworkState s(shared_copy(g));
  s.inject_call(initiator, payload);

  RcaTrace tr;
  tr.ig_parent_in.assign(static_cast<size_t>(g.nodes()), -1);
  bool done = false;
  while (!done) {
    if (s.tick() >= max_ticks)
      throw TickBudgetExceeded("isolated call exceeded " +
                               std::to_string(max_ticks) + " ticks");
    s.step();
    for (const ProtoEvent& ev : s.events_last_tick()) {
      switch (ev.kind) {
        case ProtoEventKind::NodeVisited:
          if (ev.cls == CharClass::IG &&
              tr.ig_parent_in[static_cast<size_t>(ev.node)] < 0)
            tr.ig_parent_in[static_cast<size_t>(ev.node)] = ev.port_a;
          break;
        case ProtoEventKind::KillReleased:
          if (ev.node == initiator && tr.kill_tick < 0) tr.kill_tick = ev.tick;
          break;
        case ProtoEventKind::TokenAbsorbed:
          if (ev.node == initiator) tr.token_absorb_tick = ev.tick;
          break;
        case ProtoEventKind::RcaCompleted:
          if (ev.node == initiator) {
            tr.completed_tick = ev.tick;
            done = true;
          }
          break;
        default:
          break;
      }
    }
    if (tr.token_absorb_tick >= 0 && s.tick() == tr.token_absorb_tick + 1)
      tr.eradicated_on_time = s.growing_state_clean();
  }
  tr.ticks = tr.completed_tick;
  tr.pristine_at_completion = s.snapshot_is_quiescent();
  tr.transcript = s.transcript();
  tr.events = s.event_log();

  // Decode the two path reports the root read.
  bool in_done = false, out_done = false;
  for (const TranscriptEvent& ev : tr.transcript) {
    if (ev.kind != TranscriptKind::PathChar) continue;
    if (ev.ch.cls == CharClass::IG && !in_done) {
      if (ev.ch.kind == CharKind::Tail) in_done = true;
      else tr.in_path.emplace_back(ev.ch.out_port, ev.ch.in_port);
    } else if (ev.ch.cls == CharClass::ID && in_done && !out_done) {
      if (ev.ch.kind == CharKind::Tail) out_done = true;
      else tr.out_path.emplace_back(ev.ch.out_port, ev.ch.in_port);
    }
  }
  return tr;
}

BcaTrace run_bca_isolated(const PortGraph& g, const Edge& edge,
                          std::int64_t max_ticks) {
  // The token sits at edge.dst (it traveled src --out_port/in_port--> dst)
  // and must come home to edge.src.
  NetworkState s(shared_copy(g));
  {
    auto idx = g.edge_out(edge.src, edge.out_port);
    if (!idx || !(g.edge(*idx) == edge))
      throw std::invalid_argument("edge not present in the graph");
  }
  NodeState& b = s.node_mut(edge.dst);
  b.dfs.pending = PendingKind::StartBca;
  b.dfs.pending_a = edge.out_port;
  b.dfs.pending_b = edge.in_port;

  BcaTrace tr;
  bool done = false;
  while (!done) {
    if (s.tick() >= max_ticks)
      throw TickBudgetExceeded("isolated backwards call exceeded " +
                               std::to_string(max_ticks) + " ticks");
    s.step();
    for (const ProtoEvent& ev : s.events_last_tick()) {
      switch (ev.kind) {
        case ProtoEventKind::NodeMarked:
          if (ev.cls == CharClass::BID) tr.marks.push_back(ev);
          break;
        case ProtoEventKind::BcaPayloadDelivered:
          tr.delivered_tick = ev.tick;
          tr.delivered_node = ev.node;
          break;
        case ProtoEventKind::BcaCompleted:
          tr.completed_tick = ev.tick;
          done = true;
          break;
        default:
          break;
      }
    }
  }
  tr.ticks = tr.completed_tick;
  tr.pristine_at_completion = s.snapshot_is_quiescent();
  tr.events = s.event_log();
  return tr;
}

GtdResult run_gtd(const PortGraph& g, std::int64_t max_ticks) {
  NetworkState s(shared_copy(g));
  s.inject_start();
  s.run_until_terminal(max_ticks);
  return GtdResult{s.transcript(), s.tick()};
}

GtdResult run_gtd(const PortGraph& g) {
  return run_gtd(g, default_tick_budget(g));
}

}  // namespace snakenet
