#include "snakenet/mapper.hpp"

#include <algorithm>

namespace snakenet {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw MapperError(msg); }

}  // namespace

int MapState::resolve_or_assign() {
  auto it = names_.find(acc_);
  if (it != names_.end()) return it->second;
  const int name = static_cast<int>(names_.size());
  names_.emplace(acc_, name);
  return name;
}

int MapState::resolve_existing() const {
  auto it = names_.find(acc_);
  if (it == names_.end()) bad("backtrack reported by an unknown node");
  return it->second;
}

void MapState::ingest_event(const TranscriptEvent& ev) {
  if (complete_) bad("event after Terminated");
  if (!started_) {
    if (ev.kind != TranscriptKind::Start) bad("transcript must begin with Start");
    started_ = true;
    names_.emplace(PathKey{}, 0);  // the root reads empty paths for itself
    stack_.assign(1, 0);
    return;
  }

  auto clear_acc = [&] {
    acc_ = PathKey{};
    in_done_ = out_done_ = false;
  };
  auto note_port = [&](int p) { max_port_ = std::max(max_port_, p); };

  switch (ev.kind) {
    case TranscriptKind::Start:
      bad("second Start");

    case TranscriptKind::PathChar: {
      const Character& c = ev.ch;
      if (c.cls == CharClass::IG) {
        if (in_done_) bad("inward path already delimited");
        if (c.kind == CharKind::Head) {
          // A fresh head while an inward report is still open means the
          // earlier stream was cut off by cleanup before its tail arrived;
          // the reader drops the partial report and starts over.
          if (!acc_.in_path.empty()) clear_acc();
          acc_.in_path.emplace_back(c.out_port, c.in_port);
        } else if (c.kind == CharKind::Body) {
          if (acc_.in_path.empty()) bad("inward body before its head");
          acc_.in_path.emplace_back(c.out_port, c.in_port);
        } else if (c.kind == CharKind::Tail) {
          if (acc_.in_path.empty()) bad("empty inward path");
          in_done_ = true;
        } else {
          bad("token as a path character");
        }
      } else if (c.cls == CharClass::ID) {
        if (!in_done_) bad("outward path before the inward one");
        if (out_done_) bad("outward path already delimited");
        if (c.kind == CharKind::Head) {
          if (!acc_.out_path.empty()) bad("second outward head");
          acc_.out_path.emplace_back(c.out_port, c.in_port);
        } else if (c.kind == CharKind::Body) {
          if (acc_.out_path.empty()) bad("outward body before its head");
          acc_.out_path.emplace_back(c.out_port, c.in_port);
        } else if (c.kind == CharKind::Tail) {
          if (acc_.out_path.empty()) bad("empty outward path");
          out_done_ = true;
        } else {
          bad("token as a path character");
        }
      } else {
        bad("path character of class " + c.display());
      }
      return;
    }

    case TranscriptKind::LoopToken: {
      if (!in_done_ || !out_done_) bad("loop token before both path reports");
      if (ev.ch.cls == CharClass::FORWARD) {
        const int who = resolve_or_assign();
        if (stack_.empty()) bad("forward step with an empty stack");
        edges_.push_back(Edge{stack_.back(), ev.ch.out_port, who,
                              ev.ch.in_port});
        note_port(ev.ch.out_port);
        note_port(ev.ch.in_port);
        stack_.push_back(who);
      } else if (ev.ch.cls == CharClass::BACK) {
        const int who = resolve_existing();
        if (stack_.size() < 2) bad("backtrack below the root");
        stack_.pop_back();
        if (stack_.back() != who) bad("backtrack to the wrong node");
      } else {
        bad("loop token of class " + ev.ch.display());
      }
      clear_acc();
      return;
    }

    case TranscriptKind::RootEdge: {
      if (in_done_ || out_done_ || !acc_.in_path.empty())
        bad("dangling path report at a root edge event");
      if (ev.ch.cls == CharClass::FORWARD) {
        if (stack_.empty()) bad("forward step with an empty stack");
        edges_.push_back(Edge{stack_.back(), ev.ch.out_port, 0,
                              ev.ch.in_port});
        note_port(ev.ch.out_port);
        note_port(ev.ch.in_port);
        stack_.push_back(0);
      } else if (ev.ch.cls == CharClass::BACK) {
        if (stack_.size() < 2) bad("backtrack below the root");
        stack_.pop_back();
        if (stack_.back() != 0) bad("root backtrack away from the root");
      } else {
        bad("root edge event of class " + ev.ch.display());
      }
      return;
    }

    case TranscriptKind::Terminated:
      if (in_done_ || out_done_ || !acc_.in_path.empty())
        bad("dangling path report at termination");
      if (stack_.size() != 1 || stack_.front() != 0)
        bad("termination away from the root");
      complete_ = true;
      return;
  }
  bad("unrecognized transcript event");
}

PortGraph MapState::finalize() const {
  if (!complete_) bad("finalize before Terminated");
  const int n = static_cast<int>(names_.size());
  const int delta = std::max(2, max_port_);
  PortGraph g = PortGraph::from_edges(n, delta, 0, edges_);
  ValidationReport rep = g.validate();
  if (!rep.ok()) bad("reconstructed network invalid: " + rep.violations.front());
  return g;
}

PortGraph map_transcript(const Transcript& t) {
  MapState m;
  for (const TranscriptEvent& ev : t) m.ingest_event(ev);
  if (!m.complete()) bad("transcript ended before Terminated");
  return m.finalize();
}

}  // namespace snakenet
