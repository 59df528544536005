#include "snakenet/node_state.hpp"

#include <stdexcept>

namespace snakenet {

void Pipe::push(const Character& ch, std::int64_t emit_at, bool per_port_out) {
  if (n_ == kCapacity)
    throw std::runtime_error("pipe overflow: four co-resident characters");
  if (n_ > 0 && q_[static_cast<size_t>(n_ - 1)].emit_at > emit_at)
    throw std::runtime_error("pipe order violated");
  q_[static_cast<size_t>(n_)] = Entry{ch, emit_at, per_port_out};
  ++n_;
}

Pipe::Entry Pipe::pop() {
  if (n_ == 0) throw std::runtime_error("pipe underflow");
  Entry e = q_[0];
  for (int i = 1; i < n_; ++i) q_[static_cast<size_t>(i - 1)] = q_[static_cast<size_t>(i)];
  q_[static_cast<size_t>(n_ - 1)] = Entry{};
  --n_;
  return e;
}

GrowLane& NodeState::lane(CharClass c) {
  switch (c) {
    case CharClass::IG: return lanes[0];
    case CharClass::OG: return lanes[1];
    case CharClass::BIG: return lanes[2];
    case CharClass::BOG: return lanes[3];
    default: throw std::invalid_argument("lane: not a growing class");
  }
}

const GrowLane& NodeState::lane(CharClass c) const {
  return const_cast<NodeState*>(this)->lane(c);
}

bool NodeState::non_dfs_pristine() const {
  NodeState blank;
  blank.dfs = dfs;  // the traversal block is the one exempt region
  return *this == blank;
}

bool NodeState::growing_clean() const {
  for (const GrowLane& l : lanes)
    if (l.visited || l.creator || !l.pipe.empty()) return false;
  return true;
}

namespace {

void put8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put64(std::vector<std::uint8_t>& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

void put_char(std::vector<std::uint8_t>& out, const Character& c) {
  for (std::uint8_t b : c.serialize()) out.push_back(b);
}

void put_pipe(std::vector<std::uint8_t>& out, const Pipe& p) {
  put8(out, static_cast<std::uint8_t>(p.size()));
  int i = 0;
  for (const Pipe::Entry& e : p) {
    put_char(out, e.ch);
    put64(out, e.emit_at);
    put8(out, e.per_port_out ? 1 : 0);
    ++i;
  }
  for (; i < Pipe::kCapacity; ++i) {  // pad to fixed width
    put_char(out, Character{});
    put64(out, 0);
    put8(out, 0);
  }
}

void put_slot(std::vector<std::uint8_t>& out, const MarkSlot& s) {
  put8(out, s.pred_set ? 1 : 0);
  put8(out, s.succ_set ? 1 : 0);
  put8(out, s.pred);
  put8(out, s.succ);
}

void put_conv(std::vector<std::uint8_t>& out, const DyingConv& c) {
  put8(out, c.active ? 1 : 0);
  put8(out, static_cast<std::uint8_t>(c.in_cls));
  put8(out, static_cast<std::uint8_t>(c.out_cls));
  put8(out, c.in_port);
  put8(out, c.out_port);
  put8(out, c.promote_next ? 1 : 0);
  put8(out, c.just_ate_head ? 1 : 0);
  put_pipe(out, c.pipe);
}

}  // namespace

std::vector<std::uint8_t> NodeState::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(serialized_size());
  for (const GrowLane& l : lanes) {
    put8(out, l.visited ? 1 : 0);
    put8(out, l.creator ? 1 : 0);
    put8(out, l.parent_in);
    put8(out, static_cast<std::uint8_t>(l.out_cls));
    put_pipe(out, l.pipe);
  }
  put_conv(out, conv);
  put_conv(out, conv2);
  put_slot(out, slot1);
  put_slot(out, slot2);
  put_slot(out, bslot);
  put8(out, loop_expect_second ? 1 : 0);
  put8(out, bca_payload_target ? 1 : 0);
  put8(out, hold.active ? 1 : 0);
  put_char(out, hold.ch);
  put64(out, hold.emit_at);
  put8(out, hold.out_port);
  put8(out, static_cast<std::uint8_t>(rca_phase));
  put_char(out, rca_payload);
  put8(out, static_cast<std::uint8_t>(bca_phase));
  put8(out, bca_watch);
  put_char(out, bca_payload);
  put8(out, pending_unmark_rca ? 1 : 0);
  put8(out, pending_unmark_bca ? 1 : 0);
  put8(out, static_cast<std::uint8_t>(root_phase));
  put8(out, dfs.visited ? 1 : 0);
  put8(out, dfs.parent_in);
  put8(out, dfs.parent_out);
  put8(out, dfs.finished);
  put8(out, dfs.has_token ? 1 : 0);
  put8(out, dfs.tok_out);
  put8(out, dfs.tok_in);
  put8(out, dfs.probe_out);
  put8(out, static_cast<std::uint8_t>(dfs.pending));
  put_char(out, dfs.pending_payload);
  put8(out, dfs.pending_a);
  put8(out, dfs.pending_b);
  put8(out, static_cast<std::uint8_t>(dfs.after_rca));
  if (out.size() != serialized_size())
    throw std::logic_error("serialized size drifted from its formula");
  return out;
}

}  // namespace snakenet
