#pragma once

// Complete state of one processor. Everything in here is fixed-size: nothing
// grows with the network, which is what makes the processors legitimately
// finite-state. A canonical byte serialization backs that claim in tests.

#include <array>
#include <cstdint>
#include <vector>

#include "snakenet/constructs.hpp"

namespace snakenet {

// Characters a processor has read but not yet re-emitted. A relay reads at
// most one character of a class per tick and holds each for at most three
// ticks, so three slots suffice; a fourth resident indicates a broken
// protocol and faults.
class Pipe {
 public:
  static constexpr int kCapacity = 3;

  struct Entry {
    Character ch;
    std::int64_t emit_at = 0;
    // When set, the character's out-port field is stamped with the emission
    // port (used for a creator's own per-port head/body characters).
    bool per_port_out = false;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  [[nodiscard]] bool empty() const { return n_ == 0; }
  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] const Entry& front() const { return q_[0]; }

  void push(const Character& ch, std::int64_t emit_at, bool per_port_out);
  Entry pop();
  void clear() { n_ = 0; }

  friend bool operator==(const Pipe&, const Pipe&) = default;

  [[nodiscard]] const Entry* begin() const { return q_.data(); }
  [[nodiscard]] const Entry* end() const { return q_.data() + n_; }

 private:
  std::array<Entry, kCapacity> q_{};
  int n_ = 0;
};

// Per-class state of the growing-snake flood. A processor is "visited" by a
// snake class once it has accepted that snake's head; it then accepts further
// characters of the class only through the parent in-port and re-broadcasts
// them. The creator of a snake never accepts incoming copies at all.
struct GrowLane {
  bool visited = false;
  bool creator = false;
  std::uint8_t parent_in = 0;
  // Class stamped on re-emitted characters. Equal to the lane's own class
  // everywhere except the distinguished conversion point of the protocol.
  CharClass out_cls{CharClass::IG};
  Pipe pipe;

  friend bool operator==(const GrowLane&, const GrowLane&) = default;
};

// Relay for a dying-snake stream: consumes the head (which marks the node),
// then forwards the remainder through one fixed wire, promoting the first
// body character to a fresh head. Also used, with in_cls != out_cls, at the
// two places the protocol converts one stream into another.
struct DyingConv {
  bool active = false;
  CharClass in_cls{CharClass::ID};
  CharClass out_cls{CharClass::ID};
  std::uint8_t in_port = 0;
  std::uint8_t out_port = 0;
  bool promote_next = false;
  bool just_ate_head = false;
  Pipe pipe;

  friend bool operator==(const DyingConv&, const DyingConv&) = default;
};

// A marked-loop designation: the in-port a loop visitor must arrive through
// and the out-port it leaves through. Slot 1 holds marks laid by the inward
// dying snake, slot 2 marks laid by the outward one; the backwards-call loop
// uses its own slot.
struct MarkSlot {
  bool pred_set = false;
  bool succ_set = false;
  std::uint8_t pred = 0;
  std::uint8_t succ = 0;

  [[nodiscard]] bool any() const { return pred_set || succ_set; }
  void clear() { *this = MarkSlot{}; }

  friend bool operator==(const MarkSlot&, const MarkSlot&) = default;
};

// A loop-paced token (loop token or delivered payload) held for its dwell.
struct LoopHold {
  bool active = false;
  Character ch;
  std::int64_t emit_at = 0;
  std::uint8_t out_port = 0;

  friend bool operator==(const LoopHold&, const LoopHold&) = default;
};

// Phase register of a call initiator (the node the call reports to).
enum class RcaPhase : std::uint8_t {
  Idle,
  AwaitOG,      // inward flood released, waiting for the returned head
  MarkingID,    // converting the returned stream into the inward dying snake
  AwaitODTail,  // marking under way, waiting for the outward tail
  AwaitToken,   // cleanup + loop token released, token circling
  Unmarking,    // unmark token circling
};

// Phase register of a backwards-call initiator or its delivery target.
enum class BcaPhase : std::uint8_t {
  Idle,
  Seeking,          // flood out, watching the arrival wire
  Marking,          // converting the watched stream into the marking snake
  AwaitTailReturn,  // marking launched, waiting for the tail to circle back
  AwaitUnmark,      // payload handed over, waiting for the unmark pass
  TargetUnmarkWait, // payload absorbed here, own unmark circling
};

// The root's conversion gate.
enum class RootPhase : std::uint8_t {
  Open,          // will convert the next arriving inward snake
  ConvertingIG,  // conversion in progress
  Marked,        // holds loop designations; closed until unmarked
};

// Next-tick action scheduled by the traversal layer.
enum class PendingKind : std::uint8_t {
  None,
  StartRca,   // flood the inward growing snake; payload in pending_payload
  StartBca,   // flood the backwards call; ports in pending_a/pending_b
  ProbeNext,  // advance the traversal at this node
  ReleaseUnmarkRca,
  ReleaseUnmarkBca,
};

// What to do once a call this node initiated reports completion.
enum class AfterRca : std::uint8_t {
  None,
  FwdFirst,    // fresh node: continue probing from here
  FwdRevisit,  // known node: hand the token straight back
  Back,        // token returned here: close the probe and continue
};

// Traversal bookkeeping. This block is the only node state allowed to
// persist between calls; everything else must return to defaults.
struct DfsCtl {
  bool visited = false;
  std::uint8_t parent_in = 0;
  std::uint8_t parent_out = 0;  // far-end out-port of the parent wire
  std::uint8_t finished = 0;    // bitmask over out-ports 1..delta
  bool has_token = false;
  std::uint8_t tok_out = 0;  // ports of the token's last forward hop
  std::uint8_t tok_in = 0;
  std::uint8_t probe_out = 0;
  PendingKind pending{PendingKind::None};
  Character pending_payload;
  std::uint8_t pending_a = 0;
  std::uint8_t pending_b = 0;
  AfterRca after_rca{AfterRca::None};

  friend bool operator==(const DfsCtl&, const DfsCtl&) = default;
};

struct NodeState {
  // Growing lanes in class order IG, OG, BIG, BOG.
  std::array<GrowLane, 4> lanes{};
  // Two relay channels: a node that lies on both the inward and the outward
  // half of a call loop forwards both dying streams, and their passages can
  // overlap in time when the node sits near the loop's far end.
  DyingConv conv, conv2;
  MarkSlot slot1, slot2, bslot;
  bool loop_expect_second = false;
  bool bca_payload_target = false;
  LoopHold hold;

  RcaPhase rca_phase{RcaPhase::Idle};
  Character rca_payload;
  BcaPhase bca_phase{BcaPhase::Idle};
  std::uint8_t bca_watch = 0;
  Character bca_payload;
  bool pending_unmark_rca = false;
  bool pending_unmark_bca = false;

  RootPhase root_phase{RootPhase::Open};
  DfsCtl dfs;

  friend bool operator==(const NodeState&, const NodeState&) = default;

  [[nodiscard]] GrowLane& lane(CharClass c);
  [[nodiscard]] const GrowLane& lane(CharClass c) const;

  // True when every field outside the traversal block is at its default:
  // the condition each completed call must leave behind.
  [[nodiscard]] bool non_dfs_pristine() const;

  // True when no growing-snake residue (lane state or queued characters)
  // remains: the condition the cleanup token must establish.
  [[nodiscard]] bool growing_clean() const;

  // Canonical fixed-width byte dump; its length never depends on the
  // network. serialized_size() states the length arithmetically.
  [[nodiscard]] std::vector<std::uint8_t> serialize() const;
  [[nodiscard]] static constexpr std::size_t serialized_size();
};

constexpr std::size_t kPipeBytes =
    1 + Pipe::kCapacity * (4 + 8 + 1);        // count + (char, tick, flag)
constexpr std::size_t kLaneBytes = 4 + kPipeBytes;
constexpr std::size_t kConvBytes = 7 + kPipeBytes;
constexpr std::size_t kSlotBytes = 4;
constexpr std::size_t kHoldBytes = 1 + 4 + 8 + 1;
constexpr std::size_t kDfsBytes = 8 + 1 + 4 + 2 + 1;

constexpr std::size_t NodeState::serialized_size() {
  return 4 * kLaneBytes + 2 * kConvBytes + 3 * kSlotBytes  // lanes, convs, slots
         + 2                                           // loop bit, target bit
         + kHoldBytes + 1 + 4 + 1 + 1 + 4              // hold, phases/payloads
         + 2 + 1                                       // unmark bits, root phase
         + kDfsBytes;
}

}  // namespace snakenet
