#pragma once

// Wire-level vocabulary of the simulator: the characters that travel between
// processors, their speed classes, and the per-edge frames that carry them.
// Everything here is fixed-width by construction; nothing scales with the
// network size.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace snakenet {

// Engine port capacity. The model itself only requires delta >= 2; the fixed
// upper bound keeps per-node state flat and constant-sized.
inline constexpr int kMaxDelta = 8;

// Placeholder written into the in-port field of a freshly created character.
// The receiving processor rewrites it to the actual in-port number.
inline constexpr std::uint8_t kStarPort = 0;

enum class CharClass : std::uint8_t {
  IG,  // inward growing snake (initiator -> root search)
  OG,  // outward growing snake (root -> initiator search)
  ID,  // inward dying snake (marks the initiator -> root half of the loop)
  OD,  // outward dying snake (marks the root -> initiator half)
  BIG, // growing snake of the backwards-delivery call (own namespace)
  BOG, // reserved growing counterpart of the backwards namespace
  BID, // dying snake of the backwards-delivery call
  BOD, // reserved dying counterpart of the backwards namespace
  FORWARD, // loop token announcing a forward traversal, carries (out,in)
  BACK,    // loop token announcing a backtrack, carries no ports
  KILL,    // cleanup token erasing growing-snake state
  UNMARK,  // cleanup token dissolving a marked loop
  DFS,     // the traversal token itself, carries (out,in) of its last hop
};

enum class CharKind : std::uint8_t { Head, Body, Tail, Token };

enum class SpeedClass : std::uint8_t { Speed1, Speed3 };

// Ticks a construct spends per processor: a speed-1 construct is held for
// three ticks before moving on, a speed-3 construct for one.
[[nodiscard]] constexpr int dwell_ticks(SpeedClass s) {
  return s == SpeedClass::Speed1 ? 3 : 1;
}

[[nodiscard]] constexpr bool is_growing_class(CharClass c) {
  return c == CharClass::IG || c == CharClass::OG || c == CharClass::BIG ||
         c == CharClass::BOG;
}

[[nodiscard]] constexpr bool is_dying_class(CharClass c) {
  return c == CharClass::ID || c == CharClass::OD || c == CharClass::BID ||
         c == CharClass::BOD;
}

[[nodiscard]] constexpr bool is_snake_class(CharClass c) {
  return is_growing_class(c) || is_dying_class(c);
}

[[nodiscard]] constexpr bool is_loop_token_class(CharClass c) {
  return c == CharClass::FORWARD || c == CharClass::BACK;
}

// Class-default speed. Snakes and loop tokens crawl at speed 1; the cleanup
// tokens and the traversal token move at speed 3. (A DFS token riding a
// marked loop as a delivery payload is paced like a loop token; the protocol
// layer handles that case explicitly.)
[[nodiscard]] constexpr SpeedClass speed_of(CharClass c) {
  switch (c) {
    case CharClass::KILL:
    case CharClass::UNMARK:
    case CharClass::DFS:
      return SpeedClass::Speed3;
    default:
      return SpeedClass::Speed1;
  }
}

// One character on a wire. out_port/in_port mean "created through out-port i,
// first received through in-port j" for snake characters, and "last passed
// through out-port i / received through in-port j" for FORWARD and DFS
// tokens. Fixed four-byte record.
struct Character {
  CharClass cls{CharClass::IG};
  CharKind kind{CharKind::Token};
  std::uint8_t out_port = 0;
  std::uint8_t in_port = 0;

  friend bool operator==(const Character&, const Character&) = default;

  [[nodiscard]] std::array<std::uint8_t, 4> serialize() const {
    return {static_cast<std::uint8_t>(cls), static_cast<std::uint8_t>(kind),
            out_port, in_port};
  }

  // Stable display form used in transcripts and goldens, e.g. "IGH(2,3)",
  // "IGT", "FWD(4,1)", "BACK", "KILL", "DFS(4,1)".
  [[nodiscard]] std::string display() const;
};

// Convenience constructors.
[[nodiscard]] Character make_snake(CharClass cls, CharKind kind,
                                   std::uint8_t out_port, std::uint8_t in_port);
[[nodiscard]] Character make_token(CharClass cls, std::uint8_t out_port = 0,
                                   std::uint8_t in_port = 0);

// Rewrites the '*' in-port of a freshly received character to the in-port it
// actually arrived through. Characters whose in-port is already resolved are
// returned unchanged. Throws std::invalid_argument if the port is outside
// 1..delta.
[[nodiscard]] Character rewrite_star(Character c, std::uint8_t receiving_in_port,
                                     std::uint8_t delta);

// Re-classes a snake character while preserving kind and ports (IG(4,1) ->
// OG(4,1), OGH(2,3) -> IDH(2,3), ...). Throws std::invalid_argument when
// either side is not a snake class.
[[nodiscard]] Character convert_class(Character c, CharClass to);

// The contents of one wire during one tick. At most one character per class;
// a blank wire is simply an empty frame.
class Frame {
 public:
  static constexpr int kCapacity = 8;

  [[nodiscard]] bool empty() const { return n_ == 0; }
  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] const Character& at(int i) const { return chars_[static_cast<size_t>(i)]; }

  [[nodiscard]] const Character* find(CharClass cls) const {
    for (int i = 0; i < n_; ++i)
      if (chars_[static_cast<size_t>(i)].cls == cls) return &chars_[static_cast<size_t>(i)];
    return nullptr;
  }

  // Throws SimulationFault-style std::runtime_error on a duplicate class or
  // overflow; both indicate a broken transition function, not bad input.
  void push(const Character& c);

  friend bool operator==(const Frame&, const Frame&) = default;

  [[nodiscard]] const Character* begin() const { return chars_.data(); }
  [[nodiscard]] const Character* end() const { return chars_.data() + n_; }

 private:
  std::array<Character, kCapacity> chars_{};
  int n_ = 0;
};

}  // namespace snakenet
