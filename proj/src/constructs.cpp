#include "snakenet/constructs.hpp"

#include <stdexcept>

namespace snakenet {

namespace {

std::string class_prefix(CharClass c) {
  switch (c) {
    case CharClass::IG: return "IG";
    case CharClass::OG: return "OG";
    case CharClass::ID: return "ID";
    case CharClass::OD: return "OD";
    case CharClass::BIG: return "BIG";
    case CharClass::BOG: return "BOG";
    case CharClass::BID: return "BID";
    case CharClass::BOD: return "BOD";
    case CharClass::FORWARD: return "FWD";
    case CharClass::BACK: return "BACK";
    case CharClass::KILL: return "KILL";
    case CharClass::UNMARK: return "UNMARK";
    case CharClass::DFS: return "DFS";
  }
  return "?";
}

std::string port_str(std::uint8_t p) {
  return p == kStarPort ? std::string("*") : std::to_string(int(p));
}

}  // namespace

std::string Character::display() const {
  std::string s = class_prefix(cls);
  if (is_snake_class(cls)) {
    switch (kind) {
      case CharKind::Head: s += 'H'; break;
      case CharKind::Tail: return s + "T";  // tails carry no ports
      case CharKind::Body: break;
      case CharKind::Token:
        throw std::logic_error("snake character with token kind");
    }
    return s + "(" + port_str(out_port) + "," + port_str(in_port) + ")";
  }
  // Tokens: FORWARD and DFS carry their hop ports, the rest are bare.
  if (cls == CharClass::FORWARD || cls == CharClass::DFS)
    return s + "(" + port_str(out_port) + "," + port_str(in_port) + ")";
  return s;
}

Character make_snake(CharClass cls, CharKind kind, std::uint8_t out_port,
                     std::uint8_t in_port) {
  if (!is_snake_class(cls))
    throw std::invalid_argument("make_snake: not a snake class");
  if (kind == CharKind::Token)
    throw std::invalid_argument("make_snake: snakes have no token kind");
  return Character{cls, kind, out_port, in_port};
}

Character make_token(CharClass cls, std::uint8_t out_port, std::uint8_t in_port) {
  if (is_snake_class(cls))
    throw std::invalid_argument("make_token: snake class");
  return Character{cls, CharKind::Token, out_port, in_port};
}

Character rewrite_star(Character c, std::uint8_t receiving_in_port,
                       std::uint8_t delta) {
  if (receiving_in_port == kStarPort || receiving_in_port > delta)
    throw std::invalid_argument("rewrite_star: in-port outside 1..delta");
  if (c.in_port == kStarPort) c.in_port = receiving_in_port;
  return c;
}

Character convert_class(Character c, CharClass to) {
  if (!is_snake_class(c.cls) || !is_snake_class(to))
    throw std::invalid_argument("convert_class: both classes must be snakes");
  c.cls = to;
  return c;
}

void Frame::push(const Character& c) {
  if (find(c.cls) != nullptr)
    throw std::runtime_error("frame already carries class " + c.display());
  if (n_ == kCapacity) throw std::runtime_error("frame overflow");
  chars_[static_cast<size_t>(n_)] = c;
  ++n_;
}

}  // namespace snakenet
