#pragma once

// Root-side reconstruction: folds the transcript of a full traversal into a
// port-labeled graph. Nodes are identified by the pair of port-paths the
// root reads during their calls; the traversal stack ties edges together.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "snakenet/engine.hpp"
#include "snakenet/portgraph.hpp"

namespace snakenet {

class MapperError : public std::runtime_error {
 public:
  explicit MapperError(const std::string& what) : std::runtime_error(what) {}
};

// The identity the root can observe for a node: the canonical port-path from
// the node to the root and back. Identical across every call the same node
// makes, distinct between nodes.
struct PathKey {
  std::vector<std::pair<std::uint8_t, std::uint8_t>> in_path;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> out_path;

  friend bool operator==(const PathKey&, const PathKey&) = default;
  friend auto operator<=>(const PathKey&, const PathKey&) = default;
};

class MapState {
 public:
  // Feed transcript events in order. Throws MapperError on malformed input
  // (events before Start, unbalanced backtracks, incomplete path streams,
  // events after Terminated).
  void ingest_event(const TranscriptEvent& ev);

  [[nodiscard]] bool complete() const { return complete_; }
  [[nodiscard]] int names_assigned() const { return static_cast<int>(names_.size()); }

  // Builds the reconstructed graph. Valid only once complete; the result
  // carries root = 0 and delta = max(2, highest port mentioned).
  [[nodiscard]] PortGraph finalize() const;

 private:
  enum class PathSide { In, Out };

  bool started_ = false;
  bool complete_ = false;
  // Path accumulation state for the call currently reporting.
  PathKey acc_;
  bool in_done_ = false;
  bool out_done_ = false;
  std::map<PathKey, int> names_;  // key -> node name; root is 0 under ε
  std::vector<int> stack_;
  std::vector<Edge> edges_;
  int max_port_ = 0;

  int resolve_or_assign();
  [[nodiscard]] int resolve_existing() const;
};

// Convenience: run a whole transcript through the mapper.
[[nodiscard]] PortGraph map_transcript(const Transcript& t);

}  // namespace snakenet
