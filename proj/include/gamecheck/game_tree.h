// Core game model: finite perfect-information extensive-form trees in the
// sequence representation (a node is the action path that reaches it), plus
// classical information partitions over the acting nodes.
#ifndef GAMECHECK_GAME_TREE_H_
#define GAMECHECK_GAME_TREE_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamecheck {

using Player = int;  // 1..N are players, kChancePlayer is chance.
inline constexpr Player kChancePlayer = 0;

// A history is the sequence of action labels from the root; the root itself
// is the empty sequence. Lexicographic vector order puts every prefix before
// its extensions, which the code relies on for parent-first traversals.
using History = std::vector<std::string>;

std::string HistoryToString(const History& h);
History HistoryFromString(const std::string& s);

// g ⊑ h, non-strict: h extends g.
bool IsPrefix(const History& g, const History& h);

// Raised when an internal invariant that the library itself guarantees is
// found violated (maps to CLI exit code 3).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct RawNode {
  History h;
  std::optional<Player> player;          // absent on leaves
  std::map<std::string, double> chance;  // present iff player == chance
  std::optional<std::vector<double>> utilities;  // present iff leaf
};

struct RawGame {
  int players = 0;
  std::vector<RawNode> nodes;
};

struct TreeValidation;
TreeValidation ValidateTree(const RawGame& raw);

class GameTree {
 public:
  int num_players() const { return num_players_; }
  const std::vector<History>& histories() const { return histories_; }
  bool Contains(const History& h) const { return nodes_.count(h) > 0; }
  bool IsTerminal(const History& h) const;
  // Player acting at h; nullopt at terminals.
  std::optional<Player> PlayerAt(const History& h) const;
  const std::vector<std::string>& Actions(const History& h) const;
  std::vector<History> Children(const History& h) const;
  const std::vector<double>& Utilities(const History& h) const;
  const std::map<std::string, double>& ChanceDist(const History& h) const;
  // h = h'a decomposition; nullopt at the root.
  static std::optional<std::pair<History, std::string>> Parent(
      const History& h);

  // Non-terminal histories where i acts, in canonical order.
  std::vector<History> ActingHistories(Player i) const;
  std::vector<History> TerminalHistories() const;

  bool operator==(const GameTree& other) const;

  RawGame ToRaw() const;

 private:
  friend TreeValidation ValidateTree(const RawGame& raw);

  struct Node {
    std::optional<Player> player;
    std::map<std::string, double> chance;
    std::optional<std::vector<double>> utilities;
    std::vector<std::string> actions;  // sorted child actions
  };

  const Node& NodeAt(const History& h) const;

  int num_players_ = 0;
  std::map<History, Node> nodes_;
  std::vector<History> histories_;  // canonical (lexicographic) order
};

// Validates every type invariant and reports all violations, not just the
// first: prefix closure, leaf/utility agreement, chance normalization
// (tolerance 1e-9, zero-probability actions rejected), label sanity.
struct TreeValidation {
  std::optional<GameTree> tree;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && tree.has_value(); }
};

// Per-player partition of the acting nodes H_i. Block order and the order
// inside blocks are canonical so labels are stable across runs.
class ClassicalPartition {
 public:
  ClassicalPartition() = default;
  ClassicalPartition(int num_players,
                     std::vector<std::vector<std::set<History>>> blocks);

  int num_players() const { return num_players_; }
  const std::vector<std::set<History>>& Blocks(Player i) const;
  // Index of the block containing h in Blocks(i); nullopt if h not covered.
  std::optional<int> BlockIndex(Player i, const History& h) const;
  // Stable label: the lexicographically least member, serialized.
  std::string BlockLabel(Player i, int index) const;

  bool operator==(const ClassicalPartition& other) const;

 private:
  int num_players_ = 0;
  std::vector<std::vector<std::set<History>>> blocks_;  // [player-1]
  std::vector<std::map<History, int>> index_;           // [player-1]
};

using RawClassical = std::map<Player, std::vector<std::vector<History>>>;

struct PartitionValidation {
  std::optional<ClassicalPartition> partition;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && partition.has_value(); }
};

// Blocks must be disjoint, cover exactly H_i, and have uniform available
// action sets. Players missing from `raw` get all-singleton blocks only if
// they act nowhere (i.e. empty coverage must still cover empty H_i).
PartitionValidation ValidateClassical(const GameTree& game,
                                      const RawClassical& raw);

// All-singletons classical partition (perfect information).
ClassicalPartition SingletonClassical(const GameTree& game);

}  // namespace gamecheck

#endif  // GAMECHECK_GAME_TREE_H_
