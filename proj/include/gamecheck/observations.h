// Observation functions over a game tree, in both the set variant (a player
// can tell where one history's observation ends) and the sequence variant
// (a flat token stream), plus the derived observation constructors and the
// interleaved observation-history records they induce.
#ifndef GAMECHECK_OBSERVATIONS_H_
#define GAMECHECK_OBSERVATIONS_H_

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "gamecheck/game_tree.h"

namespace gamecheck {

enum class TokenKind { kSymbol, kAction, kInfoset, kFeature };

// An elementary observation. Tokens are opaque: they compare structurally
// and carry no semantics of their own.
struct Token {
  TokenKind kind = TokenKind::kSymbol;
  std::string name;
  std::string value;  // used by kFeature only

  auto operator<=>(const Token&) const = default;

  static Token Symbol(std::string s);
  static Token Action(std::string label);
  static Token Infoset(std::string id);
  static Token Feature(std::string name, std::string value);

  // "sym:NAME" | "act:LABEL" | "iset:ID" | "feat:NAME=VALUE"
  std::string ToString() const;
  static Token FromString(const std::string& s);
};

enum class ObsVariant { kSet, kSeq };

// Per-player, per-history observations. Empty observations are represented
// by absence; set-variant payloads are kept sorted and deduplicated.
class ObservationAssignment {
 public:
  ObservationAssignment(ObsVariant variant, int num_players);

  ObsVariant variant() const { return variant_; }
  int num_players() const { return num_players_; }

  // nullptr when the observation at h is empty.
  const std::vector<Token>* ObservationAt(Player i, const History& h) const;
  void SetObservation(Player i, const History& h, std::vector<Token> tokens);
  void AppendObservation(Player i, const History& h,
                         const std::vector<Token>& tokens);

  const std::map<History, std::vector<Token>>& PlayerObservations(
      Player i) const;

  bool operator==(const ObservationAssignment& other) const;

 private:
  ObsVariant variant_;
  int num_players_;
  std::vector<std::map<History, std::vector<Token>>> obs_;  // [player-1]
};

// O + O': per-history union (set variant) or concatenation (sequence
// variant). Throws std::invalid_argument on variant or player-count mismatch.
ObservationAssignment AddObservations(const ObservationAssignment& o,
                                      const ObservationAssignment& o_prime);

// Infoset label at each acting node; with the turn marker, a "not_your_turn"
// symbol everywhere else (the memoryless classical model).
ObservationAssignment ClassicalObs(const GameTree& game,
                                   const ClassicalPartition& classical,
                                   bool with_turn_marker, ObsVariant variant);

// Each player observes his own action in the history immediately following
// the one where he took it.
ObservationAssignment IsoObs(const GameTree& game, ObsVariant variant);

// Disjoint labeled blocks covering a subset of the histories; labels are the
// lexicographically least members.
struct LabeledBlockSet {
  std::vector<std::set<History>> blocks;
};

// Emits the block label exactly on entry into a new block, comparing against
// the longest covered proper prefix. Throws on overlapping blocks.
ObservationAssignment ObsFromPartition(
    const GameTree& game, const std::vector<LabeledBlockSet>& per_player,
    ObsVariant variant);

// One entry of a player's interleaved memory: either the memory of an own
// action, a whole token set received at one history (set variant), or a
// single token (sequence variant, payloads inlined).
struct ObsEntry {
  enum class Kind { kActionMemory, kTokenSet, kToken };
  Kind kind = Kind::kToken;
  std::string action;         // kActionMemory
  std::vector<Token> tokens;  // kTokenSet payload, or a single kToken

  auto operator<=>(const ObsEntry&) const = default;

  static ObsEntry ActionMemory(std::string a);
  static ObsEntry TokenSet(std::vector<Token> set);
  static ObsEntry SingleToken(Token t);
  std::string ToString() const;
};

using ObservationHistory = std::vector<ObsEntry>;

std::string ObsHistoryToString(const ObservationHistory& oh);

// vec O_i(h), by the recursive definition. Empty observations are skipped;
// an own-action memory is appended exactly when leaving an acting node.
ObservationHistory ObsHistory(const GameTree& game,
                              const ObservationAssignment& obs, Player i,
                              const History& h);

// All observation histories of one player in a single pass.
std::map<History, ObservationHistory> AllObsHistories(
    const GameTree& game, const ObservationAssignment& obs, Player i);

}  // namespace gamecheck

#endif  // GAMECHECK_OBSERVATIONS_H_
