// Executable encodings of the example domains, each carrying the verdicts it
// is expected to witness, plus seeded random-instance generators for the
// property harnesses.
#ifndef GAMECHECK_CORPUS_H_
#define GAMECHECK_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gamecheck/game_tree.h"
#include "gamecheck/observations.h"

namespace gamecheck {

// property: "cons" | "aps" | "iso" | "tsip" | "stab" | "wbd" | "recall" |
// "obsmodel". obs_name keys into CorpusEntry::observations; empty for the
// classical-only properties (wbd, recall).
struct ExpectedVerdict {
  std::string property;
  std::string obs_name;
  bool verdict = false;
};

struct CorpusEntry {
  std::string name;
  GameTree game;
  std::optional<ClassicalPartition> classical;
  std::map<std::string, ObservationAssignment> observations;
  std::vector<ExpectedVerdict> expected;
};

CorpusEntry SneakingGame();
CorpusEntry SneakingGameModified();
CorpusEntry IsoFailGame();
CorpusEntry NoFinestGame();
CorpusEntry ThickInfosetGame();
CorpusEntry PaddingGame(int n);
CorpusEntry UnfairMatchingPennies();
CorpusEntry UnfairMatchingPenniesBroken();
CorpusEntry BettingGame();
CorpusEntry MiniPoker();

// "padding(N)" is parameterized; every other name is fixed.
std::vector<std::string> CorpusNames();
CorpusEntry GetCorpusEntry(const std::string& name);

// O^iso + O^cl over the entry's classical partition.
ObservationAssignment IsoPlusClassical(const GameTree& game,
                                       const ClassicalPartition& classical,
                                       ObsVariant variant);

struct RandomInstance {
  GameTree game;
  ObservationAssignment obs;
};

// Reproducible from the seed alone. obs_richness in [0,1] controls how often
// a (player, history) pair receives tokens.
RandomInstance MakeRandomInstance(std::uint64_t seed, int max_nodes,
                                  int num_players, double obs_richness);

struct RandomClassicalGame {
  GameTree game;
  ClassicalPartition classical;
};

// Perfect recall by construction: acting nodes are grouped by the sequence
// of (own information set, own action) pairs above them, then randomly
// subdivided.
RandomClassicalGame MakeRandomClassical(std::uint64_t seed, int max_nodes,
                                        int num_players);

// Candidate observation-based model (coarse model of a random classical game
// with randomized token enrichments). Callers filter on the model validity
// precondition.
RandomInstance MakeRandomObservationModel(std::uint64_t seed, int max_nodes,
                                          int num_players);

}  // namespace gamecheck

#endif  // GAMECHECK_CORPUS_H_
