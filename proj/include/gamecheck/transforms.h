// Constructive model modifications: repairing well-behavedness with dummy
// chance nodes, stabilizing sequence-variant observations, and building the
// canonical coarse observation-based model from a classical one.
#ifndef GAMECHECK_TRANSFORMS_H_
#define GAMECHECK_TRANSFORMS_H_

#include <map>
#include <optional>

#include "gamecheck/game_tree.h"
#include "gamecheck/observations.h"

namespace gamecheck {

struct ModificationResult {
  GameTree game;
  std::optional<ObservationAssignment> observations;
  std::optional<ClassicalPartition> classical;
  // Injective, prefix-order preserving; leaves map to leaves with equal
  // utilities.
  std::map<History, History> embedding;
  int added_nodes = 0;
};

// Inserts a single-action chance node immediately after exactly those
// (block, action) pairs that sometimes lead directly to the owner's turn and
// sometimes not, on the branches that do. Output satisfies the classical
// well-behavedness condition; the partition is transported along.
ModificationResult RepairWbd(const GameTree& game,
                             const ClassicalPartition& classical);

// Stabilizes sequence-variant observations by inserting dummy chance nodes
// that split misaligned observation payloads and isolate own-action
// memories, one actual violation at a time (smallest first), until the
// induced partitions are stable. Identity on already-stable input. The
// embedded image induces the original partitions blockwise, and the output
// size respects |H~| <= |H| + |H| * (total number of induced blocks).
// Rejects set-variant input with std::invalid_argument.
ModificationResult StableModification(const GameTree& game,
                                      const ObservationAssignment& obs);

// Repairs well-behavedness first (possibly a no-op), then emits exactly the
// four canonical token families: current information set and available
// actions at own acting nodes, the own action just taken, and the terminal
// utility. Requires perfect recall (std::invalid_argument otherwise).
ModificationResult CoarseModel(const GameTree& game,
                               const ClassicalPartition& classical,
                               ObsVariant variant);

}  // namespace gamecheck

#endif  // GAMECHECK_TRANSFORMS_H_
