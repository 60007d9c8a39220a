// Deciders for the desiderata an observation-based model can satisfy
// (consistency, acting-player separation, immediate self-observation,
// tree-structured partitions, stability, well-behaved domains, perfect
// recall, feature deducibility), each with a concrete witness on failure,
// plus the stability-equivalence and model-validity verifiers.
#ifndef GAMECHECK_PROPERTIES_H_
#define GAMECHECK_PROPERTIES_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gamecheck/game_tree.h"
#include "gamecheck/observations.h"
#include "gamecheck/partitions.h"

namespace gamecheck {

// A partial function on histories with canonically encoded values.
struct Feature {
  std::string name;
  std::function<bool(const History&)> domain;
  std::function<std::string(const History&)> value;
};

Feature UtilityFeature(const GameTree& game, Player i);      // on terminals
Feature PlayerFunctionFeature(const GameTree& game);         // on non-terminals
Feature IsMyTurnFeature(const GameTree& game, Player i);     // on all histories
Feature AvailableActionsFeature(const GameTree& game);       // on non-terminals
Feature IsTerminalFeature(const GameTree& game);             // on all histories
// Defined where the observation is nonempty (absence = no observation).
Feature OwnObservationFeature(const ObservationAssignment& obs, Player i);
Feature HistoryLengthFeature();

struct PropertyReport {
  std::string property;
  bool holds = false;
  std::vector<History> witness;               // offending histories
  std::vector<std::string> witness_details;   // rendered observation histories
  std::string message;
};

// I^O_i restricted to H_i equals the classical partition, for every player.
PropertyReport CheckCons(const GameTree& game, const ObservationAssignment& obs,
                         const ClassicalPartition& classical);

// No induced block mixes acting and non-acting histories of its owner.
PropertyReport CheckAps(const GameTree& game,
                        const ObservationAssignment& obs);

// Every own action appears as a token of the very next observation.
PropertyReport CheckIso(const GameTree& game,
                        const ObservationAssignment& obs);

// Blocks ordered by history extension form a tree: the relation is
// antisymmetric and every non-root block has exactly one parent block under
// the immediate-history-parent relation.
PropertyReport CheckTsip(const GameTree& game,
                         const ObservationAssignment& obs);
PropertyReport CheckTsipPartitions(
    const GameTree& game, const std::vector<InformationPartition>& parts);

// Re-derives on-entry observations from the induced partitions and checks
// that they induce the same partitions again.
PropertyReport CheckStab(const GameTree& game,
                         const ObservationAssignment& obs);

// Classical well-behavedness: within a block, each action leads into the
// owner's acting set uniformly.
PropertyReport CheckWbd(const GameTree& game,
                        const ClassicalPartition& classical);

// Observation-level overload (over induced blocks): two histories of one
// block that carry the same nonempty observation must agree on whether they
// were reached by an own action of the observer. This is the uniformity the
// stability analysis actually needs; the classical formula transplanted onto
// induced blocks is strictly stronger and fails on stably-thick domains.
PropertyReport CheckWbdObs(const GameTree& game,
                           const ObservationAssignment& obs);

// Perfect recall: the observations induced by the classical partition are
// consistent with it.
PropertyReport CheckPerfectRecall(const GameTree& game,
                                  const ClassicalPartition& classical);

// Constancy of f on each induced block intersected with H (and containment
// of that intersection in dom f). H defaults to all histories.
PropertyReport CanDeduce(const GameTree& game,
                         const ObservationAssignment& obs, Player i,
                         const Feature& f,
                         const std::optional<std::set<History>>& H =
                             std::nullopt);

// Histories where player i receives a (nonempty) observation; the scope at
// which deducibility of the own-observation feature is evaluated.
std::set<History> ObservedHistories(const GameTree& game,
                                    const ObservationAssignment& obs,
                                    Player i);

// Observation-based model validity: transition uniformity plus every player
// deducing his own observations, whether he acts, his available actions when
// acting, whether the game has ended, and his terminal utility.
PropertyReport CheckObservationModel(const GameTree& game,
                                     const ObservationAssignment& obs);

struct LemmaStabReport {
  bool tsip = false;
  bool stab = false;
  bool wbd_and_deduce = false;
  bool consistent = false;  // all three verdicts agree
  PropertyReport tsip_report, stab_report, wbd_report;
  std::string deduce_failure;
};

// Evaluates the three stability formulations through independent code paths.
LemmaStabReport VerifyLemmaStab(const GameTree& game,
                                const ObservationAssignment& obs);

struct ConjectureReport {
  bool pre_ok = false;       // the pair is an observation-based model
  bool aps_tsip_stab = false;
  bool iso_extension_equivalent = false;
  bool classical_game_ok = false;
  bool AllHold() const {
    return aps_tsip_stab && iso_extension_equivalent && classical_game_ok;
  }
  std::string detail;
};

// Items (i)-(iii) of the observation-based-model conjecture. Requires the
// model precondition; throws std::invalid_argument when it fails.
ConjectureReport VerifyConjecture(const GameTree& game,
                                  const ObservationAssignment& obs);

// Greedy instance shrinking: repeatedly deletes leaf subtrees while the
// predicate keeps holding. Best effort, not minimal.
using InstancePredicate =
    std::function<bool(const GameTree&, const ObservationAssignment&)>;
std::pair<GameTree, ObservationAssignment> MinimizeInstance(
    const GameTree& game, const ObservationAssignment& obs,
    const InstancePredicate& predicate);

}  // namespace gamecheck

#endif  // GAMECHECK_PROPERTIES_H_
