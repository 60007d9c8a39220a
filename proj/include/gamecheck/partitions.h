// Information partitions induced by observation histories, refinement
// comparison, public-state closure, and exhaustive enumeration of maximal
// consistent + stable refinements on small games.
#ifndef GAMECHECK_PARTITIONS_H_
#define GAMECHECK_PARTITIONS_H_

#include <set>
#include <vector>

#include "gamecheck/game_tree.h"
#include "gamecheck/observations.h"

namespace gamecheck {

// Disjoint nonempty blocks covering a history set. Canonical form: blocks
// ordered by least member, so labels and rendering are stable.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::set<History>> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::set<History>>& blocks() const { return blocks_; }
  const std::set<History>& Block(int index) const { return blocks_.at(index); }
  std::optional<int> BlockIndexOf(const History& h) const;
  std::string BlockLabel(int index) const;
  bool Covers(const History& h) const { return BlockIndexOf(h).has_value(); }
  std::vector<History> CoveredHistories() const;

  bool operator==(const Partition& other) const {
    return blocks_ == other.blocks_;
  }
  bool operator<(const Partition& other) const {
    return blocks_ < other.blocks_;
  }

 private:
  std::vector<std::set<History>> blocks_;
  std::map<History, int> index_;
};

struct InformationPartition {
  Player owner = 0;
  Partition partition;

  bool operator==(const InformationPartition& other) const = default;
};

using PublicPartition = Partition;

// Groups all histories (terminals included) by equality of vec O_i.
InformationPartition InducePartition(const GameTree& game,
                                     const ObservationAssignment& obs,
                                     Player i);

// The no-recall model: groups all histories by equality of the single
// current observation.
InformationPartition MemorylessInduce(const GameTree& game,
                                      const ObservationAssignment& obs,
                                      Player i);

enum class PartitionOrder { kEqual, kRefines, kCoarsens, kIncomparable };

// kRefines means p is finer: every block of p lies inside a block of q.
PartitionOrder ComparePartitions(const Partition& p, const Partition& q);

// Blocks intersected with the owner's acting histories, empties dropped.
// Fails (with all offenders reported) when a restricted block mixes action
// sets, which signals input incompatible with consistency.
struct RestrictionResult {
  std::vector<std::set<History>> blocks;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};
RestrictionResult RestrictToActing(const InformationPartition& p,
                                   const GameTree& game);

// All players at once; result validated as a classical partition.
PartitionValidation RestrictAllToActing(
    const std::vector<InformationPartition>& parts, const GameTree& game);

// Finest partition coarser than every player's partition: transitive closure
// of "share a block for some player", via union-find with path compression.
PublicPartition PublicStates(const GameTree& game,
                             const std::vector<InformationPartition>& parts);

LabeledBlockSet ToLabeledBlocks(const Partition& p);
LabeledBlockSet ToLabeledBlocks(const std::vector<std::set<History>>& blocks);

// All partitions of the full history set for player i that restrict to the
// classical partition on the acting nodes (consistency), never mix acting
// and non-acting histories (acting-player separation), and are stable, i.e.
// re-deriving on-entry observations from the partition re-induces it.
// Exhaustive and deduplicated; throws when the tree exceeds node_limit.
std::vector<InformationPartition> EnumerateStablePartitions(
    const GameTree& game, const ClassicalPartition& classical, Player i,
    int node_limit = 14);

// The refinement-maximal elements among the above, in canonical order.
std::vector<InformationPartition> EnumerateMaxRefinements(
    const GameTree& game, const ClassicalPartition& classical, Player i,
    int node_limit = 14);

}  // namespace gamecheck

#endif  // GAMECHECK_PARTITIONS_H_
