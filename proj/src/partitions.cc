#include "gamecheck/partitions.h"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace gamecheck {

Partition::Partition(std::vector<std::set<History>> blocks)
    : blocks_(std::move(blocks)) {
  blocks_.erase(std::remove_if(blocks_.begin(), blocks_.end(),
                               [](const std::set<History>& b) {
                                 return b.empty();
                               }),
                blocks_.end());
  std::sort(blocks_.begin(), blocks_.end(),
            [](const std::set<History>& a, const std::set<History>& b) {
              return *a.begin() < *b.begin();
            });
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) {
    for (const History& h : blocks_[b]) {
      if (!index_.emplace(h, b).second) {
        throw std::invalid_argument("partition blocks overlap at '" +
                                    HistoryToString(h) + "'");
      }
    }
  }
}

std::optional<int> Partition::BlockIndexOf(const History& h) const {
  auto it = index_.find(h);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Partition::BlockLabel(int index) const {
  return HistoryToString(*blocks_.at(index).begin());
}

std::vector<History> Partition::CoveredHistories() const {
  std::vector<History> out;
  for (const auto& [h, b] : index_) out.push_back(h);
  return out;
}

InformationPartition InducePartition(const GameTree& game,
                                     const ObservationAssignment& obs,
                                     Player i) {
  std::map<ObservationHistory, std::set<History>> groups;
  for (const auto& [h, oh] : AllObsHistories(game, obs, i)) {
    groups[oh].insert(h);
  }
  std::vector<std::set<History>> blocks;
  blocks.reserve(groups.size());
  for (auto& [oh, members] : groups) blocks.push_back(std::move(members));
  return InformationPartition{i, Partition(std::move(blocks))};
}

InformationPartition MemorylessInduce(const GameTree& game,
                                      const ObservationAssignment& obs,
                                      Player i) {
  std::map<std::vector<Token>, std::set<History>> groups;
  for (const History& h : game.histories()) {
    const std::vector<Token>* tokens = obs.ObservationAt(i, h);
    groups[tokens ? *tokens : std::vector<Token>{}].insert(h);
  }
  std::vector<std::set<History>> blocks;
  for (auto& [key, members] : groups) blocks.push_back(std::move(members));
  return InformationPartition{i, Partition(std::move(blocks))};
}

namespace {

// Every block of p lies inside some block of q.
bool RefinesImpl(const Partition& p, const Partition& q) {
  for (const std::set<History>& block : p.blocks()) {
    std::optional<int> target = q.BlockIndexOf(*block.begin());
    if (!target) return false;
    const std::set<History>& coarse = q.Block(*target);
    for (const History& h : block) {
      if (!coarse.count(h)) return false;
    }
  }
  return true;
}

}  // namespace

PartitionOrder ComparePartitions(const Partition& p, const Partition& q) {
  const bool pq = RefinesImpl(p, q);
  const bool qp = RefinesImpl(q, p);
  if (pq && qp) return PartitionOrder::kEqual;
  if (pq) return PartitionOrder::kRefines;
  if (qp) return PartitionOrder::kCoarsens;
  return PartitionOrder::kIncomparable;
}

RestrictionResult RestrictToActing(const InformationPartition& p,
                                   const GameTree& game) {
  RestrictionResult result;
  for (const std::set<History>& block : p.partition.blocks()) {
    std::set<History> restricted;
    for (const History& h : block) {
      if (!game.IsTerminal(h) && game.PlayerAt(h) == p.owner) {
        restricted.insert(h);
      }
    }
    if (restricted.empty()) continue;
    const std::vector<std::string>& actions =
        game.Actions(*restricted.begin());
    for (const History& h : restricted) {
      if (game.Actions(h) != actions) {
        result.errors.push_back(
            "restricted block mixes action sets at '" + HistoryToString(h) +
            "' vs '" + HistoryToString(*restricted.begin()) + "'");
      }
    }
    result.blocks.push_back(std::move(restricted));
  }
  std::sort(result.errors.begin(), result.errors.end());
  return result;
}

PartitionValidation RestrictAllToActing(
    const std::vector<InformationPartition>& parts, const GameTree& game) {
  RawClassical raw;
  PartitionValidation out;
  for (const InformationPartition& p : parts) {
    RestrictionResult r = RestrictToActing(p, game);
    if (!r.ok()) {
      out.errors.insert(out.errors.end(), r.errors.begin(), r.errors.end());
      continue;
    }
    auto& blocks = raw[p.owner];
    for (const std::set<History>& b : r.blocks) {
      blocks.emplace_back(b.begin(), b.end());
    }
  }
  if (!out.errors.empty()) return out;
  return ValidateClassical(game, raw);
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(int a, int b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

PublicPartition PublicStates(const GameTree& game,
                             const std::vector<InformationPartition>& parts) {
  const std::vector<History>& histories = game.histories();
  std::map<History, int> id;
  for (int k = 0; k < static_cast<int>(histories.size()); ++k) {
    id[histories[k]] = k;
  }
  UnionFind uf(static_cast<int>(histories.size()));
  for (const InformationPartition& p : parts) {
    for (const std::set<History>& block : p.partition.blocks()) {
      auto it = block.begin();
      int first = id.at(*it);
      for (++it; it != block.end(); ++it) uf.Union(first, id.at(*it));
    }
  }
  std::map<int, std::set<History>> groups;
  for (const History& h : histories) groups[uf.Find(id.at(h))].insert(h);
  std::vector<std::set<History>> blocks;
  for (auto& [root, members] : groups) blocks.push_back(std::move(members));
  return Partition(std::move(blocks));
}

LabeledBlockSet ToLabeledBlocks(const Partition& p) {
  return LabeledBlockSet{p.blocks()};
}

LabeledBlockSet ToLabeledBlocks(const std::vector<std::set<History>>& blocks) {
  return LabeledBlockSet{blocks};
}

namespace {

// Search state for the stable-partition enumeration. Histories are processed
// parent-first; each assignment step checks the fixpoint invariant exactly:
// two processed histories share a block iff they share an observation
// history under the partition's own on-entry labeling. Violations on a
// processed prefix can never be repaired later, so pruning is exact.
struct EnumerationState {
  const GameTree* game = nullptr;
  Player player = 0;
  std::vector<History> order;
  std::vector<int> parent_index;         // index into `order`, -1 for root
  std::vector<bool> parent_is_acting;    // owner acted at the parent
  std::vector<std::string> parent_action;
  std::vector<int> acting_block;         // forced classical block id or -1

  // Per-history observation histories encoded as integer sequences:
  // memories are 2*action_id, block labels 2*block+1.
  std::vector<std::vector<int64_t>> vec;
  std::vector<int> assignment;                    // history -> block
  std::vector<int> classical_to_block;            // classical id -> block id
  std::vector<int> block_kind;                    // -1 free, else classical id
  std::map<std::vector<int64_t>, int> vec_to_block;
  std::vector<std::vector<int64_t>> block_vec;
  std::map<std::string, int64_t> action_ids;

  std::vector<std::vector<int>> results;  // complete assignments

  int64_t ActionId(const std::string& a) {
    auto [it, inserted] = action_ids.emplace(
        a, static_cast<int64_t>(action_ids.size()));
    return it->second;
  }
};

void EnumerateRec(EnumerationState& st, int t) {
  if (t == static_cast<int>(st.order.size())) {
    st.results.push_back(st.assignment);
    return;
  }

  const int parent = st.parent_index[t];
  auto try_block = [&st, t, parent](int block, bool fresh) {
    // Observation history of order[t] given its block: extend the parent's,
    // append the own-action memory when leaving an acting node, then the
    // block label on entry into a new block.
    std::vector<int64_t> v;
    if (parent >= 0) v = st.vec[parent];
    if (st.parent_is_acting[t]) {
      v.push_back(2 * st.ActionId(st.parent_action[t]));
    }
    const int parent_block = parent >= 0 ? st.assignment[parent] : -1;
    if (block != parent_block) v.push_back(2 * block + 1);

    auto seen = st.vec_to_block.find(v);
    if (fresh) {
      if (seen != st.vec_to_block.end()) return;  // fresh block, stale vec
    } else {
      const bool block_has_vec = !st.block_vec[block].empty() ||
                                 seen != st.vec_to_block.end();
      if (seen != st.vec_to_block.end()) {
        if (seen->second != block) return;  // vec already owned elsewhere
      } else if (block_has_vec && st.block_vec[block] != v) {
        return;  // block already pinned to a different vec
      }
    }

    const bool new_vec = seen == st.vec_to_block.end();
    if (new_vec) st.vec_to_block.emplace(v, block);
    std::vector<int64_t> saved_block_vec;
    const bool pin = st.block_vec[block].empty();
    if (pin) st.block_vec[block] = v;
    st.vec[t] = v;
    st.assignment[t] = block;

    EnumerateRec(st, t + 1);

    st.assignment[t] = -1;
    if (pin) st.block_vec[block].clear();
    if (new_vec) st.vec_to_block.erase(v);
  };

  const int forced_classical = st.acting_block[t];
  if (forced_classical >= 0) {
    int block = st.classical_to_block[forced_classical];
    if (block < 0) {
      // First member of this classical block: open it as a new block.
      block = static_cast<int>(st.block_kind.size());
      st.block_kind.push_back(forced_classical);
      st.block_vec.emplace_back();
      st.classical_to_block[forced_classical] = block;
      try_block(block, /*fresh=*/true);
      st.classical_to_block[forced_classical] = -1;
      st.block_kind.pop_back();
      st.block_vec.pop_back();
    } else {
      try_block(block, /*fresh=*/false);
    }
    return;
  }

  // Non-acting histories may join any existing free block or open a new one.
  for (int block = 0; block < static_cast<int>(st.block_kind.size()); ++block) {
    if (st.block_kind[block] != -1) continue;
    try_block(block, /*fresh=*/false);
  }
  const int fresh = static_cast<int>(st.block_kind.size());
  st.block_kind.push_back(-1);
  st.block_vec.emplace_back();
  try_block(fresh, /*fresh=*/true);
  st.block_kind.pop_back();
  st.block_vec.pop_back();
}

}  // namespace

std::vector<InformationPartition> EnumerateStablePartitions(
    const GameTree& game, const ClassicalPartition& classical, Player i,
    int node_limit) {
  const std::vector<History>& histories = game.histories();
  if (static_cast<int>(histories.size()) > node_limit) {
    throw std::invalid_argument(
        "tree exceeds the enumeration node limit (" +
        std::to_string(histories.size()) + " > " + std::to_string(node_limit) +
        ")");
  }

  EnumerationState st;
  st.game = &game;
  st.player = i;
  st.order = histories;
  std::map<History, int> pos;
  for (int k = 0; k < static_cast<int>(histories.size()); ++k) {
    pos[histories[k]] = k;
  }
  const int n = static_cast<int>(histories.size());
  st.parent_index.assign(n, -1);
  st.parent_is_acting.assign(n, false);
  st.parent_action.assign(n, "");
  st.acting_block.assign(n, -1);
  st.vec.assign(n, {});
  st.assignment.assign(n, -1);
  st.classical_to_block.assign(
      static_cast<int>(classical.Blocks(i).size()), -1);
  for (int k = 0; k < n; ++k) {
    const History& h = histories[k];
    if (auto parent = GameTree::Parent(h)) {
      st.parent_index[k] = pos.at(parent->first);
      st.parent_is_acting[k] = game.PlayerAt(parent->first) == i;
      st.parent_action[k] = parent->second;
    }
    if (auto block = classical.BlockIndex(i, h)) st.acting_block[k] = *block;
  }

  EnumerateRec(st, 0);

  std::vector<InformationPartition> out;
  out.reserve(st.results.size());
  for (const std::vector<int>& assignment : st.results) {
    std::map<int, std::set<History>> groups;
    for (int k = 0; k < n; ++k) groups[assignment[k]].insert(histories[k]);
    std::vector<std::set<History>> blocks;
    for (auto& [b, members] : groups) blocks.push_back(std::move(members));
    out.push_back(InformationPartition{i, Partition(std::move(blocks))});
  }
  std::sort(out.begin(), out.end(),
            [](const InformationPartition& a, const InformationPartition& b) {
              return a.partition < b.partition;
            });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<InformationPartition> EnumerateMaxRefinements(
    const GameTree& game, const ClassicalPartition& classical, Player i,
    int node_limit) {
  std::vector<InformationPartition> all =
      EnumerateStablePartitions(game, classical, i, node_limit);
  std::vector<InformationPartition> out;
  for (const InformationPartition& p : all) {
    bool maximal = true;
    for (const InformationPartition& q : all) {
      if (q == p) continue;
      if (ComparePartitions(q.partition, p.partition) ==
          PartitionOrder::kRefines) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(p);
  }
  return out;
}

}  // namespace gamecheck
