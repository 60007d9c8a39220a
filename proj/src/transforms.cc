#include "gamecheck/transforms.h"

#include <algorithm>

#include "json.hpp"

#include "gamecheck/partitions.h"
#include "gamecheck/properties.h"

namespace gamecheck {

namespace {

// Splices a single-action chance node in place of `position`: the node takes
// the path `position`, the old subtree shifts below its `label` action.
History Remap(const History& h, const History& position,
              const std::string& label) {
  if (!IsPrefix(position, h)) return h;
  History out(h.begin(), h.begin() + position.size());
  out.push_back(label);
  out.insert(out.end(), h.begin() + position.size(), h.end());
  return out;
}

GameTree SpliceDummy(const GameTree& game, const History& position,
                     const std::string& label) {
  RawGame raw;
  raw.players = game.num_players();
  for (const History& h : game.histories()) {
    RawNode node;
    node.h = Remap(h, position, label);
    if (!game.IsTerminal(h)) {
      node.player = game.PlayerAt(h);
      if (node.player == kChancePlayer) node.chance = game.ChanceDist(h);
    } else {
      node.utilities = game.Utilities(h);
    }
    raw.nodes.push_back(std::move(node));
  }
  RawNode dummy;
  dummy.h = position;
  dummy.player = kChancePlayer;
  dummy.chance = {{label, 1.0}};
  raw.nodes.push_back(std::move(dummy));

  TreeValidation validated = ValidateTree(raw);
  if (!validated.ok()) {
    throw InternalError("dummy insertion produced an invalid tree at '" +
                        HistoryToString(position) + "'");
  }
  return std::move(*validated.tree);
}

ClassicalPartition RemapClassical(const ClassicalPartition& classical,
                                  const History& position,
                                  const std::string& label) {
  std::vector<std::vector<std::set<History>>> blocks(classical.num_players());
  for (Player i = 1; i <= classical.num_players(); ++i) {
    for (const std::set<History>& block : classical.Blocks(i)) {
      std::set<History> remapped;
      for (const History& h : block) remapped.insert(Remap(h, position, label));
      blocks[i - 1].push_back(std::move(remapped));
    }
  }
  return ClassicalPartition(classical.num_players(), std::move(blocks));
}

ObservationAssignment RemapObservations(const ObservationAssignment& obs,
                                        const History& position,
                                        const std::string& label) {
  ObservationAssignment out(obs.variant(), obs.num_players());
  for (Player i = 1; i <= obs.num_players(); ++i) {
    for (const auto& [h, tokens] : obs.PlayerObservations(i)) {
      out.SetObservation(i, Remap(h, position, label), tokens);
    }
  }
  return out;
}

void RemapEmbedding(std::map<History, History>& embedding,
                    const History& position, const std::string& label) {
  for (auto& [orig, image] : embedding) image = Remap(image, position, label);
}

std::map<History, History> IdentityEmbedding(const GameTree& game) {
  std::map<History, History> out;
  for (const History& h : game.histories()) out.emplace(h, h);
  return out;
}

}  // namespace

ModificationResult RepairWbd(const GameTree& game,
                             const ClassicalPartition& classical) {
  // Collect the branches that lead directly into the owner's acting set from
  // a mixed (block, action) pair.
  std::vector<History> splice_positions;
  for (Player i = 1; i <= game.num_players(); ++i) {
    for (const std::set<History>& block : classical.Blocks(i)) {
      for (const std::string& a : game.Actions(*block.begin())) {
        bool leads_in = false;
        bool leads_out = false;
        for (const History& h : block) {
          History child = h;
          child.push_back(a);
          const bool into_own =
              !game.IsTerminal(child) && game.PlayerAt(child) == i;
          (into_own ? leads_in : leads_out) = true;
        }
        if (!(leads_in && leads_out)) continue;
        for (const History& h : block) {
          History child = h;
          child.push_back(a);
          if (!game.IsTerminal(child) && game.PlayerAt(child) == i) {
            splice_positions.push_back(std::move(child));
          }
        }
      }
    }
  }
  std::sort(splice_positions.begin(), splice_positions.end());

  ModificationResult result{game, std::nullopt, classical,
                            IdentityEmbedding(game), 0};
  for (History position : splice_positions) {
    // Positions recorded earlier may have shifted by previous insertions.
    position = result.embedding.at(position);
    const std::string label = "noop#" + std::to_string(++result.added_nodes);
    result.game = SpliceDummy(result.game, position, label);
    result.classical = RemapClassical(*result.classical, position, label);
    RemapEmbedding(result.embedding, position, label);
  }

  if (!CheckWbd(result.game, *result.classical).holds) {
    throw InternalError("well-behavedness repair left a violation");
  }
  return result;
}

namespace {

struct ParentConflict {
  Player player = 0;
  History member;        // entry whose incoming payload gets split
  History other_member;  // entry from the longer predecessor class
  int split = 0;         // tokens that move to the inserted dummy
  bool memory_only = false;
};

// Finds the canonically first induced block entered from two distinct
// predecessor blocks and works out the dummy insertion that aligns the two
// entries, following the prefix structure of their observation histories.
std::optional<ParentConflict> FindConflict(const GameTree& game,
                                           const ObservationAssignment& obs) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    std::map<History, ObservationHistory> vec = AllObsHistories(game, obs, i);
    std::map<ObservationHistory, std::vector<History>> classes;
    for (const History& h : game.histories()) classes[vec.at(h)].push_back(h);

    std::vector<const ObservationHistory*> order;
    for (const auto& [oh, members] : classes) order.push_back(&oh);
    std::sort(order.begin(), order.end(),
              [&classes](const ObservationHistory* a,
                         const ObservationHistory* b) {
                return classes.at(*a).front() < classes.at(*b).front();
              });

    for (const ObservationHistory* oh : order) {
      std::vector<History> entries;
      for (const History& h : classes.at(*oh)) {
        auto parent = GameTree::Parent(h);
        if (parent && vec.at(parent->first) != *oh) entries.push_back(h);
      }
      std::sort(entries.begin(), entries.end());
      for (size_t k = 1; k < entries.size(); ++k) {
        const History& first = entries.front();
        const History& other = entries[k];
        const ObservationHistory& v1 =
            vec.at(GameTree::Parent(first)->first);
        const ObservationHistory& v2 =
            vec.at(GameTree::Parent(other)->first);
        if (v1 == v2) continue;
        const History& shorter = v1.size() < v2.size() ? first : other;
        const History& longer = v1.size() < v2.size() ? other : first;
        const ObservationHistory& vs = v1.size() < v2.size() ? v1 : v2;
        const ObservationHistory& vl = v1.size() < v2.size() ? v2 : v1;
        auto parent = GameTree::Parent(shorter);
        const bool has_memory = game.PlayerAt(parent->first) == i;
        const int split = static_cast<int>(vl.size()) -
                          static_cast<int>(vs.size()) - (has_memory ? 1 : 0);
        const std::vector<Token>* tokens = obs.ObservationAt(i, shorter);
        const int available = tokens ? static_cast<int>(tokens->size()) : 0;
        if (split < 0 || split > available ||
            (split == 0 && !has_memory)) {
          throw InternalError(
              "unique-parent conflict with non-prefix observation histories "
              "at '" +
              HistoryToString(shorter) + "'");
        }
        return ParentConflict{i, shorter, longer, split, split == 0};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

ModificationResult StableModification(const GameTree& game,
                                      const ObservationAssignment& obs) {
  if (obs.variant() != ObsVariant::kSeq) {
    throw std::invalid_argument(
        "stable modification targets the sequence variant; set-variant "
        "callers should repair well-behavedness instead");
  }

  ModificationResult result{game, obs, std::nullopt, IdentityEmbedding(game),
                            0};
  if (CheckStab(game, obs).holds) return result;

  int budget = 0;  // the lemma's worst-case block budget
  for (Player i = 1; i <= game.num_players(); ++i) {
    budget += InducePartition(game, obs, i).partition.num_blocks();
  }
  const int node_budget =
      static_cast<int>(game.histories().size()) * budget;
  const int iteration_cap =
      node_budget + static_cast<int>(game.histories().size()) + 64;

  for (int iteration = 0;; ++iteration) {
    if (iteration > iteration_cap) {
      throw InternalError("stable modification did not converge");
    }
    std::optional<ParentConflict> conflict =
        FindConflict(result.game, *result.observations);
    if (!conflict) break;

    const History position = conflict->member;
    const std::string label = "noop#" + std::to_string(++result.added_nodes);
    std::vector<Token> dummy_tokens;
    std::vector<Token> remainder;
    if (const std::vector<Token>* tokens =
            result.observations->ObservationAt(conflict->player, position)) {
      dummy_tokens.assign(tokens->begin(), tokens->begin() + conflict->split);
      remainder.assign(tokens->begin() + conflict->split, tokens->end());
    }

    result.game = SpliceDummy(result.game, position, label);
    ObservationAssignment remapped =
        RemapObservations(*result.observations, position, label);
    remapped.SetObservation(conflict->player, position, dummy_tokens);
    History shifted = position;
    shifted.push_back(label);
    remapped.SetObservation(conflict->player, shifted, remainder);
    result.observations = std::move(remapped);
    RemapEmbedding(result.embedding, position, label);
  }

  if (!CheckStab(result.game, *result.observations).holds) {
    throw InternalError("stable modification output is unstable");
  }
  if (static_cast<int>(result.game.histories().size()) >
      static_cast<int>(game.histories().size()) + node_budget) {
    throw InternalError("stable modification exceeded the size bound");
  }
  return result;
}

ModificationResult CoarseModel(const GameTree& game,
                               const ClassicalPartition& classical,
                               ObsVariant variant) {
  {
    PropertyReport recall = CheckPerfectRecall(game, classical);
    if (!recall.holds) {
      throw std::invalid_argument(
          "coarse model requires perfect recall: " + recall.message);
    }
  }

  ModificationResult result = RepairWbd(game, classical);

  if (variant == ObsVariant::kSeq) {
    // The flat token stream also needs terminal arrivals to be uniform per
    // (block, action): when one branch ends the game immediately, its
    // last-action and utility tokens fuse into a single observation while a
    // longer branch delivers them apart, destabilizing the partition. Insert
    // dummies above the directly-terminal branches of mixed pairs.
    std::vector<History> splice_positions;
    for (Player i = 1; i <= result.game.num_players(); ++i) {
      for (const std::set<History>& block : result.classical->Blocks(i)) {
        for (const std::string& a : result.game.Actions(*block.begin())) {
          bool direct_terminal = false;
          bool continuing = false;
          for (const History& h : block) {
            History child = h;
            child.push_back(a);
            (result.game.IsTerminal(child) ? direct_terminal : continuing) =
                true;
          }
          if (!(direct_terminal && continuing)) continue;
          for (const History& h : block) {
            History child = h;
            child.push_back(a);
            if (result.game.IsTerminal(child)) {
              splice_positions.push_back(std::move(child));
            }
          }
        }
      }
    }
    std::sort(splice_positions.begin(), splice_positions.end());
    for (size_t k = 0; k < splice_positions.size(); ++k) {
      const History& position = splice_positions[k];
      const std::string label =
          "noop#" + std::to_string(++result.added_nodes);
      result.game = SpliceDummy(result.game, position, label);
      result.classical = RemapClassical(*result.classical, position, label);
      RemapEmbedding(result.embedding, position, label);
      for (size_t j = k + 1; j < splice_positions.size(); ++j) {
        splice_positions[j] = Remap(splice_positions[j], position, label);
      }
    }
  }

  const GameTree& m = result.game;
  const ClassicalPartition& blocks = *result.classical;

  ObservationAssignment obs(variant, m.num_players());
  for (Player i = 1; i <= m.num_players(); ++i) {
    for (const History& h : m.histories()) {
      // Fixed intra-history order: last own action, information set,
      // available actions, terminal utility.
      std::vector<Token> tokens;
      if (auto parent = GameTree::Parent(h);
          parent && m.PlayerAt(parent->first) == i) {
        tokens.push_back(Token::Action(parent->second));
      }
      if (auto block = blocks.BlockIndex(i, h)) {
        tokens.push_back(Token::Infoset(blocks.BlockLabel(i, *block)));
        std::string actions;
        for (const std::string& a : m.Actions(h)) {
          if (!actions.empty()) actions += " ";
          actions += a;
        }
        tokens.push_back(Token::Feature("actions", actions));
      }
      if (m.IsTerminal(h)) {
        tokens.push_back(Token::Feature(
            "utility", nlohmann::json(m.Utilities(h).at(i - 1)).dump()));
      }
      if (!tokens.empty()) obs.SetObservation(i, h, std::move(tokens));
    }
  }
  result.observations = std::move(obs);
  return result;
}

}  // namespace gamecheck
