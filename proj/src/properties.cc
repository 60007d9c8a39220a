#include "gamecheck/properties.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace gamecheck {

namespace {

std::string CanonicalNumber(double v) {
  return nlohmann::json(v).dump();
}

std::string TokensToString(const std::vector<Token>& tokens) {
  std::string out;
  for (size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0) out += "|";
    out += tokens[k].ToString();
  }
  return out;
}

PropertyReport Holds(std::string property) {
  PropertyReport r;
  r.property = std::move(property);
  r.holds = true;
  return r;
}

PropertyReport Fails(std::string property, std::vector<History> witness,
                     std::string message,
                     std::vector<std::string> details = {}) {
  PropertyReport r;
  r.property = std::move(property);
  r.holds = false;
  r.witness = std::move(witness);
  r.message = std::move(message);
  r.witness_details = std::move(details);
  return r;
}

}  // namespace

Feature UtilityFeature(const GameTree& game, Player i) {
  return Feature{
      "utility_" + std::to_string(i),
      [&game](const History& h) { return game.IsTerminal(h); },
      [&game, i](const History& h) {
        return CanonicalNumber(game.Utilities(h).at(i - 1));
      }};
}

Feature PlayerFunctionFeature(const GameTree& game) {
  return Feature{"player_function",
                 [&game](const History& h) { return !game.IsTerminal(h); },
                 [&game](const History& h) {
                   return std::to_string(*game.PlayerAt(h));
                 }};
}

Feature IsMyTurnFeature(const GameTree& game, Player i) {
  return Feature{"is_my_turn_" + std::to_string(i),
                 [](const History&) { return true; },
                 [&game, i](const History& h) {
                   return !game.IsTerminal(h) && game.PlayerAt(h) == i ? "1"
                                                                       : "0";
                 }};
}

Feature AvailableActionsFeature(const GameTree& game) {
  return Feature{"available_actions",
                 [&game](const History& h) { return !game.IsTerminal(h); },
                 [&game](const History& h) {
                   std::string out;
                   for (const std::string& a : game.Actions(h)) {
                     if (!out.empty()) out += " ";
                     out += a;
                   }
                   return out;
                 }};
}

Feature IsTerminalFeature(const GameTree& game) {
  return Feature{"is_terminal", [](const History&) { return true; },
                 [&game](const History& h) {
                   return game.IsTerminal(h) ? "1" : "0";
                 }};
}

Feature OwnObservationFeature(const ObservationAssignment& obs, Player i) {
  return Feature{"own_observation_" + std::to_string(i),
                 [&obs, i](const History& h) {
                   return obs.ObservationAt(i, h) != nullptr;
                 },
                 [&obs, i](const History& h) {
                   return TokensToString(*obs.ObservationAt(i, h));
                 }};
}

Feature HistoryLengthFeature() {
  return Feature{"history_length", [](const History&) { return true; },
                 [](const History& h) { return std::to_string(h.size()); }};
}

PropertyReport CheckCons(const GameTree& game,
                         const ObservationAssignment& obs,
                         const ClassicalPartition& classical) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    InformationPartition induced = InducePartition(game, obs, i);
    for (const History& h : game.ActingHistories(i)) {
      const std::set<History>& induced_block =
          induced.partition.Block(*induced.partition.BlockIndexOf(h));
      const std::set<History>& classical_block =
          classical.Blocks(i).at(*classical.BlockIndex(i, h));
      // Restriction of the induced block to the acting set.
      std::set<History> restricted;
      for (const History& g : induced_block) {
        if (!game.IsTerminal(g) && game.PlayerAt(g) == i) restricted.insert(g);
      }
      if (restricted == classical_block) continue;
      // Find the first disagreeing partner.
      for (const History& g : classical_block) {
        if (!restricted.count(g)) {
          return Fails(
              "CONS", {h, g},
              "player " + std::to_string(i) + " separates '" +
                  HistoryToString(h) + "' from '" + HistoryToString(g) +
                  "', which share a classical information set",
              {ObsHistoryToString(ObsHistory(game, obs, i, h)),
               ObsHistoryToString(ObsHistory(game, obs, i, g))});
        }
      }
      for (const History& g : restricted) {
        if (!classical_block.count(g)) {
          return Fails(
              "CONS", {h, g},
              "player " + std::to_string(i) + " merges '" +
                  HistoryToString(h) + "' with '" + HistoryToString(g) +
                  "' across classical information sets",
              {ObsHistoryToString(ObsHistory(game, obs, i, h)),
               ObsHistoryToString(ObsHistory(game, obs, i, g))});
        }
      }
    }
  }
  return Holds("CONS");
}

PropertyReport CheckAps(const GameTree& game,
                        const ObservationAssignment& obs) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    InformationPartition induced = InducePartition(game, obs, i);
    for (const std::set<History>& block : induced.partition.blocks()) {
      const History* acting = nullptr;
      const History* idle = nullptr;
      for (const History& h : block) {
        const bool acts = !game.IsTerminal(h) && game.PlayerAt(h) == i;
        if (acts && !acting) acting = &h;
        if (!acts && !idle) idle = &h;
        if (acting && idle) {
          return Fails(
              "APS", {*acting, *idle},
              "player " + std::to_string(i) + " cannot tell the acting '" +
                  HistoryToString(*acting) + "' from the non-acting '" +
                  HistoryToString(*idle) + "'",
              {ObsHistoryToString(ObsHistory(game, obs, i, *acting))});
        }
      }
    }
  }
  return Holds("APS");
}

PropertyReport CheckIso(const GameTree& game,
                        const ObservationAssignment& obs) {
  for (const History& h : game.histories()) {
    auto parent = GameTree::Parent(h);
    if (!parent) continue;
    std::optional<Player> mover = game.PlayerAt(parent->first);
    if (!mover || *mover == kChancePlayer) continue;
    const std::vector<Token>* tokens = obs.ObservationAt(*mover, h);
    const Token expected = Token::Action(parent->second);
    const bool found =
        tokens && std::find(tokens->begin(), tokens->end(), expected) !=
                      tokens->end();
    if (!found) {
      return Fails("ISO", {parent->first, h},
                   "player " + std::to_string(*mover) +
                       " does not observe his own action '" + parent->second +
                       "' at '" + HistoryToString(h) + "'");
    }
  }
  return Holds("ISO");
}

namespace {

PropertyReport CheckTsipImpl(const std::vector<InformationPartition>& parts) {
  for (const InformationPartition& part : parts) {
    const Partition& p = part.partition;
    const std::string who = "player " + std::to_string(part.owner);
    // Antisymmetry of the extension order on distinct blocks.
    const int n = p.num_blocks();
    std::vector<std::vector<bool>> extends(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        for (const History& g : p.Block(a)) {
          for (const History& h : p.Block(b)) {
            if (IsPrefix(g, h)) {
              extends[a][b] = true;
              break;
            }
          }
          if (extends[a][b]) break;
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (extends[a][b] && extends[b][a]) {
          return Fails("TSIP",
                       {*p.Block(a).begin(), *p.Block(b).begin()},
                       who + ": blocks '" + p.BlockLabel(a) + "' and '" +
                           p.BlockLabel(b) +
                           "' each contain a prefix of the other");
        }
      }
    }
    // Unique parent block under the immediate-history-parent relation.
    std::optional<int> root_block = p.BlockIndexOf(History{});
    for (int b = 0; b < n; ++b) {
      if (root_block && b == *root_block) continue;
      std::map<int, History> parents;  // parent block -> entering history
      for (const History& h : p.Block(b)) {
        auto parent = GameTree::Parent(h);
        if (!parent) continue;
        std::optional<int> pb = p.BlockIndexOf(parent->first);
        if (pb && *pb != b) parents.emplace(*pb, h);
      }
      if (parents.size() > 1) {
        auto it = parents.begin();
        const History h1 = it->second;
        const History h2 = std::next(it)->second;
        return Fails("TSIP", {h1, h2},
                     who + ": block '" + p.BlockLabel(b) +
                         "' is entered from two distinct blocks, via '" +
                         HistoryToString(h1) + "' and '" + HistoryToString(h2) +
                         "'");
      }
    }
  }
  return Holds("TSIP");
}

}  // namespace

PropertyReport CheckTsip(const GameTree& game,
                         const ObservationAssignment& obs) {
  std::vector<InformationPartition> parts;
  for (Player i = 1; i <= game.num_players(); ++i) {
    parts.push_back(InducePartition(game, obs, i));
  }
  return CheckTsipPartitions(game, parts);
}

PropertyReport CheckTsipPartitions(
    const GameTree& game, const std::vector<InformationPartition>& parts) {
  (void)game;  // partitions already carry everything the tree order needs
  return CheckTsipImpl(parts);
}

PropertyReport CheckStab(const GameTree& game,
                         const ObservationAssignment& obs) {
  std::vector<InformationPartition> induced;
  std::vector<LabeledBlockSet> labeled;
  for (Player i = 1; i <= game.num_players(); ++i) {
    induced.push_back(InducePartition(game, obs, i));
    labeled.push_back(ToLabeledBlocks(induced.back().partition));
  }
  ObservationAssignment re_derived =
      ObsFromPartition(game, labeled, obs.variant());
  for (Player i = 1; i <= game.num_players(); ++i) {
    InformationPartition again = InducePartition(game, re_derived, i);
    if (again.partition == induced[i - 1].partition) continue;
    // A disagreement always shows up as a pair split apart or merged.
    for (const History& g : game.histories()) {
      for (const History& h : game.histories()) {
        if (!(g < h)) continue;
        const bool before = induced[i - 1].partition.BlockIndexOf(g) ==
                            induced[i - 1].partition.BlockIndexOf(h);
        const bool after =
            again.partition.BlockIndexOf(g) == again.partition.BlockIndexOf(h);
        if (before != after) {
          return Fails(
              "STAB", {g, h},
              "player " + std::to_string(i) + ": '" + HistoryToString(g) +
                  "' and '" + HistoryToString(h) +
                  (before ? "' are separated" : "' are merged") +
                  " by the re-derived observations",
              {ObsHistoryToString(ObsHistory(game, obs, i, g)),
               ObsHistoryToString(ObsHistory(game, obs, i, h))});
        }
      }
    }
  }
  return Holds("STAB");
}

PropertyReport CheckWbd(const GameTree& game,
                        const ClassicalPartition& classical) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    for (const std::set<History>& block : classical.Blocks(i)) {
      for (const std::string& a : game.Actions(*block.begin())) {
        const History* leads_in = nullptr;
        const History* leads_out = nullptr;
        for (const History& h : block) {
          History child = h;
          child.push_back(a);
          const bool into_own =
              !game.IsTerminal(child) && game.PlayerAt(child) == i;
          if (into_own && !leads_in) leads_in = &h;
          if (!into_own && !leads_out) leads_out = &h;
        }
        if (leads_in && leads_out) {
          return Fails(
              "WBD", {*leads_in, *leads_out},
              "player " + std::to_string(i) + ": action '" + a +
                  "' from the block of '" +
                  HistoryToString(*block.begin()) +
                  "' sometimes leads directly to that player's turn and "
                  "sometimes not");
        }
      }
    }
  }
  return Holds("WBD");
}

PropertyReport CheckWbdObs(const GameTree& game,
                           const ObservationAssignment& obs) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    InformationPartition induced = InducePartition(game, obs, i);
    for (const std::set<History>& block : induced.partition.blocks()) {
      // Group the block's members by their (nonempty) observation payload;
      // within a group, all must agree on whether the previous mover was i.
      std::map<std::vector<Token>, std::pair<const History*, const History*>>
          groups;  // payload -> (after own action, not after own action)
      for (const History& h : block) {
        auto parent = GameTree::Parent(h);
        if (!parent) continue;
        const std::vector<Token>* tokens = obs.ObservationAt(i, h);
        if (!tokens) continue;
        const bool after_own = game.PlayerAt(parent->first) == i;
        auto& slot = groups[*tokens];
        if (after_own && !slot.first) slot.first = &h;
        if (!after_own && !slot.second) slot.second = &h;
        if (slot.first && slot.second) {
          return Fails(
              "WBD", {*slot.first, *slot.second},
              "player " + std::to_string(i) + ": '" +
                  HistoryToString(*slot.first) + "' and '" +
                  HistoryToString(*slot.second) +
                  "' receive the same observation into one block, once "
                  "right after that player's own action and once not",
              {ObsHistoryToString(ObsHistory(game, obs, i, *slot.first)),
               ObsHistoryToString(ObsHistory(game, obs, i, *slot.second))});
        }
      }
    }
  }
  return Holds("WBD");
}

PropertyReport CheckPerfectRecall(const GameTree& game,
                                  const ClassicalPartition& classical) {
  std::vector<LabeledBlockSet> labeled;
  for (Player i = 1; i <= game.num_players(); ++i) {
    labeled.push_back(ToLabeledBlocks(classical.Blocks(i)));
  }
  ObservationAssignment classical_obs =
      ObsFromPartition(game, labeled, ObsVariant::kSet);
  PropertyReport cons = CheckCons(game, classical_obs, classical);
  PropertyReport out = cons;
  out.property = "PERFECT_RECALL";
  if (!cons.holds) {
    out.message = "classical observations are inconsistent: " + cons.message;
  }
  return out;
}

PropertyReport CanDeduce(const GameTree& game,
                         const ObservationAssignment& obs, Player i,
                         const Feature& f,
                         const std::optional<std::set<History>>& H) {
  InformationPartition induced = InducePartition(game, obs, i);
  auto in_scope = [&H](const History& h) { return !H || H->count(h) > 0; };
  for (const History& h : game.histories()) {
    if (!in_scope(h) || !f.domain(h)) continue;
    const std::string expected = f.value(h);
    const std::set<History>& block =
        induced.partition.Block(*induced.partition.BlockIndexOf(h));
    for (const History& g : block) {
      if (!in_scope(g)) continue;
      if (!f.domain(g)) {
        return Fails("DEDUCE(" + f.name + ")", {h, g},
                     "player " + std::to_string(i) + " cannot deduce " +
                         f.name + ": the block of '" + HistoryToString(h) +
                         "' reaches outside its domain at '" +
                         HistoryToString(g) + "'");
      }
      if (f.value(g) != expected) {
        return Fails("DEDUCE(" + f.name + ")", {h, g},
                     "player " + std::to_string(i) + " cannot deduce " +
                         f.name + ": '" + HistoryToString(h) + "' gives " +
                         expected + " but '" + HistoryToString(g) + "' gives " +
                         f.value(g));
      }
    }
  }
  return Holds("DEDUCE(" + f.name + ")");
}

std::set<History> ObservedHistories(const GameTree& game,
                                    const ObservationAssignment& obs,
                                    Player i) {
  std::set<History> out;
  for (const History& h : game.histories()) {
    if (obs.ObservationAt(i, h)) out.insert(h);
  }
  return out;
}

PropertyReport CheckObservationModel(const GameTree& game,
                                     const ObservationAssignment& obs) {
  PropertyReport wbd = CheckWbdObs(game, obs);
  if (!wbd.holds) {
    PropertyReport out = wbd;
    out.property = "OBS_MODEL";
    out.message = "transition uniformity fails: " + wbd.message;
    return out;
  }
  std::set<History> terminals;
  for (const History& z : game.TerminalHistories()) terminals.insert(z);
  for (Player i = 1; i <= game.num_players(); ++i) {
    std::set<History> acting;
    for (const History& h : game.ActingHistories(i)) acting.insert(h);
    // Own observations are a partial feature: deducibility is constancy over
    // the histories that carry one.
    const std::vector<std::pair<Feature, std::optional<std::set<History>>>>
        required = {
            {OwnObservationFeature(obs, i), ObservedHistories(game, obs, i)},
            {IsMyTurnFeature(game, i), std::nullopt},
            {AvailableActionsFeature(game), acting},
            {IsTerminalFeature(game), std::nullopt},
            {UtilityFeature(game, i), terminals},
        };
    for (const auto& [feature, scope] : required) {
      PropertyReport r = CanDeduce(game, obs, i, feature, scope);
      if (!r.holds) {
        PropertyReport out = r;
        out.property = "OBS_MODEL";
        return out;
      }
    }
  }
  return Holds("OBS_MODEL");
}

LemmaStabReport VerifyLemmaStab(const GameTree& game,
                                const ObservationAssignment& obs) {
  LemmaStabReport report;
  report.tsip_report = CheckTsip(game, obs);
  report.stab_report = CheckStab(game, obs);
  report.wbd_report = CheckWbdObs(game, obs);
  report.tsip = report.tsip_report.holds;
  report.stab = report.stab_report.holds;
  bool deduce = true;
  for (Player i = 1; i <= game.num_players() && deduce; ++i) {
    PropertyReport r = CanDeduce(game, obs, i, OwnObservationFeature(obs, i),
                                 ObservedHistories(game, obs, i));
    if (!r.holds) {
      deduce = false;
      report.deduce_failure = r.message;
    }
  }
  report.wbd_and_deduce = report.wbd_report.holds && deduce;
  report.consistent =
      report.tsip == report.stab && report.stab == report.wbd_and_deduce;
  return report;
}

ConjectureReport VerifyConjecture(const GameTree& game,
                                  const ObservationAssignment& obs) {
  ConjectureReport report;
  PropertyReport pre = CheckObservationModel(game, obs);
  report.pre_ok = pre.holds;
  if (!report.pre_ok) {
    throw std::invalid_argument(
        "verify_conjecture requires an observation-based model: " +
        pre.message);
  }

  PropertyReport aps = CheckAps(game, obs);
  PropertyReport tsip = CheckTsip(game, obs);
  PropertyReport stab = CheckStab(game, obs);
  report.aps_tsip_stab = aps.holds && tsip.holds && stab.holds;
  if (!report.aps_tsip_stab) {
    report.detail = !aps.holds ? aps.message
                               : (!tsip.holds ? tsip.message : stab.message);
  }

  ObservationAssignment extended =
      AddObservations(obs, IsoObs(game, obs.variant()));
  report.iso_extension_equivalent = true;
  for (Player i = 1; i <= game.num_players(); ++i) {
    if (!(InducePartition(game, extended, i).partition ==
          InducePartition(game, obs, i).partition)) {
      report.iso_extension_equivalent = false;
      report.detail += " adding immediate self-observation changes player " +
                       std::to_string(i) + "'s partition;";
      break;
    }
  }

  std::vector<InformationPartition> parts;
  for (Player i = 1; i <= game.num_players(); ++i) {
    parts.push_back(InducePartition(game, obs, i));
  }
  PartitionValidation restricted = RestrictAllToActing(parts, game);
  if (!restricted.ok()) {
    report.classical_game_ok = false;
    report.detail += " restriction to acting nodes is not a valid classical"
                     " partition;";
  } else {
    PropertyReport recall = CheckPerfectRecall(game, *restricted.partition);
    PropertyReport cons = CheckCons(game, obs, *restricted.partition);
    report.classical_game_ok = recall.holds && cons.holds;
    if (!report.classical_game_ok) {
      report.detail += !recall.holds ? (" " + recall.message)
                                     : (" " + cons.message);
    }
  }
  return report;
}

std::pair<GameTree, ObservationAssignment> MinimizeInstance(
    const GameTree& game, const ObservationAssignment& obs,
    const InstancePredicate& predicate) {
  GameTree current = game;
  ObservationAssignment current_obs = obs;
  bool progress = true;
  while (progress) {
    progress = false;
    // Deepest-first candidate subtree roots; a deletion must keep the parent
    // with at least one child.
    std::vector<History> candidates = current.histories();
    std::sort(candidates.begin(), candidates.end(),
              [](const History& a, const History& b) {
                if (a.size() != b.size()) return a.size() > b.size();
                return a < b;
              });
    for (const History& root : candidates) {
      if (root.empty()) continue;
      auto parent = GameTree::Parent(root);
      if (!current.Contains(root)) continue;
      if (current.Actions(parent->first).size() < 2) continue;

      RawGame raw = current.ToRaw();
      RawGame pruned;
      pruned.players = raw.players;
      for (RawNode& node : raw.nodes) {
        if (IsPrefix(root, node.h)) continue;
        if (node.h == parent->first && node.player == kChancePlayer) {
          node.chance.erase(root.back());
          double total = 0.0;
          for (const auto& [a, p] : node.chance) total += p;
          for (auto& [a, p] : node.chance) p /= total;
        }
        pruned.nodes.push_back(std::move(node));
      }
      TreeValidation validated = ValidateTree(pruned);
      if (!validated.ok()) continue;

      ObservationAssignment pruned_obs(current_obs.variant(),
                                       current_obs.num_players());
      for (Player i = 1; i <= current_obs.num_players(); ++i) {
        for (const auto& [h, tokens] : current_obs.PlayerObservations(i)) {
          if (!IsPrefix(root, h)) pruned_obs.SetObservation(i, h, tokens);
        }
      }
      if (predicate(*validated.tree, pruned_obs)) {
        current = std::move(*validated.tree);
        current_obs = std::move(pruned_obs);
        progress = true;
        break;
      }
    }
  }
  return {current, current_obs};
}

}  // namespace gamecheck
