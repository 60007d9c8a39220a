#include "gamecheck/game_tree.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gamecheck {

std::string HistoryToString(const History& h) {
  std::string out;
  for (size_t k = 0; k < h.size(); ++k) {
    if (k > 0) out += ' ';
    out += h[k];
  }
  return out;
}

History HistoryFromString(const std::string& s) {
  History h;
  std::istringstream in(s);
  std::string label;
  while (in >> label) h.push_back(label);
  return h;
}

bool IsPrefix(const History& g, const History& h) {
  if (g.size() > h.size()) return false;
  return std::equal(g.begin(), g.end(), h.begin());
}

bool GameTree::IsTerminal(const History& h) const {
  return NodeAt(h).utilities.has_value();
}

std::optional<Player> GameTree::PlayerAt(const History& h) const {
  return NodeAt(h).player;
}

const std::vector<std::string>& GameTree::Actions(const History& h) const {
  return NodeAt(h).actions;
}

std::vector<History> GameTree::Children(const History& h) const {
  const Node& node = NodeAt(h);
  std::vector<History> out;
  out.reserve(node.actions.size());
  for (const std::string& a : node.actions) {
    History child = h;
    child.push_back(a);
    out.push_back(std::move(child));
  }
  return out;
}

const std::vector<double>& GameTree::Utilities(const History& h) const {
  const Node& node = NodeAt(h);
  if (!node.utilities) {
    throw std::out_of_range("utilities requested at non-terminal history '" +
                            HistoryToString(h) + "'");
  }
  return *node.utilities;
}

const std::map<std::string, double>& GameTree::ChanceDist(
    const History& h) const {
  const Node& node = NodeAt(h);
  if (node.player != kChancePlayer) {
    throw std::out_of_range("chance distribution requested at non-chance '" +
                            HistoryToString(h) + "'");
  }
  return node.chance;
}

std::optional<std::pair<History, std::string>> GameTree::Parent(
    const History& h) {
  if (h.empty()) return std::nullopt;
  History parent(h.begin(), h.end() - 1);
  return std::make_pair(std::move(parent), h.back());
}

std::vector<History> GameTree::ActingHistories(Player i) const {
  std::vector<History> out;
  for (const History& h : histories_) {
    const Node& node = nodes_.at(h);
    if (node.player && *node.player == i) out.push_back(h);
  }
  return out;
}

std::vector<History> GameTree::TerminalHistories() const {
  std::vector<History> out;
  for (const History& h : histories_) {
    if (nodes_.at(h).utilities) out.push_back(h);
  }
  return out;
}

const GameTree::Node& GameTree::NodeAt(const History& h) const {
  auto it = nodes_.find(h);
  if (it == nodes_.end()) {
    throw std::out_of_range("unknown history '" + HistoryToString(h) + "'");
  }
  return it->second;
}

bool GameTree::operator==(const GameTree& other) const {
  if (num_players_ != other.num_players_) return false;
  if (histories_ != other.histories_) return false;
  for (const History& h : histories_) {
    const Node& a = nodes_.at(h);
    const Node& b = other.nodes_.at(h);
    if (a.player != b.player || a.chance != b.chance ||
        a.utilities != b.utilities) {
      return false;
    }
  }
  return true;
}

RawGame GameTree::ToRaw() const {
  RawGame raw;
  raw.players = num_players_;
  for (const History& h : histories_) {
    const Node& node = nodes_.at(h);
    RawNode rn;
    rn.h = h;
    rn.player = node.player;
    rn.chance = node.chance;
    rn.utilities = node.utilities;
    raw.nodes.push_back(std::move(rn));
  }
  return raw;
}

namespace {

constexpr double kChanceTolerance = 1e-9;

bool ValidLabel(const std::string& label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

}  // namespace

TreeValidation ValidateTree(const RawGame& raw) {
  TreeValidation result;
  auto fail = [&result](const std::string& msg) {
    result.errors.push_back(msg);
  };

  if (raw.players < 1) fail("num_players must be at least 1");
  if (raw.nodes.empty()) fail("game has no nodes");

  std::map<History, const RawNode*> by_history;
  for (const RawNode& node : raw.nodes) {
    if (!by_history.emplace(node.h, &node).second) {
      fail("duplicate history '" + HistoryToString(node.h) + "'");
    }
    for (const std::string& label : node.h) {
      if (!ValidLabel(label)) {
        fail("history '" + HistoryToString(node.h) +
             "' contains an invalid action label");
        break;
      }
    }
  }

  // Prefix closure. Implies the root is present whenever the set is nonempty.
  for (const auto& [h, node] : by_history) {
    if (h.empty()) continue;
    History parent(h.begin(), h.end() - 1);
    if (!by_history.count(parent)) {
      fail("prefix not closed: '" + HistoryToString(parent) +
           "' missing for '" + HistoryToString(h) + "'");
    }
  }

  // Child action sets.
  std::map<History, std::vector<std::string>> children;
  for (const auto& [h, node] : by_history) {
    if (h.empty()) continue;
    History parent(h.begin(), h.end() - 1);
    children[parent].push_back(h.back());
  }
  for (auto& [h, actions] : children) std::sort(actions.begin(), actions.end());

  for (const auto& [h, node] : by_history) {
    const std::string name = HistoryToString(h);
    const bool has_children = children.count(h) > 0;
    if (has_children) {
      if (node->utilities) {
        fail("internal node '" + name + "' carries utilities");
      }
      if (!node->player) {
        fail("internal node '" + name + "' has no player");
      } else if (*node->player != kChancePlayer &&
                 (*node->player < 1 || *node->player > raw.players)) {
        fail("node '" + name + "' has out-of-range player");
      }
      if (node->player && *node->player == kChancePlayer) {
        const auto& kids = children.at(h);
        double sum = 0.0;
        for (const std::string& a : kids) {
          auto it = node->chance.find(a);
          if (it == node->chance.end()) {
            fail("chance node '" + name + "' missing probability for action '" +
                 a + "'");
            continue;
          }
          if (!(it->second > 0.0) || !std::isfinite(it->second)) {
            fail("chance node '" + name + "' has non-positive probability for '" +
                 a + "'");
          }
          sum += it->second;
        }
        for (const auto& [a, p] : node->chance) {
          if (!std::binary_search(kids.begin(), kids.end(), a)) {
            fail("chance node '" + name + "' lists probability for unknown action '" +
                 a + "'");
          }
        }
        if (std::abs(sum - 1.0) > kChanceTolerance) {
          fail("chance node '" + name + "' distribution does not sum to 1");
        }
      } else if (!node->chance.empty()) {
        fail("non-chance node '" + name + "' carries a chance distribution");
      }
    } else {
      if (!node->utilities) {
        fail("leaf '" + name + "' has no utilities");
      } else if (static_cast<int>(node->utilities->size()) != raw.players) {
        fail("leaf '" + name + "' has wrong utility count");
      } else {
        for (double u : *node->utilities) {
          if (!std::isfinite(u)) {
            fail("leaf '" + name + "' has non-finite utility");
            break;
          }
        }
      }
      if (node->player) fail("leaf '" + name + "' declares a player");
      if (!node->chance.empty()) {
        fail("leaf '" + name + "' carries a chance distribution");
      }
    }
  }

  if (!result.errors.empty()) {
    std::sort(result.errors.begin(), result.errors.end());
    return result;
  }

  GameTree tree;
  tree.num_players_ = raw.players;
  for (const auto& [h, node] : by_history) {
    GameTree::Node n;
    n.player = node->player;
    n.chance = node->chance;
    n.utilities = node->utilities;
    if (auto it = children.find(h); it != children.end()) n.actions = it->second;
    tree.nodes_.emplace(h, std::move(n));
    tree.histories_.push_back(h);
  }
  result.tree = std::move(tree);
  return result;
}

ClassicalPartition::ClassicalPartition(
    int num_players, std::vector<std::vector<std::set<History>>> blocks)
    : num_players_(num_players), blocks_(std::move(blocks)) {
  blocks_.resize(num_players_);
  for (auto& per_player : blocks_) {
    std::sort(per_player.begin(), per_player.end(),
              [](const std::set<History>& a, const std::set<History>& b) {
                return *a.begin() < *b.begin();
              });
  }
  index_.resize(num_players_);
  for (int p = 0; p < num_players_; ++p) {
    for (int b = 0; b < static_cast<int>(blocks_[p].size()); ++b) {
      for (const History& h : blocks_[p][b]) index_[p][h] = b;
    }
  }
}

const std::vector<std::set<History>>& ClassicalPartition::Blocks(
    Player i) const {
  return blocks_.at(i - 1);
}

std::optional<int> ClassicalPartition::BlockIndex(Player i,
                                                  const History& h) const {
  const auto& idx = index_.at(i - 1);
  auto it = idx.find(h);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::string ClassicalPartition::BlockLabel(Player i, int index) const {
  return HistoryToString(*blocks_.at(i - 1).at(index).begin());
}

bool ClassicalPartition::operator==(const ClassicalPartition& other) const {
  return num_players_ == other.num_players_ && blocks_ == other.blocks_;
}

PartitionValidation ValidateClassical(const GameTree& game,
                                      const RawClassical& raw) {
  PartitionValidation result;
  auto fail = [&result](const std::string& msg) {
    result.errors.push_back(msg);
  };

  std::vector<std::vector<std::set<History>>> blocks(game.num_players());
  for (const auto& [player, player_blocks] : raw) {
    if (player < 1 || player > game.num_players()) {
      fail("classical partition for out-of-range player " +
           std::to_string(player));
      continue;
    }
    std::set<History> seen;
    for (const auto& raw_block : player_blocks) {
      std::set<History> block(raw_block.begin(), raw_block.end());
      if (block.empty()) {
        fail("empty block for player " + std::to_string(player));
        continue;
      }
      const std::vector<std::string>* actions = nullptr;
      for (const History& h : block) {
        if (!game.Contains(h)) {
          fail("block references unknown history '" + HistoryToString(h) + "'");
          continue;
        }
        if (game.IsTerminal(h) || game.PlayerAt(h) != player) {
          fail("block of player " + std::to_string(player) +
               " contains history '" + HistoryToString(h) +
               "' where that player does not act");
          continue;
        }
        if (!seen.insert(h).second) {
          fail("blocks of player " + std::to_string(player) + " overlap at '" +
               HistoryToString(h) + "'");
        }
        if (!actions) {
          actions = &game.Actions(h);
        } else if (*actions != game.Actions(h)) {
          fail("block of player " + std::to_string(player) +
               " mixes different action sets (at '" + HistoryToString(h) +
               "')");
        }
      }
      blocks[player - 1].push_back(std::move(block));
    }
    for (const History& h : game.ActingHistories(player)) {
      if (!seen.count(h)) {
        fail("blocks of player " + std::to_string(player) + " do not cover '" +
             HistoryToString(h) + "'");
      }
    }
  }
  // Players absent from the raw map must not act anywhere.
  for (Player i = 1; i <= game.num_players(); ++i) {
    if (raw.count(i)) continue;
    if (!game.ActingHistories(i).empty()) {
      fail("no blocks given for player " + std::to_string(i));
    }
  }

  if (!result.errors.empty()) {
    std::sort(result.errors.begin(), result.errors.end());
    return result;
  }
  result.partition = ClassicalPartition(game.num_players(), std::move(blocks));
  return result;
}

ClassicalPartition SingletonClassical(const GameTree& game) {
  std::vector<std::vector<std::set<History>>> blocks(game.num_players());
  for (Player i = 1; i <= game.num_players(); ++i) {
    for (const History& h : game.ActingHistories(i)) {
      blocks[i - 1].push_back({h});
    }
  }
  return ClassicalPartition(game.num_players(), std::move(blocks));
}

}  // namespace gamecheck
