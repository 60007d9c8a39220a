#include "gamecheck/observations.h"

#include <algorithm>

namespace gamecheck {

Token Token::Symbol(std::string s) {
  return Token{TokenKind::kSymbol, std::move(s), ""};
}
Token Token::Action(std::string label) {
  return Token{TokenKind::kAction, std::move(label), ""};
}
Token Token::Infoset(std::string id) {
  return Token{TokenKind::kInfoset, std::move(id), ""};
}
Token Token::Feature(std::string name, std::string value) {
  return Token{TokenKind::kFeature, std::move(name), std::move(value)};
}

std::string Token::ToString() const {
  switch (kind) {
    case TokenKind::kSymbol:
      return "sym:" + name;
    case TokenKind::kAction:
      return "act:" + name;
    case TokenKind::kInfoset:
      return "iset:" + name;
    case TokenKind::kFeature:
      return "feat:" + name + "=" + value;
  }
  return "";
}

Token Token::FromString(const std::string& s) {
  auto starts = [&s](const char* prefix) {
    return s.rfind(prefix, 0) == 0;
  };
  if (starts("sym:")) return Symbol(s.substr(4));
  if (starts("act:")) return Action(s.substr(4));
  if (starts("iset:")) return Infoset(s.substr(5));
  if (starts("feat:")) {
    std::string rest = s.substr(5);
    size_t eq = rest.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("feature token without '=': '" + s + "'");
    }
    return Feature(rest.substr(0, eq), rest.substr(eq + 1));
  }
  throw std::invalid_argument("unknown token syntax: '" + s + "'");
}

ObservationAssignment::ObservationAssignment(ObsVariant variant,
                                             int num_players)
    : variant_(variant), num_players_(num_players), obs_(num_players) {}

const std::vector<Token>* ObservationAssignment::ObservationAt(
    Player i, const History& h) const {
  const auto& per_player = obs_.at(i - 1);
  auto it = per_player.find(h);
  if (it == per_player.end()) return nullptr;
  return &it->second;
}

void ObservationAssignment::SetObservation(Player i, const History& h,
                                           std::vector<Token> tokens) {
  if (variant_ == ObsVariant::kSet) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  }
  auto& per_player = obs_.at(i - 1);
  if (tokens.empty()) {
    per_player.erase(h);
  } else {
    per_player[h] = std::move(tokens);
  }
}

void ObservationAssignment::AppendObservation(Player i, const History& h,
                                              const std::vector<Token>& tokens) {
  if (tokens.empty()) return;
  std::vector<Token> combined;
  if (const std::vector<Token>* existing = ObservationAt(i, h)) {
    combined = *existing;
  }
  combined.insert(combined.end(), tokens.begin(), tokens.end());
  SetObservation(i, h, std::move(combined));
}

const std::map<History, std::vector<Token>>&
ObservationAssignment::PlayerObservations(Player i) const {
  return obs_.at(i - 1);
}

bool ObservationAssignment::operator==(
    const ObservationAssignment& other) const {
  return variant_ == other.variant_ && num_players_ == other.num_players_ &&
         obs_ == other.obs_;
}

ObservationAssignment AddObservations(const ObservationAssignment& o,
                                      const ObservationAssignment& o_prime) {
  if (o.variant() != o_prime.variant()) {
    throw std::invalid_argument("cannot add observations of mixed variants");
  }
  if (o.num_players() != o_prime.num_players()) {
    throw std::invalid_argument("cannot add observations of different games");
  }
  ObservationAssignment out = o;
  for (Player i = 1; i <= o.num_players(); ++i) {
    for (const auto& [h, tokens] : o_prime.PlayerObservations(i)) {
      out.AppendObservation(i, h, tokens);
    }
  }
  return out;
}

ObservationAssignment ClassicalObs(const GameTree& game,
                                   const ClassicalPartition& classical,
                                   bool with_turn_marker, ObsVariant variant) {
  ObservationAssignment out(variant, game.num_players());
  for (Player i = 1; i <= game.num_players(); ++i) {
    for (const History& h : game.histories()) {
      std::optional<int> block = classical.BlockIndex(i, h);
      if (block) {
        out.SetObservation(i, h,
                           {Token::Infoset(classical.BlockLabel(i, *block))});
      } else if (with_turn_marker) {
        out.SetObservation(i, h, {Token::Symbol("not_your_turn")});
      }
    }
  }
  return out;
}

ObservationAssignment IsoObs(const GameTree& game, ObsVariant variant) {
  ObservationAssignment out(variant, game.num_players());
  for (const History& h : game.histories()) {
    auto parent = GameTree::Parent(h);
    if (!parent) continue;
    std::optional<Player> mover = game.PlayerAt(parent->first);
    if (mover && *mover != kChancePlayer) {
      out.SetObservation(*mover, h, {Token::Action(parent->second)});
    }
  }
  return out;
}

ObservationAssignment ObsFromPartition(
    const GameTree& game, const std::vector<LabeledBlockSet>& per_player,
    ObsVariant variant) {
  ObservationAssignment out(variant, game.num_players());
  for (Player i = 1; i <= game.num_players(); ++i) {
    if (i - 1 >= static_cast<int>(per_player.size())) break;
    const LabeledBlockSet& set = per_player[i - 1];
    std::map<History, int> index;
    for (int b = 0; b < static_cast<int>(set.blocks.size()); ++b) {
      for (const History& h : set.blocks[b]) {
        if (!index.emplace(h, b).second) {
          throw std::invalid_argument("overlapping blocks at '" +
                                      HistoryToString(h) + "'");
        }
      }
    }
    for (const auto& [h, block] : index) {
      // Longest covered proper prefix; emit on entry into a new block.
      std::optional<int> prev;
      History prefix = h;
      while (!prefix.empty()) {
        prefix.pop_back();
        auto it = index.find(prefix);
        if (it != index.end()) {
          prev = it->second;
          break;
        }
      }
      if (!prev || *prev != block) {
        out.SetObservation(
            i, h,
            {Token::Infoset(HistoryToString(*set.blocks[block].begin()))});
      }
    }
  }
  return out;
}

ObsEntry ObsEntry::ActionMemory(std::string a) {
  ObsEntry e;
  e.kind = Kind::kActionMemory;
  e.action = std::move(a);
  return e;
}

ObsEntry ObsEntry::TokenSet(std::vector<Token> set) {
  ObsEntry e;
  e.kind = Kind::kTokenSet;
  e.tokens = std::move(set);
  return e;
}

ObsEntry ObsEntry::SingleToken(Token t) {
  ObsEntry e;
  e.kind = Kind::kToken;
  e.tokens.push_back(std::move(t));
  return e;
}

std::string ObsEntry::ToString() const {
  switch (kind) {
    case Kind::kActionMemory:
      return "<" + action + ">";
    case Kind::kToken:
      return tokens.front().ToString();
    case Kind::kTokenSet: {
      std::string out = "{";
      for (size_t k = 0; k < tokens.size(); ++k) {
        if (k > 0) out += ", ";
        out += tokens[k].ToString();
      }
      return out + "}";
    }
  }
  return "";
}

std::string ObsHistoryToString(const ObservationHistory& oh) {
  std::string out = "(";
  for (size_t k = 0; k < oh.size(); ++k) {
    if (k > 0) out += " ";
    out += oh[k].ToString();
  }
  return out + ")";
}

namespace {

void AppendPayload(ObservationHistory& oh, const std::vector<Token>* tokens,
                   ObsVariant variant) {
  if (!tokens || tokens->empty()) return;
  if (variant == ObsVariant::kSet) {
    oh.push_back(ObsEntry::TokenSet(*tokens));
  } else {
    for (const Token& t : *tokens) oh.push_back(ObsEntry::SingleToken(t));
  }
}

}  // namespace

std::map<History, ObservationHistory> AllObsHistories(
    const GameTree& game, const ObservationAssignment& obs, Player i) {
  std::map<History, ObservationHistory> out;
  // Canonical order is parent-first, so a single sweep suffices.
  for (const History& h : game.histories()) {
    ObservationHistory oh;
    auto parent = GameTree::Parent(h);
    if (parent) {
      oh = out.at(parent->first);
      std::optional<Player> mover = game.PlayerAt(parent->first);
      if (mover && *mover == i) {
        oh.push_back(ObsEntry::ActionMemory(parent->second));
      }
    }
    AppendPayload(oh, obs.ObservationAt(i, h), obs.variant());
    out.emplace(h, std::move(oh));
  }
  return out;
}

ObservationHistory ObsHistory(const GameTree& game,
                              const ObservationAssignment& obs, Player i,
                              const History& h) {
  if (i < 1 || i > game.num_players()) {
    throw std::invalid_argument("observation history of a non-player");
  }
  if (!game.Contains(h)) {
    throw std::out_of_range("unknown history '" + HistoryToString(h) + "'");
  }
  ObservationHistory oh;
  if (auto parent = GameTree::Parent(h)) {
    oh = ObsHistory(game, obs, i, parent->first);
    std::optional<Player> mover = game.PlayerAt(parent->first);
    if (mover && *mover == i) {
      oh.push_back(ObsEntry::ActionMemory(parent->second));
    }
  }
  AppendPayload(oh, obs.ObservationAt(i, h), obs.variant());
  return oh;
}

}  // namespace gamecheck
