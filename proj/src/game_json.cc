#include "gamecheck/game_json.h"

#include <algorithm>

#include "json.hpp"

namespace gamecheck {

using nlohmann::json;

namespace {

bool CheckKeys(const json& object, const std::set<std::string>& allowed,
               const std::string& where, std::vector<std::string>& errors) {
  bool ok = true;
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (!allowed.count(it.key())) {
      errors.push_back("unknown key '" + it.key() + "' in " + where);
      ok = false;
    }
  }
  return ok;
}

std::optional<Player> ParsePlayerKey(const std::string& key, int num_players,
                                     const std::string& where,
                                     std::vector<std::string>& errors) {
  if (key == "c") return kChancePlayer;
  try {
    size_t used = 0;
    int value = std::stoi(key, &used);
    if (used == key.size() && value >= 1 && value <= num_players) return value;
  } catch (const std::exception&) {
  }
  errors.push_back("invalid player '" + key + "' in " + where);
  return std::nullopt;
}

}  // namespace

GameFileResult ParseGameFile(const std::string& text) {
  GameFileResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("JSON parse error: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back("top level must be an object");
    return result;
  }
  CheckKeys(doc, {"players", "nodes", "classical_infosets", "observations"},
            "top level", result.errors);
  if (!doc.contains("players") || !doc["players"].is_number_integer()) {
    result.errors.push_back("missing or non-integer 'players'");
    return result;
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    result.errors.push_back("missing or non-array 'nodes'");
    return result;
  }

  RawGame raw;
  raw.players = doc["players"].get<int>();
  for (const json& node : doc["nodes"]) {
    if (!node.is_object()) {
      result.errors.push_back("node entries must be objects");
      continue;
    }
    CheckKeys(node, {"h", "player", "chance", "utilities"}, "node",
              result.errors);
    RawNode rn;
    if (!node.contains("h") || !node["h"].is_string()) {
      result.errors.push_back("node without string 'h'");
      continue;
    }
    rn.h = HistoryFromString(node["h"].get<std::string>());
    if (node.contains("player")) {
      if (!node["player"].is_string()) {
        result.errors.push_back("node 'player' must be a string");
        continue;
      }
      rn.player = ParsePlayerKey(node["player"].get<std::string>(),
                                 raw.players, "node player", result.errors);
    }
    if (node.contains("chance")) {
      if (!node["chance"].is_object()) {
        result.errors.push_back("node 'chance' must be an object");
        continue;
      }
      for (auto it = node["chance"].begin(); it != node["chance"].end(); ++it) {
        if (!it.value().is_number()) {
          result.errors.push_back("chance probability must be a number");
          continue;
        }
        rn.chance.emplace(it.key(), it.value().get<double>());
      }
    }
    if (node.contains("utilities")) {
      if (!node["utilities"].is_array()) {
        result.errors.push_back("node 'utilities' must be an array");
        continue;
      }
      std::vector<double> utilities;
      for (const json& u : node["utilities"]) {
        if (!u.is_number()) {
          result.errors.push_back("utilities must be numbers");
          break;
        }
        utilities.push_back(u.get<double>());
      }
      rn.utilities = std::move(utilities);
    }
    raw.nodes.push_back(std::move(rn));
  }
  if (!result.errors.empty()) return result;

  TreeValidation tree = ValidateTree(raw);
  if (!tree.ok()) {
    result.errors = tree.errors;
    return result;
  }

  ParsedGameFile file{std::move(*tree.tree), std::nullopt, std::nullopt};

  if (doc.contains("classical_infosets")) {
    const json& infosets = doc["classical_infosets"];
    if (!infosets.is_object()) {
      result.errors.push_back("'classical_infosets' must be an object");
      return result;
    }
    RawClassical raw_classical;
    for (auto it = infosets.begin(); it != infosets.end(); ++it) {
      std::optional<Player> player = ParsePlayerKey(
          it.key(), raw.players, "classical_infosets", result.errors);
      if (!player || *player == kChancePlayer) {
        result.errors.push_back("classical_infosets keys must be players");
        continue;
      }
      if (!it.value().is_array()) {
        result.errors.push_back("classical blocks must be arrays");
        continue;
      }
      for (const json& block : it.value()) {
        std::vector<History> histories;
        if (!block.is_array()) {
          result.errors.push_back("classical blocks must be arrays");
          continue;
        }
        for (const json& h : block) {
          if (!h.is_string()) {
            result.errors.push_back("classical block members must be strings");
            continue;
          }
          histories.push_back(HistoryFromString(h.get<std::string>()));
        }
        raw_classical[*player].push_back(std::move(histories));
      }
    }
    if (!result.errors.empty()) return result;
    PartitionValidation classical = ValidateClassical(file.game, raw_classical);
    if (!classical.ok()) {
      result.errors = classical.errors;
      return result;
    }
    file.classical = std::move(*classical.partition);
  }

  if (doc.contains("observations")) {
    const json& obs_doc = doc["observations"];
    if (!obs_doc.is_object() || !obs_doc.contains("variant") ||
        !obs_doc["variant"].is_string()) {
      result.errors.push_back("'observations' must carry a 'variant'");
      return result;
    }
    const std::string variant_name = obs_doc["variant"].get<std::string>();
    if (variant_name != "set" && variant_name != "seq") {
      result.errors.push_back("observation variant must be 'set' or 'seq'");
      return result;
    }
    ObservationAssignment obs(
        variant_name == "set" ? ObsVariant::kSet : ObsVariant::kSeq,
        raw.players);
    for (auto it = obs_doc.begin(); it != obs_doc.end(); ++it) {
      if (it.key() == "variant") continue;
      std::optional<Player> player = ParsePlayerKey(
          it.key(), raw.players, "observations", result.errors);
      if (!player || *player == kChancePlayer) {
        result.errors.push_back("observation keys must be players");
        continue;
      }
      if (!it.value().is_object()) {
        result.errors.push_back("per-player observations must be objects");
        continue;
      }
      for (auto obs_it = it.value().begin(); obs_it != it.value().end();
           ++obs_it) {
        History h = HistoryFromString(obs_it.key());
        if (!file.game.Contains(h)) {
          result.errors.push_back("observation at unknown history '" +
                                  obs_it.key() + "'");
          continue;
        }
        if (!obs_it.value().is_array()) {
          result.errors.push_back("observations must be token arrays");
          continue;
        }
        std::vector<Token> tokens;
        for (const json& token : obs_it.value()) {
          if (!token.is_string()) {
            result.errors.push_back("tokens must be strings");
            continue;
          }
          try {
            tokens.push_back(Token::FromString(token.get<std::string>()));
          } catch (const std::invalid_argument& e) {
            result.errors.push_back(e.what());
          }
        }
        obs.SetObservation(*player, h, std::move(tokens));
      }
    }
    if (!result.errors.empty()) return result;
    file.observations = std::move(obs);
  }

  std::sort(result.errors.begin(), result.errors.end());
  if (!result.errors.empty()) return result;
  result.file = std::move(file);
  return result;
}

std::string SerializeGameFile(const GameTree& game,
                              const ClassicalPartition* classical,
                              const ObservationAssignment* observations) {
  json doc;
  doc["players"] = game.num_players();
  json nodes = json::array();
  for (const History& h : game.histories()) {
    json node;
    node["h"] = HistoryToString(h);
    if (!game.IsTerminal(h)) {
      Player p = *game.PlayerAt(h);
      node["player"] = p == kChancePlayer ? "c" : std::to_string(p);
      if (p == kChancePlayer) {
        json chance;
        for (const auto& [a, prob] : game.ChanceDist(h)) chance[a] = prob;
        node["chance"] = std::move(chance);
      }
    } else {
      node["utilities"] = game.Utilities(h);
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);

  if (classical) {
    json infosets;
    for (Player i = 1; i <= game.num_players(); ++i) {
      json blocks = json::array();
      for (const std::set<History>& block : classical->Blocks(i)) {
        json members = json::array();
        for (const History& h : block) members.push_back(HistoryToString(h));
        blocks.push_back(std::move(members));
      }
      infosets[std::to_string(i)] = std::move(blocks);
    }
    doc["classical_infosets"] = std::move(infosets);
  }

  if (observations) {
    json obs;
    obs["variant"] =
        observations->variant() == ObsVariant::kSet ? "set" : "seq";
    for (Player i = 1; i <= game.num_players(); ++i) {
      json per_player;
      for (const auto& [h, tokens] : observations->PlayerObservations(i)) {
        json list = json::array();
        for (const Token& t : tokens) list.push_back(t.ToString());
        per_player[HistoryToString(h)] = std::move(list);
      }
      if (!per_player.is_null()) {
        obs[std::to_string(i)] = std::move(per_player);
      }
    }
    doc["observations"] = std::move(obs);
  }
  return doc.dump(2) + "\n";
}

std::string SerializeEmbedding(const std::map<History, History>& embedding) {
  json doc;
  for (const auto& [from, to] : embedding) {
    doc[HistoryToString(from)] = HistoryToString(to);
  }
  return doc.dump(2) + "\n";
}

std::string ReportsToJson(const std::vector<PropertyReport>& reports) {
  json doc = json::array();
  for (const PropertyReport& r : reports) {
    json entry;
    entry["property"] = r.property;
    entry["verdict"] = r.holds ? "holds" : "fails";
    json witness = json::array();
    for (const History& h : r.witness) witness.push_back(HistoryToString(h));
    entry["witness"] = std::move(witness);
    entry["witness_observations"] = r.witness_details;
    entry["message"] = r.message;
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string ReportsToText(const std::vector<PropertyReport>& reports) {
  std::string out;
  for (const PropertyReport& r : reports) {
    out += r.property + ": " + (r.holds ? "holds" : "FAILS") + "\n";
    if (!r.holds) {
      if (!r.message.empty()) out += "  " + r.message + "\n";
      for (size_t k = 0; k < r.witness.size(); ++k) {
        out += "  witness: '" + HistoryToString(r.witness[k]) + "'";
        if (k < r.witness_details.size()) {
          out += "  vec=" + r.witness_details[k];
        }
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace gamecheck
