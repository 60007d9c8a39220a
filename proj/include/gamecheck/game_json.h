// The on-disk game format and report rendering. The format is strict:
// unknown keys are rejected, and re-serialization of a parsed file is
// canonical (sorted keys, canonical history order) so outputs diff cleanly.
#ifndef GAMECHECK_GAME_JSON_H_
#define GAMECHECK_GAME_JSON_H_

#include <optional>
#include <string>
#include <vector>

#include "gamecheck/game_tree.h"
#include "gamecheck/observations.h"
#include "gamecheck/properties.h"

namespace gamecheck {

struct ParsedGameFile {
  GameTree game;
  std::optional<ClassicalPartition> classical;
  std::optional<ObservationAssignment> observations;
};

struct GameFileResult {
  std::optional<ParsedGameFile> file;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && file.has_value(); }
};

GameFileResult ParseGameFile(const std::string& text);

std::string SerializeGameFile(const GameTree& game,
                              const ClassicalPartition* classical,
                              const ObservationAssignment* observations);

std::string SerializeEmbedding(const std::map<History, History>& embedding);

std::string ReportsToJson(const std::vector<PropertyReport>& reports);
std::string ReportsToText(const std::vector<PropertyReport>& reports);

}  // namespace gamecheck

#endif  // GAMECHECK_GAME_JSON_H_
