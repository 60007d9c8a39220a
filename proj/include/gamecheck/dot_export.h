// GraphViz rendering of game trees; partition blocks become clusters.
#ifndef GAMECHECK_DOT_EXPORT_H_
#define GAMECHECK_DOT_EXPORT_H_

#include <string>

#include "gamecheck/game_tree.h"
#include "gamecheck/partitions.h"

namespace gamecheck {

// clusters may be null for a plain tree rendering.
std::string ExportDot(const GameTree& game, const Partition* clusters,
                      const std::string& title);

}  // namespace gamecheck

#endif  // GAMECHECK_DOT_EXPORT_H_
