#include "gamecheck/dot_export.h"

#include <map>
#include <sstream>

namespace gamecheck {

namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string NodeLabel(const GameTree& game, const History& h) {
  std::string label = h.empty() ? "root" : HistoryToString(h);
  if (game.IsTerminal(h)) {
    label += "\n[";
    const std::vector<double>& u = game.Utilities(h);
    for (size_t k = 0; k < u.size(); ++k) {
      if (k > 0) label += ", ";
      std::ostringstream num;
      num << u[k];
      label += num.str();
    }
    label += "]";
  } else if (*game.PlayerAt(h) == kChancePlayer) {
    label += "\nchance";
  } else {
    label += "\nP" + std::to_string(*game.PlayerAt(h));
  }
  return label;
}

}  // namespace

std::string ExportDot(const GameTree& game, const Partition* clusters,
                      const std::string& title) {
  std::ostringstream out;
  out << "digraph game {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=ellipse, fontsize=10];\n";
  if (!title.empty()) out << "  label=" << Quote(title) << ";\n";

  std::map<History, int> id;
  for (const History& h : game.histories()) {
    id.emplace(h, static_cast<int>(id.size()));
  }

  auto emit_node = [&](std::ostream& os, const History& h,
                       const std::string& indent) {
    os << indent << "n" << id.at(h) << " [label=" << Quote(NodeLabel(game, h));
    if (game.IsTerminal(h)) {
      os << ", shape=box";
    } else if (*game.PlayerAt(h) == kChancePlayer) {
      os << ", shape=diamond";
    }
    os << "];\n";
  };

  if (clusters) {
    for (int b = 0; b < clusters->num_blocks(); ++b) {
      out << "  subgraph cluster_" << b << " {\n";
      out << "    style=dashed;\n";
      out << "    label=" << Quote(clusters->BlockLabel(b).empty()
                                       ? "root"
                                       : clusters->BlockLabel(b))
          << ";\n";
      for (const History& h : clusters->Block(b)) emit_node(out, h, "    ");
      out << "  }\n";
    }
    for (const History& h : game.histories()) {
      if (!clusters->Covers(h)) emit_node(out, h, "  ");
    }
  } else {
    for (const History& h : game.histories()) emit_node(out, h, "  ");
  }

  for (const History& h : game.histories()) {
    if (game.IsTerminal(h)) continue;
    for (const std::string& a : game.Actions(h)) {
      History child = h;
      child.push_back(a);
      out << "  n" << id.at(h) << " -> n" << id.at(child)
          << " [label=" << Quote(a) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gamecheck
