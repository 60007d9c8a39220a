#include "gamecheck/corpus.h"

#include <algorithm>
#include <random>

#include "gamecheck/partitions.h"
#include "gamecheck/transforms.h"

namespace gamecheck {

namespace {

class GameBuilder {
 public:
  explicit GameBuilder(int players) { raw_.players = players; }

  GameBuilder& Acting(const std::string& h, Player p) {
    RawNode node;
    node.h = HistoryFromString(h);
    node.player = p;
    raw_.nodes.push_back(std::move(node));
    return *this;
  }

  GameBuilder& Chance(const std::string& h,
                      std::vector<std::pair<std::string, double>> dist) {
    RawNode node;
    node.h = HistoryFromString(h);
    node.player = kChancePlayer;
    for (auto& [a, p] : dist) node.chance.emplace(a, p);
    raw_.nodes.push_back(std::move(node));
    return *this;
  }

  GameBuilder& Leaf(const std::string& h, std::vector<double> utilities) {
    RawNode node;
    node.h = HistoryFromString(h);
    node.utilities = std::move(utilities);
    raw_.nodes.push_back(std::move(node));
    return *this;
  }

  GameTree Build() {
    TreeValidation v = ValidateTree(raw_);
    if (!v.ok()) {
      std::string all;
      for (const std::string& e : v.errors) all += e + "; ";
      throw InternalError("corpus game failed validation: " + all);
    }
    return std::move(*v.tree);
  }

 private:
  RawGame raw_;
};

ClassicalPartition MakeClassical(
    const GameTree& game,
    std::map<Player, std::vector<std::vector<std::string>>> raw_blocks) {
  RawClassical raw;
  for (auto& [player, blocks] : raw_blocks) {
    for (auto& block : blocks) {
      std::vector<History> parsed;
      for (const std::string& h : block) parsed.push_back(HistoryFromString(h));
      raw[player].push_back(std::move(parsed));
    }
  }
  PartitionValidation v = ValidateClassical(game, raw);
  if (!v.ok()) {
    std::string all;
    for (const std::string& e : v.errors) all += e + "; ";
    throw InternalError("corpus classical partition failed validation: " + all);
  }
  return std::move(*v.partition);
}

void AddIsoClVariants(CorpusEntry& entry) {
  for (ObsVariant variant : {ObsVariant::kSet, ObsVariant::kSeq}) {
    const std::string suffix = variant == ObsVariant::kSet ? ":set" : ":seq";
    entry.observations.emplace(
        "iso+cl" + suffix,
        IsoPlusClassical(entry.game, *entry.classical, variant));
  }
}

// Only the set variant is guaranteed to leave well-behaved games unchanged;
// the sequence variant may need extra terminal-separating dummies and then
// lives on a different tree, so entries carry the set form only.
void AddCoarseSet(CorpusEntry& entry) {
  ModificationResult coarse =
      CoarseModel(entry.game, *entry.classical, ObsVariant::kSet);
  if (coarse.added_nodes != 0) {
    throw InternalError("corpus entry '" + entry.name +
                        "' unexpectedly needs dummies for its coarse model");
  }
  entry.observations.emplace("coarse:set", std::move(*coarse.observations));
}

}  // namespace

ObservationAssignment IsoPlusClassical(const GameTree& game,
                                       const ClassicalPartition& classical,
                                       ObsVariant variant) {
  return AddObservations(IsoObs(game, variant),
                         ClassicalObs(game, classical, false, variant));
}

CorpusEntry SneakingGame() {
  CorpusEntry entry;
  entry.name = "sneaking";
  GameBuilder b(2);
  b.Acting("", 2)
      .Acting("alert", 1)
      .Acting("sloppy", 1)
      .Acting("sloppy approach", 1)
      .Acting("alert approach", 2)
      .Acting("alert approach guard", 1)
      .Acting("alert approach chase", 1)
      .Leaf("sloppy approach quiet", {-1, 1})
      .Leaf("sloppy approach loud", {1, -1})
      .Leaf("alert approach guard quiet", {1, -1})
      .Leaf("alert approach guard loud", {-1, 1})
      .Leaf("alert approach chase quiet", {1, -1})
      .Leaf("alert approach chase loud", {-1, 1});
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1,
        {{"alert", "sloppy"},
         {"sloppy approach", "alert approach guard",
          "alert approach chase"}}},
       {2, {{""}, {"alert approach"}}}});
  AddIsoClVariants(entry);
  entry.expected = {
      {"cons", "iso+cl:set", false},  {"cons", "iso+cl:seq", true},
      {"aps", "iso+cl:seq", true},    {"iso", "iso+cl:set", true},
      {"iso", "iso+cl:seq", true},    {"stab", "iso+cl:seq", false},
      {"tsip", "iso+cl:seq", false},  {"wbd", "", false},
      {"recall", "", true},
  };
  return entry;
}

CorpusEntry SneakingGameModified() {
  CorpusEntry entry;
  entry.name = "sneaking_modified";
  GameBuilder b(2);
  b.Acting("", 2)
      .Acting("alert", 1)
      .Acting("sloppy", 1)
      .Chance("sloppy approach", {{"noop#1", 1.0}})
      .Acting("sloppy approach noop#1", 1)
      .Acting("alert approach", 2)
      .Acting("alert approach guard", 1)
      .Acting("alert approach chase", 1)
      .Leaf("sloppy approach noop#1 quiet", {-1, 1})
      .Leaf("sloppy approach noop#1 loud", {1, -1})
      .Leaf("alert approach guard quiet", {1, -1})
      .Leaf("alert approach guard loud", {-1, 1})
      .Leaf("alert approach chase quiet", {1, -1})
      .Leaf("alert approach chase loud", {-1, 1});
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1,
        {{"alert", "sloppy"},
         {"sloppy approach noop#1", "alert approach guard",
          "alert approach chase"}}},
       {2, {{""}, {"alert approach"}}}});
  AddIsoClVariants(entry);
  entry.expected = {
      {"cons", "iso+cl:set", true},  {"cons", "iso+cl:seq", true},
      {"aps", "iso+cl:set", true},   {"aps", "iso+cl:seq", true},
      {"iso", "iso+cl:set", true},   {"iso", "iso+cl:seq", true},
      {"stab", "iso+cl:set", true},  {"stab", "iso+cl:seq", true},
      {"tsip", "iso+cl:set", true},  {"tsip", "iso+cl:seq", true},
      {"wbd", "", true},             {"recall", "", true},
  };
  return entry;
}

CorpusEntry IsoFailGame() {
  CorpusEntry entry;
  entry.name = "iso_fail";
  GameBuilder b(2);
  b.Acting("", 1)
      .Acting("go", 2)
      .Acting("go x", 2)
      .Acting("go y", 2)
      .Acting("go x u", 1)
      .Leaf("go x v", {0, 0})
      .Leaf("go y u", {0, 0})
      .Leaf("go y v", {0, 0})
      .Leaf("go x u s", {1, -1})
      .Leaf("go x u t", {-1, 1});
  entry.game = b.Build();
  entry.classical = MakeClassical(entry.game,
                                  {{1, {{""}, {"go x u"}}},
                                   {2, {{"go"}, {"go x"}, {"go y"}}}});
  AddIsoClVariants(entry);
  entry.expected = {
      {"cons", "iso+cl:set", true}, {"cons", "iso+cl:seq", true},
      {"stab", "iso+cl:set", true}, {"stab", "iso+cl:seq", true},
      {"recall", "", true},         {"wbd", "", true},
  };
  return entry;
}

CorpusEntry NoFinestGame() {
  CorpusEntry entry;
  entry.name = "no_finest";
  GameBuilder b(1);
  b.Chance("", {{"p", 0.5}, {"q", 0.5}})
      .Chance("p", {{"c", 1.0}})
      .Chance("p c", {{"c", 1.0}})
      .Acting("p c c", 1)
      .Chance("q", {{"c", 1.0}})
      .Chance("q c", {{"c", 1.0}})
      .Chance("q c c", {{"c", 1.0}})
      .Acting("q c c c", 1)
      .Leaf("p c c l", {1})
      .Leaf("p c c r", {-1})
      .Leaf("q c c c l", {-1})
      .Leaf("q c c c r", {1});
  entry.game = b.Build();
  entry.classical =
      MakeClassical(entry.game, {{1, {{"p c c", "q c c c"}}}});
  AddIsoClVariants(entry);
  entry.expected = {{"recall", "", true}};
  return entry;
}

CorpusEntry ThickInfosetGame() {
  // Three hidden chance branches. After the shared first move, the p branch
  // passes two silent chance nodes and the q branch one before the shared
  // second information set, so the waiting block must absorb (p a) together
  // with its child to stay stable. The r branch returns the move to the
  // player immediately, which breaks classical well-behavedness.
  CorpusEntry entry;
  entry.name = "thick_infoset";
  GameBuilder b(1);
  b.Chance("", {{"p", 0.4}, {"q", 0.4}, {"r", 0.2}})
      .Acting("p", 1)
      .Acting("q", 1)
      .Acting("r", 1)
      .Chance("p a", {{"n", 1.0}})
      .Chance("p a n", {{"n", 1.0}})
      .Acting("p a n n", 1)
      .Chance("q a", {{"n", 1.0}})
      .Acting("q a n", 1)
      .Acting("r a", 1)
      .Leaf("p a n n b", {1})
      .Leaf("q a n b", {-1})
      .Leaf("r a b", {0});
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1, {{"p", "q", "r"}, {"p a n n", "q a n"}, {"r a"}}}});
  AddIsoClVariants(entry);

  // The thick target partition and its on-entry observations.
  std::vector<std::set<History>> blocks = {
      {HistoryFromString("")},
      {HistoryFromString("p"), HistoryFromString("q"),
       HistoryFromString("r")},
      {HistoryFromString("p a"), HistoryFromString("p a n"),
       HistoryFromString("q a")},
      {HistoryFromString("r a")},
      {HistoryFromString("p a n n"), HistoryFromString("q a n")},
      {HistoryFromString("p a n n b"), HistoryFromString("q a n b")},
      {HistoryFromString("r a b")}};
  for (ObsVariant variant : {ObsVariant::kSet, ObsVariant::kSeq}) {
    const std::string suffix = variant == ObsVariant::kSet ? ":set" : ":seq";
    entry.observations.emplace(
        "thick" + suffix,
        ObsFromPartition(entry.game, {ToLabeledBlocks(blocks)}, variant));
  }
  entry.expected = {
      {"wbd", "", false},           {"recall", "", true},
      {"cons", "thick:set", true},  {"cons", "thick:seq", true},
      {"aps", "thick:set", true},   {"stab", "thick:set", true},
      {"stab", "thick:seq", true},  {"tsip", "thick:set", true},
  };
  return entry;
}

CorpusEntry PaddingGame(int n) {
  if (n < 1) throw std::invalid_argument("padding_game requires N >= 1");
  CorpusEntry entry;
  entry.name = "padding(" + std::to_string(n) + ")";
  GameBuilder b(1);
  std::vector<std::pair<std::string, double>> root_dist;
  for (int k = 1; k <= n; ++k) {
    root_dist.emplace_back("b" + std::to_string(k), 1.0 / n);
  }
  b.Chance("", root_dist);
  std::vector<std::vector<std::string>> infoset(1);
  for (int k = 1; k <= n; ++k) {
    const std::string bk = "b" + std::to_string(k);
    b.Chance(bk, {{"n", 1.0}});
    b.Acting(bk + " n", 1);
    b.Leaf(bk + " n f", {0});
    infoset[0].push_back(bk + " n");
  }
  entry.game = b.Build();
  entry.classical = MakeClassical(entry.game, {{1, infoset}});

  // Branch k announces the first k shared symbols at its first chain node and
  // the remaining ones (plus the information-set label) at the acting node.
  ObservationAssignment obs(ObsVariant::kSeq, 1);
  const std::string label = entry.classical->BlockLabel(1, 0);
  for (int k = 1; k <= n; ++k) {
    const std::string bk = "b" + std::to_string(k);
    std::vector<Token> first;
    for (int j = 1; j <= k; ++j) first.push_back(Token::Symbol("u" + std::to_string(j)));
    obs.SetObservation(1, HistoryFromString(bk), std::move(first));
    std::vector<Token> second;
    for (int j = k + 1; j <= n; ++j) {
      second.push_back(Token::Symbol("u" + std::to_string(j)));
    }
    second.push_back(Token::Infoset(label));
    obs.SetObservation(1, HistoryFromString(bk + " n"), std::move(second));
  }
  entry.observations.emplace("padding:seq", std::move(obs));
  entry.expected = {
      {"cons", "padding:seq", true},
      {"stab", "padding:seq", n == 1},
      {"recall", "", true},
  };
  return entry;
}

CorpusEntry UnfairMatchingPennies() {
  CorpusEntry entry;
  entry.name = "unfair_mp";
  GameBuilder b(2);
  b.Chance("", {{"order12", 0.5}, {"order21", 0.5}})
      .Acting("order12", 1)
      .Acting("order21", 2);
  for (const std::string first : {"H", "T"}) {
    b.Acting("order12 " + first, 2);
    b.Acting("order21 " + first, 1);
    for (const std::string second : {"H", "T"}) {
      const double p1 = first == second ? 1 : -1;
      b.Leaf("order12 " + first + " " + second, {p1, -p1});
      // In the 21 order, the second mover is player 1.
      b.Leaf("order21 " + first + " " + second, {p1, -p1});
    }
  }
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1, {{"order12", "order21 T"}, {"order21 H"}}},
       {2, {{"order21", "order12 T"}, {"order12 H"}}}});
  AddIsoClVariants(entry);
  AddCoarseSet(entry);
  entry.expected = {
      {"recall", "", true},          {"wbd", "", true},
      {"cons", "coarse:set", true},  {"aps", "coarse:set", true},
      {"iso", "coarse:set", true},   {"stab", "coarse:set", true},
      {"obsmodel", "coarse:set", true},
  };
  return entry;
}

CorpusEntry UnfairMatchingPenniesBroken() {
  CorpusEntry entry;
  entry.name = "unfair_mp_broken";
  GameBuilder b(2);
  b.Chance("", {{"order12", 0.5}, {"order21", 0.5}})
      .Acting("order12", 1)
      .Acting("order21", 2);
  std::vector<std::string> final_block;
  for (const std::string first : {"H", "T"}) {
    b.Acting("order12 " + first, 2);
    b.Acting("order21 " + first, 1);
    for (const std::string second : {"H", "T"}) {
      const double p1 = first == second ? 1 : -1;
      const std::string h12 = "order12 " + first + " " + second;
      b.Acting(h12, 1);  // a final call/fold decision, forgetting the opener
      b.Leaf(h12 + " call", {p1, -p1});
      b.Leaf(h12 + " fold", {-1, 1});
      final_block.push_back(h12);
      b.Leaf("order21 " + first + " " + second, {p1, -p1});
    }
  }
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1, {{"order12", "order21 T"}, {"order21 H"}, final_block}},
       {2, {{"order21", "order12 T"}, {"order12 H"}}}});
  AddIsoClVariants(entry);
  entry.expected = {{"recall", "", false}};
  return entry;
}

CorpusEntry BettingGame() {
  CorpusEntry entry;
  entry.name = "betting";
  GameBuilder b(2);
  b.Chance("", {{"A", 0.5}, {"B", 0.5}});
  for (const std::string card : {"A", "B"}) {
    b.Acting(card, 1);
    for (const std::string m1 : {"bet", "pass"}) {
      b.Acting(card + " " + m1, 2);
      for (const std::string m2 : {"bet", "pass"}) {
        const double stake1 = m1 == "bet" ? 1 : 0;
        const double stake2 = m2 == "bet" ? 1 : 0;
        const double p1 = card == "A" ? stake2 : -stake1;
        b.Leaf(card + " " + m1 + " " + m2, {p1, -p1});
      }
    }
  }
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1, {{"A"}, {"B"}}},
       {2, {{"A bet"}, {"A pass"}, {"B bet"}, {"B pass"}}}});
  for (ObsVariant variant : {ObsVariant::kSet, ObsVariant::kSeq}) {
    const std::string suffix = variant == ObsVariant::kSet ? ":set" : ":seq";
    ObservationAssignment closed =
        IsoPlusClassical(entry.game, *entry.classical, variant);
    ObservationAssignment reveal(variant, 2);
    reveal.SetObservation(2, HistoryFromString("A"),
                          {Token::Feature("card", "A")});
    reveal.SetObservation(2, HistoryFromString("B"),
                          {Token::Feature("card", "B")});
    entry.observations.emplace("eyes_open" + suffix,
                               AddObservations(closed, reveal));
    entry.observations.emplace("eyes_closed" + suffix, std::move(closed));
  }
  entry.expected = {
      {"cons", "eyes_open:seq", true},   {"cons", "eyes_closed:seq", true},
      {"cons", "eyes_open:set", true},   {"cons", "eyes_closed:set", true},
      {"recall", "", true},              {"wbd", "", true},
  };
  return entry;
}

CorpusEntry MiniPoker() {
  CorpusEntry entry;
  entry.name = "mini_poker";
  GameBuilder b(2);
  b.Chance("", {{"j1", 0.5}, {"q1", 0.5}});
  auto rank = [](const std::string& card) { return card[0] == 'q' ? 1 : 0; };
  for (const std::string d1 : {"j1", "q1"}) {
    b.Chance(d1, {{"j2", 0.5}, {"q2", 0.5}});
    for (const std::string d2 : {"j2", "q2"}) {
      const std::string deal = d1 + " " + d2;
      b.Acting(deal, 1);
      for (const std::string m1 : {"bet", "check"}) {
        b.Acting(deal + " " + m1, 2);
        for (const std::string m2 : {"bet", "check"}) {
          const double stake =
              1.0 + (m1 == "bet" ? 1 : 0) + (m2 == "bet" ? 1 : 0);
          double p1 = 0;
          if (rank(d1) > rank(d2)) p1 = stake;
          if (rank(d2) > rank(d1)) p1 = -stake;
          b.Leaf(deal + " " + m1 + " " + m2, {p1, -p1});
        }
      }
    }
  }
  entry.game = b.Build();
  entry.classical = MakeClassical(
      entry.game,
      {{1,
        {{"j1 j2", "j1 q2"}, {"q1 j2", "q1 q2"}}},
       {2,
        {{"j1 j2 bet", "q1 j2 bet"},
         {"j1 j2 check", "q1 j2 check"},
         {"j1 q2 bet", "q1 q2 bet"},
         {"j1 q2 check", "q1 q2 check"}}}});
  AddCoarseSet(entry);
  entry.expected = {
      {"recall", "", true},
      {"wbd", "", true},
      {"obsmodel", "coarse:set", true},
  };
  return entry;
}

std::vector<std::string> CorpusNames() {
  return {"sneaking",      "sneaking_modified", "iso_fail",
          "no_finest",     "thick_infoset",     "padding(N)",
          "unfair_mp",     "unfair_mp_broken",  "betting",
          "mini_poker"};
}

CorpusEntry GetCorpusEntry(const std::string& name) {
  if (name == "sneaking") return SneakingGame();
  if (name == "sneaking_modified") return SneakingGameModified();
  if (name == "iso_fail") return IsoFailGame();
  if (name == "no_finest") return NoFinestGame();
  if (name == "thick_infoset") return ThickInfosetGame();
  if (name == "unfair_mp") return UnfairMatchingPennies();
  if (name == "unfair_mp_broken") return UnfairMatchingPenniesBroken();
  if (name == "betting") return BettingGame();
  if (name == "mini_poker") return MiniPoker();
  if (name.rfind("padding(", 0) == 0 && name.back() == ')') {
    const std::string arg = name.substr(8, name.size() - 9);
    return PaddingGame(std::stoi(arg));
  }
  throw std::invalid_argument("unknown corpus entry '" + name + "'");
}

namespace {

// Deterministic helpers; std distributions are avoided so instances do not
// depend on the standard library implementation.
std::uint64_t NextU64(std::mt19937_64& rng) { return rng(); }
int Uniform(std::mt19937_64& rng, int n) {
  return n <= 1 ? 0 : static_cast<int>(NextU64(rng) % n);
}
bool Coin(std::mt19937_64& rng, double p) {
  return (NextU64(rng) % 1000000) < static_cast<std::uint64_t>(p * 1000000);
}

const char* kActionPool[] = {"a", "b", "c", "d"};

GameTree MakeRandomTree(std::mt19937_64& rng, int max_nodes, int num_players) {
  if (max_nodes > 64) {
    throw std::invalid_argument("random trees are capped at 64 nodes");
  }
  const int target = std::min(max_nodes, 3 + Uniform(rng, max_nodes - 2));
  RawGame raw;
  raw.players = num_players;
  std::vector<History> open = {History{}};
  int count = 1;
  while (!open.empty()) {
    // Pop a deterministic random frontier element.
    const int pick = Uniform(rng, static_cast<int>(open.size()));
    History h = open[pick];
    open.erase(open.begin() + pick);

    const bool must_close = count >= target;
    const bool close = must_close || (!h.empty() && Coin(rng, 0.3));
    RawNode node;
    node.h = h;
    if (close) {
      std::vector<double> utilities;
      for (int p = 0; p < num_players; ++p) {
        utilities.push_back(Uniform(rng, 7) - 3);
      }
      node.utilities = std::move(utilities);
      raw.nodes.push_back(std::move(node));
      continue;
    }
    const int width = 1 + Uniform(rng, std::min(3, std::max(1, target - count)));
    const Player mover = Coin(rng, 0.3) ? kChancePlayer
                                        : 1 + Uniform(rng, num_players);
    node.player = mover;
    for (int k = 0; k < width; ++k) {
      History child = h;
      child.push_back(kActionPool[k]);
      if (mover == kChancePlayer) {
        node.chance.emplace(kActionPool[k], 1.0 + Uniform(rng, 4));
      }
      open.push_back(std::move(child));
      ++count;
    }
    if (mover == kChancePlayer) {
      double total = 0;
      for (const auto& [a, w] : node.chance) total += w;
      for (auto& [a, w] : node.chance) w /= total;
    }
    raw.nodes.push_back(std::move(node));
  }
  TreeValidation v = ValidateTree(raw);
  if (!v.ok()) throw InternalError("random tree failed validation");
  return std::move(*v.tree);
}

}  // namespace

RandomInstance MakeRandomInstance(std::uint64_t seed, int max_nodes,
                                  int num_players, double obs_richness) {
  std::mt19937_64 rng(seed);
  GameTree game = MakeRandomTree(rng, max_nodes, num_players);
  ObservationAssignment obs(Coin(rng, 0.5) ? ObsVariant::kSet
                                           : ObsVariant::kSeq,
                            num_players);
  for (const History& h : game.histories()) {
    for (Player i = 1; i <= num_players; ++i) {
      if (!Coin(rng, obs_richness)) continue;
      const int k = 1 + Uniform(rng, 3);
      std::vector<Token> tokens;
      for (int t = 0; t < k; ++t) {
        switch (Uniform(rng, 3)) {
          case 0:
            tokens.push_back(
                Token::Symbol("s" + std::to_string(Uniform(rng, 4))));
            break;
          case 1:
            tokens.push_back(Token::Action(kActionPool[Uniform(rng, 4)]));
            break;
          default:
            tokens.push_back(
                Token::Feature("f", std::to_string(Uniform(rng, 3))));
        }
      }
      obs.SetObservation(i, h, std::move(tokens));
    }
  }
  return RandomInstance{std::move(game), std::move(obs)};
}

RandomClassicalGame MakeRandomClassical(std::uint64_t seed, int max_nodes,
                                        int num_players) {
  std::mt19937_64 rng(seed);
  GameTree game = MakeRandomTree(rng, max_nodes, num_players);

  std::vector<std::vector<std::set<History>>> blocks(num_players);
  for (Player i = 1; i <= num_players; ++i) {
    std::vector<History> acting = game.ActingHistories(i);
    // Level = number of own proper ancestors; blocks at shallower levels are
    // assigned first so deeper traces can refer to them.
    std::map<History, int> block_of;
    auto trace_of = [&game, &block_of, i](const History& h) {
      std::vector<std::pair<int, std::string>> trace;
      for (size_t len = 0; len < h.size(); ++len) {
        History prefix(h.begin(), h.begin() + len);
        if (!game.IsTerminal(prefix) && game.PlayerAt(prefix) == i) {
          trace.emplace_back(block_of.at(prefix), h[len]);
        }
      }
      return trace;
    };
    auto level_of = [&game, i](const History& h) {
      int level = 0;
      for (size_t len = 0; len < h.size(); ++len) {
        History prefix(h.begin(), h.begin() + len);
        if (!game.IsTerminal(prefix) && game.PlayerAt(prefix) == i) ++level;
      }
      return level;
    };
    std::stable_sort(acting.begin(), acting.end(),
                     [&level_of](const History& a, const History& b) {
                       return level_of(a) < level_of(b);
                     });
    int next_level = 0;
    size_t start = 0;
    while (start < acting.size()) {
      size_t end = start;
      while (end < acting.size() && level_of(acting[end]) == next_level) ++end;
      // Group this level by (trace, available actions), then randomly split.
      std::map<std::pair<std::vector<std::pair<int, std::string>>,
                         std::vector<std::string>>,
               std::vector<History>>
          groups;
      for (size_t k = start; k < end; ++k) {
        groups[{trace_of(acting[k]), game.Actions(acting[k])}].push_back(
            acting[k]);
      }
      for (auto& [key, members] : groups) {
        const int pieces = 1 + Uniform(rng, static_cast<int>(members.size()));
        std::map<int, std::set<History>> split;
        for (const History& h : members) {
          split[Uniform(rng, pieces)].insert(h);
        }
        for (auto& [piece, piece_members] : split) {
          const int id = static_cast<int>(blocks[i - 1].size());
          for (const History& h : piece_members) block_of[h] = id;
          blocks[i - 1].push_back(std::move(piece_members));
        }
      }
      start = end;
      ++next_level;
    }
  }
  ClassicalPartition classical(num_players, std::move(blocks));
  return RandomClassicalGame{std::move(game), std::move(classical)};
}

RandomInstance MakeRandomObservationModel(std::uint64_t seed, int max_nodes,
                                          int num_players) {
  std::mt19937_64 rng(seed);
  RandomClassicalGame base =
      MakeRandomClassical(NextU64(rng), max_nodes, num_players);
  const ObsVariant variant =
      Coin(rng, 0.5) ? ObsVariant::kSet : ObsVariant::kSeq;
  ModificationResult coarse = CoarseModel(base.game, base.classical, variant);
  GameTree game = std::move(coarse.game);
  ObservationAssignment obs = std::move(*coarse.observations);

  if (Coin(rng, 0.3)) {
    // Turn announcements at own acting nodes.
    ObservationAssignment turn(variant, num_players);
    for (Player i = 1; i <= num_players; ++i) {
      for (const History& h : game.ActingHistories(i)) {
        turn.SetObservation(i, h, {Token::Symbol("turn")});
      }
    }
    obs = AddObservations(obs, turn);
  }
  if (Coin(rng, 0.3)) {
    // Public announcement of chance outcomes.
    ObservationAssignment reveal(variant, num_players);
    for (const History& h : game.histories()) {
      auto parent = GameTree::Parent(h);
      if (!parent || game.PlayerAt(parent->first) != kChancePlayer) continue;
      for (Player i = 1; i <= num_players; ++i) {
        reveal.SetObservation(i, h,
                              {Token::Feature("chance", parent->second)});
      }
    }
    obs = AddObservations(obs, reveal);
  }
  return RandomInstance{std::move(game), std::move(obs)};
}

}  // namespace gamecheck
