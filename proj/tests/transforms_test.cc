#include "gamecheck/transforms.h"

#include <random>

#include "doctest.h"
#include "gamecheck/corpus.h"
#include "gamecheck/partitions.h"
#include "gamecheck/properties.h"

using namespace gamecheck;

namespace {

ObservationAssignment AsSequence(const ObservationAssignment& obs) {
  if (obs.variant() == ObsVariant::kSeq) return obs;
  ObservationAssignment out(ObsVariant::kSeq, obs.num_players());
  for (Player i = 1; i <= obs.num_players(); ++i) {
    for (const auto& [h, tokens] : obs.PlayerObservations(i)) {
      out.SetObservation(i, h, tokens);
    }
  }
  return out;
}

ClassicalPartition TransportClassical(const ClassicalPartition& classical,
                                      const std::map<History, History>& phi) {
  std::vector<std::vector<std::set<History>>> blocks(classical.num_players());
  for (Player i = 1; i <= classical.num_players(); ++i) {
    for (const std::set<History>& block : classical.Blocks(i)) {
      std::set<History> mapped;
      for (const History& h : block) mapped.insert(phi.at(h));
      blocks[i - 1].push_back(std::move(mapped));
    }
  }
  return ClassicalPartition(classical.num_players(), std::move(blocks));
}

// Pulled back along the embedding, the modified game's partitions must group
// the original histories exactly as before.
bool PreservesPartitions(const GameTree& original,
                         const ObservationAssignment& original_obs,
                         const ModificationResult& result) {
  for (Player i = 1; i <= original.num_players(); ++i) {
    InformationPartition before = InducePartition(original, original_obs, i);
    InformationPartition after =
        InducePartition(result.game, *result.observations, i);
    for (const History& g : original.histories()) {
      for (const History& h : original.histories()) {
        const bool same_before = before.partition.BlockIndexOf(g) ==
                                 before.partition.BlockIndexOf(h);
        const bool same_after =
            after.partition.BlockIndexOf(result.embedding.at(g)) ==
            after.partition.BlockIndexOf(result.embedding.at(h));
        if (same_before != same_after) return false;
      }
    }
  }
  return true;
}

bool EmbeddingIsMonotone(const GameTree& original,
                         const ModificationResult& result) {
  for (const History& g : original.histories()) {
    for (const History& h : original.histories()) {
      if (IsPrefix(g, h) !=
          IsPrefix(result.embedding.at(g), result.embedding.at(h))) {
        return false;
      }
    }
    if (original.IsTerminal(g)) {
      if (!result.game.IsTerminal(result.embedding.at(g))) return false;
      if (original.Utilities(g) !=
          result.game.Utilities(result.embedding.at(g))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("repair: well-behaved games are untouched") {
  CorpusEntry entry = UnfairMatchingPennies();
  ModificationResult result = RepairWbd(entry.game, *entry.classical);
  CHECK(result.added_nodes == 0);
  CHECK(result.game == entry.game);
  for (const History& h : entry.game.histories()) {
    CHECK(result.embedding.at(h) == h);
  }
}

TEST_CASE("repair: the sneaking game needs exactly one dummy node") {
  CorpusEntry entry = SneakingGame();
  ModificationResult result = RepairWbd(entry.game, *entry.classical);
  CHECK(result.added_nodes == 1);
  // The dummy sits right after (sloppy, approach).
  CHECK(result.game.Contains(HistoryFromString("sloppy approach")));
  CHECK(result.game.PlayerAt(HistoryFromString("sloppy approach")) ==
        kChancePlayer);
  CHECK(CheckWbd(result.game, *result.classical).holds);
  CHECK(EmbeddingIsMonotone(entry.game, result));
}

TEST_CASE("repair never adds more than one dummy per history") {
  std::mt19937_64 seeder(7);
  for (int k = 0; k < 50; ++k) {
    RandomClassicalGame instance = MakeRandomClassical(seeder(), 24, 2);
    ModificationResult result =
        RepairWbd(instance.game, instance.classical);
    CHECK(result.added_nodes <=
          static_cast<int>(instance.game.histories().size()));
    CHECK(CheckWbd(result.game, *result.classical).holds);
  }
}

TEST_CASE("stabilize: rejects the set variant") {
  CorpusEntry entry = SneakingGame();
  CHECK_THROWS_AS(
      StableModification(entry.game, entry.observations.at("iso+cl:set")),
      std::invalid_argument);
}

TEST_CASE("stabilize: already-stable input is returned unchanged") {
  CorpusEntry entry = SneakingGameModified();
  ModificationResult result =
      StableModification(entry.game, entry.observations.at("iso+cl:seq"));
  CHECK(result.added_nodes == 0);
  CHECK(result.game == entry.game);
  CHECK(*result.observations == entry.observations.at("iso+cl:seq"));
}

TEST_CASE("stabilize: sneaking needs one dummy and passes the full battery") {
  CorpusEntry entry = SneakingGame();
  ModificationResult result =
      StableModification(entry.game, entry.observations.at("iso+cl:seq"));
  CHECK(result.added_nodes == 1);
  CHECK(CheckStab(result.game, *result.observations).holds);
  CHECK(CheckAps(result.game, *result.observations).holds);
  CHECK(CheckIso(result.game, *result.observations).holds);
  ClassicalPartition transported =
      TransportClassical(*entry.classical, result.embedding);
  CHECK(CheckCons(result.game, *result.observations, transported).holds);
  CHECK(PreservesPartitions(entry.game, entry.observations.at("iso+cl:seq"),
                            result));
  CHECK(EmbeddingIsMonotone(entry.game, result));

  // Second application is the identity.
  ModificationResult again =
      StableModification(result.game, *result.observations);
  CHECK(again.added_nodes == 0);
}

TEST_CASE("stabilize: padding family grows quadratically") {
  // Exact output sizes, frozen: |H~| = (N+1)^2 for this family.
  const std::map<int, int> expected = {{1, 4},  {2, 9},  {3, 16}, {4, 25},
                                       {5, 36}, {6, 49}, {7, 64}, {8, 81}};
  for (const auto& [n, size] : expected) {
    CorpusEntry entry = PaddingGame(n);
    CHECK(entry.game.histories().size() == static_cast<size_t>(3 * n + 1));
    ModificationResult result =
        StableModification(entry.game, entry.observations.at("padding:seq"));
    CHECK(static_cast<int>(result.game.histories().size()) == size);
    if (n == 1) CHECK(result.added_nodes == 0);
  }
}

TEST_CASE("stabilize: random sequence instances stay within the bound") {
  std::mt19937_64 seeder(31337);
  for (int k = 0; k < 60; ++k) {
    RandomInstance instance = MakeRandomInstance(seeder(), 20, 2, 0.5);
    ObservationAssignment obs = AsSequence(instance.obs);
    ModificationResult result = StableModification(instance.game, obs);
    CHECK(CheckStab(result.game, *result.observations).holds);
    CHECK(PreservesPartitions(instance.game, obs, result));
    CHECK(EmbeddingIsMonotone(instance.game, result));
    int budget = 0;
    for (Player i = 1; i <= 2; ++i) {
      budget += InducePartition(instance.game, obs, i).partition.num_blocks();
    }
    CHECK(result.game.histories().size() <=
          instance.game.histories().size() * (1 + budget));
    ModificationResult again =
        StableModification(result.game, *result.observations);
    CHECK(again.added_nodes == 0);
  }
}

TEST_CASE("coarse: unfair matching pennies, set needs no dummies") {
  CorpusEntry entry = UnfairMatchingPennies();
  for (ObsVariant variant : {ObsVariant::kSet, ObsVariant::kSeq}) {
    ModificationResult result =
        CoarseModel(entry.game, *entry.classical, variant);
    // The flat sequence reading additionally needs the four directly-ending
    // second-move branches separated from their utility announcements.
    CHECK(result.added_nodes == (variant == ObsVariant::kSet ? 0 : 4));
    CHECK(CheckObservationModel(result.game, *result.observations).holds);
    CHECK(CheckCons(result.game, *result.observations, *result.classical)
              .holds);
    CHECK(CheckAps(result.game, *result.observations).holds);
    CHECK(CheckIso(result.game, *result.observations).holds);
    CHECK(CheckStab(result.game, *result.observations).holds);
    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= 2; ++i) {
      parts.push_back(InducePartition(result.game, *result.observations, i));
    }
    PartitionValidation restricted = RestrictAllToActing(parts, result.game);
    REQUIRE(restricted.ok());
    CHECK(*restricted.partition == *result.classical);
  }
}

TEST_CASE("coarse: the sneaking game needs its one dummy first") {
  CorpusEntry entry = SneakingGame();
  ModificationResult result =
      CoarseModel(entry.game, *entry.classical, ObsVariant::kSet);
  CHECK(result.added_nodes == 1);
  CHECK(CheckObservationModel(result.game, *result.observations).holds);
  CHECK(CheckCons(result.game, *result.observations, *result.classical)
            .holds);
  CHECK(CheckStab(result.game, *result.observations).holds);
  CHECK(EmbeddingIsMonotone(entry.game, result));
}

TEST_CASE("coarse: a single-node game only announces the utility") {
  RawGame raw;
  raw.players = 1;
  RawNode leaf;
  leaf.utilities = std::vector<double>{3};
  raw.nodes.push_back(leaf);
  GameTree game = std::move(*ValidateTree(raw).tree);
  ClassicalPartition classical(1, {{}});
  ModificationResult result = CoarseModel(game, classical, ObsVariant::kSet);
  const std::vector<Token>* tokens =
      result.observations->ObservationAt(1, {});
  REQUIRE(tokens != nullptr);
  REQUIRE(tokens->size() == 1);
  CHECK((*tokens)[0] == Token::Feature("utility", "3.0"));
}

TEST_CASE("coarse: imperfect recall is rejected") {
  CorpusEntry entry = UnfairMatchingPenniesBroken();
  CHECK_THROWS_AS(CoarseModel(entry.game, *entry.classical, ObsVariant::kSet),
                  std::invalid_argument);
}
