// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Tolerances and instance counts are pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>

#include <fstream>
#include <random>

#include "doctest.h"
#include "gamecheck/corpus.h"
#include "gamecheck/game_json.h"
#include "gamecheck/partitions.h"
#include "gamecheck/properties.h"
#include "gamecheck/transforms.h"
#include "oracles.h"

using namespace gamecheck;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void Verdict(int criterion, bool pass, const std::string& what) {
  std::cout << "ACCEPTANCE " << criterion << ": " << (pass ? "PASS" : "FAIL")
            << " - " << what << std::endl;
}

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

bool BlockwisePreserved(const GameTree& original,
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

int PartitionBudget(const GameTree& game, const ObservationAssignment& obs) {
  int budget = 0;
  for (Player i = 1; i <= game.num_players(); ++i) {
    budget += InducePartition(game, obs, i).partition.num_blocks();
  }
  return budget;
}

// Whether some (block, action) pair leads directly to a terminal on one
// branch but not another, the extra repair the flat sequence reading of the
// coarse model needs.
bool HasTerminalMixing(const GameTree& game,
                       const ClassicalPartition& classical) {
  for (Player i = 1; i <= game.num_players(); ++i) {
    for (const std::set<History>& block : classical.Blocks(i)) {
      for (const std::string& a : game.Actions(*block.begin())) {
        bool ends = false, continues = false;
        for (const History& h : block) {
          History child = h;
          child.push_back(a);
          (game.IsTerminal(child) ? ends : continues) = true;
        }
        if (ends && continues) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("criterion 1: sneaking-game triple verdict") {
  Timer timer;
  CorpusEntry base = SneakingGame();
  CorpusEntry modified = SneakingGameModified();

  bool pass = true;
  pass &= !CheckCons(base.game, base.observations.at("iso+cl:set"),
                     *base.classical)
               .holds;
  const ObservationAssignment& seq = base.observations.at("iso+cl:seq");
  pass &= CheckCons(base.game, seq, *base.classical).holds;
  pass &= CheckAps(base.game, seq).holds;
  pass &= !CheckStab(base.game, seq).holds;
  pass &= !CheckTsip(base.game, seq).holds;

  for (const std::string name : {"iso+cl:set", "iso+cl:seq"}) {
    const ObservationAssignment& obs = modified.observations.at(name);
    pass &= CheckCons(modified.game, obs, *modified.classical).holds;
    pass &= CheckAps(modified.game, obs).holds;
    pass &= CheckIso(modified.game, obs).holds;
    pass &= CheckStab(modified.game, obs).holds;
    pass &= CheckTsip(modified.game, obs).holds;
  }
  const double elapsed = timer.Seconds();
  pass &= elapsed < 1.0;
  Verdict(1, pass, "sneaking-game verdicts, " + std::to_string(elapsed) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 2: stability equivalence on random instances") {
  Timer timer;
  std::mt19937_64 seeder(0xC0FFEE);
  const int kInstances = 1000;
  int disagreements = 0;
  for (int k = 0; k < kInstances; ++k) {
    RandomInstance instance =
        MakeRandomInstance(seeder(), 30, 2 + (k % 2), 0.5);
    LemmaStabReport report = VerifyLemmaStab(instance.game, instance.obs);
    if (!report.consistent) ++disagreements;
  }
  const double elapsed = timer.Seconds();
  const bool pass = disagreements == 0 && elapsed < 60.0;
  Verdict(2, pass,
          std::to_string(kInstances) + " instances, " +
              std::to_string(disagreements) + " disagreements, " +
              std::to_string(elapsed) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 3: stable modification soundness") {
  bool pass = true;
  int corpus_runs = 0;
  for (const std::string name :
       {"sneaking", "sneaking_modified", "iso_fail", "no_finest",
        "thick_infoset", "padding(4)", "unfair_mp", "unfair_mp_broken",
        "betting", "mini_poker"}) {
    CorpusEntry entry = GetCorpusEntry(name);
    for (const auto& [obs_name, obs] : entry.observations) {
      if (obs.variant() != ObsVariant::kSeq) continue;
      ++corpus_runs;
      ModificationResult result = StableModification(entry.game, obs);
      pass &= CheckStab(result.game, *result.observations).holds;
      pass &= BlockwisePreserved(entry.game, obs, result);
      pass &= result.game.histories().size() <=
              entry.game.histories().size() *
                  (1 + PartitionBudget(entry.game, obs));
      pass &=
          StableModification(result.game, *result.observations).added_nodes ==
          0;
    }
  }

  std::mt19937_64 seeder(0x5EED);
  const int kInstances = 500;
  for (int k = 0; k < kInstances; ++k) {
    RandomInstance instance =
        MakeRandomInstance(seeder(), 24, 2 + (k % 2), 0.5);
    ObservationAssignment obs = AsSequence(instance.obs);
    ModificationResult result = StableModification(instance.game, obs);
    pass &= CheckStab(result.game, *result.observations).holds;
    pass &= BlockwisePreserved(instance.game, obs, result);
    pass &= result.game.histories().size() <=
            instance.game.histories().size() *
                (1 + PartitionBudget(instance.game, obs));
    pass &=
        StableModification(result.game, *result.observations).added_nodes == 0;
  }
  Verdict(3, pass,
          std::to_string(corpus_runs) + " corpus runs and " +
              std::to_string(kInstances) + " random sequence instances");
  CHECK(pass);
}

TEST_CASE("criterion 4: padding family sizes fit a quadratic") {
  const std::map<int, int> golden = {{2, 9},  {3, 16}, {4, 25}, {5, 36},
                                     {6, 49}, {7, 64}, {8, 81}};
  bool pass = true;
  std::vector<double> xs, ys;
  double max_size = 0;
  for (const auto& [n, expected_size] : golden) {
    CorpusEntry entry = PaddingGame(n);
    pass &= entry.game.histories().size() == static_cast<size_t>(3 * n + 1);
    ModificationResult result =
        StableModification(entry.game, entry.observations.at("padding:seq"));
    const int size = static_cast<int>(result.game.histories().size());
    pass &= size == expected_size;
    xs.push_back(n);
    ys.push_back(size);
    max_size = std::max(max_size, static_cast<double>(size));
  }
  std::vector<double> fit = gamecheck_test::FitQuadratic(xs, ys);
  pass &= fit[0] > 0.0;
  double worst_residual = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    const double predicted = fit[0] * xs[k] * xs[k] + fit[1] * xs[k] + fit[2];
    worst_residual = std::max(worst_residual, std::abs(predicted - ys[k]));
  }
  pass &= worst_residual < 0.05 * max_size;
  Verdict(4, pass,
          "quadratic coefficient " + std::to_string(fit[0]) +
              ", worst residual " + std::to_string(worst_residual));
  CHECK(pass);
}

TEST_CASE("criterion 5: coarse models of random perfect-recall games") {
  std::mt19937_64 seeder(0xABCD);
  const int kInstances = 200;
  bool pass = true;
  for (int k = 0; k < kInstances; ++k) {
    RandomClassicalGame instance =
        MakeRandomClassical(seeder(), 26, 2 + (k % 2));
    const ObsVariant variant =
        (k % 2) == 0 ? ObsVariant::kSet : ObsVariant::kSeq;
    ModificationResult result =
        CoarseModel(instance.game, instance.classical, variant);
    pass &= CheckObservationModel(result.game, *result.observations).holds;
    pass &= CheckCons(result.game, *result.observations, *result.classical)
                .holds;
    pass &= CheckAps(result.game, *result.observations).holds;
    pass &= CheckIso(result.game, *result.observations).holds;
    pass &= CheckStab(result.game, *result.observations).holds;

    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= result.game.num_players(); ++i) {
      parts.push_back(InducePartition(result.game, *result.observations, i));
    }
    PartitionValidation restricted = RestrictAllToActing(parts, result.game);
    pass &= restricted.ok() && *restricted.partition == *result.classical;

    const bool wbd_held = CheckWbd(instance.game, instance.classical).holds;
    if (variant == ObsVariant::kSet) {
      pass &= (result.added_nodes == 0) == wbd_held;
    } else {
      pass &= (result.added_nodes == 0) ==
              (wbd_held &&
               !HasTerminalMixing(instance.game, instance.classical));
    }
  }
  Verdict(5, pass, std::to_string(kInstances) + " coarse models checked");
  CHECK(pass);
}

TEST_CASE("criterion 6: conjecture harness finds no violations") {
  std::mt19937_64 seeder(0xFACADE);
  const int kInstances = 1000;
  int tested = 0;
  int attempts = 0;
  int violations = 0;
  while (tested < kInstances && attempts < 30 * kInstances) {
    ++attempts;
    RandomInstance instance =
        MakeRandomObservationModel(seeder(), 22, 2 + (attempts % 2));
    if (!CheckObservationModel(instance.game, instance.obs).holds) continue;
    ++tested;
    ConjectureReport report = VerifyConjecture(instance.game, instance.obs);
    if (!report.AllHold()) {
      ++violations;
      auto violates = [](const GameTree& g, const ObservationAssignment& o) {
        if (!CheckObservationModel(g, o).holds) return false;
        return !VerifyConjecture(g, o).AllHold();
      };
      auto [small_game, small_obs] =
          MinimizeInstance(instance.game, instance.obs, violates);
      const std::string path =
          "conjecture_counterexample_" + std::to_string(violations) + ".json";
      std::ofstream file(path);
      file << SerializeGameFile(small_game, nullptr, &small_obs);
      std::cout << "conjecture counterexample persisted to " << path
                << std::endl;
    }
  }
  const bool pass = tested >= kInstances && violations == 0;
  Verdict(6, pass,
          std::to_string(tested) + " observation-based models, " +
              std::to_string(violations) + " violations");
  CHECK(pass);
}

TEST_CASE("criterion 7: no-finest enumeration") {
  Timer timer;
  CorpusEntry entry = NoFinestGame();
  std::vector<InformationPartition> maximal =
      EnumerateMaxRefinements(entry.game, *entry.classical, 1);
  bool pass = maximal.size() >= 2;

  // Two incomparable maxima whose common refinement breaks.
  int first = -1, second = -1;
  for (size_t a = 0; a < maximal.size() && first < 0; ++a) {
    for (size_t b = a + 1; b < maximal.size(); ++b) {
      if (ComparePartitions(maximal[a].partition, maximal[b].partition) ==
          PartitionOrder::kIncomparable) {
        first = static_cast<int>(a);
        second = static_cast<int>(b);
        break;
      }
    }
  }
  pass &= first >= 0;
  if (first >= 0) {
    const Partition& p = maximal[first].partition;
    const Partition& q = maximal[second].partition;
    std::vector<std::set<History>> meet_blocks;
    for (const std::set<History>& a : p.blocks()) {
      for (const std::set<History>& b : q.blocks()) {
        std::set<History> cut;
        for (const History& h : a) {
          if (b.count(h)) cut.insert(h);
        }
        if (!cut.empty()) meet_blocks.push_back(std::move(cut));
      }
    }
    Partition meet(meet_blocks);
    ObservationAssignment meet_obs = ObsFromPartition(
        entry.game, {ToLabeledBlocks(meet)}, ObsVariant::kSet);
    const bool cons = CheckCons(entry.game, meet_obs, *entry.classical).holds;
    const bool stab = CheckStab(entry.game, meet_obs).holds;
    pass &= !(cons && stab);
  }
  const double elapsed = timer.Seconds();
  pass &= elapsed < 30.0;
  Verdict(7, pass,
          std::to_string(maximal.size()) + " maximal partitions, " +
              std::to_string(elapsed) + "s");
  CHECK(pass);
}

TEST_CASE("criterion 8: thick information sets are forced") {
  CorpusEntry entry = ThickInfosetGame();
  std::vector<InformationPartition> all =
      EnumerateStablePartitions(entry.game, *entry.classical, 1);
  bool pass = !all.empty();
  for (const InformationPartition& p : all) {
    bool thick = false;
    for (const std::set<History>& block : p.partition.blocks()) {
      for (const History& h : block) {
        auto parent = GameTree::Parent(h);
        if (parent && block.count(parent->first)) thick = true;
      }
    }
    pass &= thick;
    ObservationAssignment obs = ObsFromPartition(
        entry.game, {ToLabeledBlocks(p.partition)}, ObsVariant::kSet);
    pass &= !CanDeduce(entry.game, obs, 1, HistoryLengthFeature()).holds;
  }
  Verdict(8, pass,
          std::to_string(all.size()) +
              " valid partitions, all thick, length never deducible");
  CHECK(pass);
}

TEST_CASE("criterion 9: perfect recall checker vs the textbook oracle") {
  bool pass = true;
  {
    CorpusEntry good = UnfairMatchingPennies();
    pass &= CheckPerfectRecall(good.game, *good.classical).holds ==
            gamecheck_test::TextbookPerfectRecall(good.game, *good.classical);
    pass &= CheckPerfectRecall(good.game, *good.classical).holds;
    CorpusEntry broken = UnfairMatchingPenniesBroken();
    pass &=
        CheckPerfectRecall(broken.game, *broken.classical).holds ==
        gamecheck_test::TextbookPerfectRecall(broken.game, *broken.classical);
    pass &= !CheckPerfectRecall(broken.game, *broken.classical).holds;
  }

  std::mt19937_64 seeder(0xDEC0DE);
  const int kInstances = 500;
  int disagreements = 0;
  for (int k = 0; k < kInstances; ++k) {
    RandomClassicalGame instance =
        MakeRandomClassical(seeder(), 24, 2 + (k % 2));
    ClassicalPartition classical = instance.classical;
    if (k % 2 == 1) {
      // Merge two action-compatible blocks of player 1 to sometimes break
      // recall; the two verdicts must still agree.
      std::vector<std::set<History>> p1(
          classical.Blocks(1).begin(), classical.Blocks(1).end());
      for (size_t a = 0; a < p1.size(); ++a) {
        bool merged = false;
        for (size_t b = a + 1; b < p1.size(); ++b) {
          if (instance.game.Actions(*p1[a].begin()) ==
              instance.game.Actions(*p1[b].begin())) {
            p1[a].insert(p1[b].begin(), p1[b].end());
            p1.erase(p1.begin() + b);
            merged = true;
            break;
          }
        }
        if (merged) break;
      }
      std::vector<std::vector<std::set<History>>> blocks;
      blocks.push_back(p1);
      for (Player i = 2; i <= instance.game.num_players(); ++i) {
        blocks.emplace_back(classical.Blocks(i).begin(),
                            classical.Blocks(i).end());
      }
      classical =
          ClassicalPartition(instance.game.num_players(), std::move(blocks));
    }
    const bool checker = CheckPerfectRecall(instance.game, classical).holds;
    const bool oracle =
        gamecheck_test::TextbookPerfectRecall(instance.game, classical);
    if (checker != oracle) ++disagreements;
  }
  pass &= disagreements == 0;
  Verdict(9, pass,
          std::to_string(kInstances) + " random classical games, " +
              std::to_string(disagreements) + " disagreements");
  CHECK(pass);
}

TEST_CASE("criterion 10: public-state closure matches the brute oracle") {
  bool pass = true;
  for (const std::string name : {"mini_poker", "unfair_mp"}) {
    CorpusEntry entry = GetCorpusEntry(name);
    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= 2; ++i) {
      parts.push_back(
          InducePartition(entry.game, entry.observations.at("coarse:set"), i));
    }
    pass &= PublicStates(entry.game, parts) ==
            gamecheck_test::PublicStatesBruteForce(entry.game, parts);
  }
  // The mini-poker golden is stable across runs.
  {
    CorpusEntry entry = MiniPoker();
    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= 2; ++i) {
      parts.push_back(
          InducePartition(entry.game, entry.observations.at("coarse:set"), i));
    }
    PublicPartition once = PublicStates(entry.game, parts);
    PublicPartition twice = PublicStates(entry.game, parts);
    pass &= once == twice;
    const std::vector<std::string> line = {"", "j1", "j1 j2", "j1 j2 bet",
                                           "j1 j2 bet bet"};
    std::set<int> states;
    for (const std::string& h : line) {
      states.insert(*once.BlockIndexOf(HistoryFromString(h)));
    }
    pass &= states.size() == 3;
  }

  std::mt19937_64 seeder(0xBEEF);
  const int kInstances = 200;
  for (int k = 0; k < kInstances; ++k) {
    RandomInstance instance =
        MakeRandomInstance(seeder(), 24, 2 + (k % 2), 0.5);
    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= instance.game.num_players(); ++i) {
      parts.push_back(InducePartition(instance.game, instance.obs, i));
    }
    pass &= PublicStates(instance.game, parts) ==
            gamecheck_test::PublicStatesBruteForce(instance.game, parts);
  }
  Verdict(10, pass,
          "corpus plus " + std::to_string(kInstances) + " random instances");
  CHECK(pass);
}
