#include "gamecheck/cli_commands.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "gamecheck/corpus.h"
#include "gamecheck/dot_export.h"
#include "gamecheck/game_json.h"
#include "gamecheck/partitions.h"
#include "gamecheck/properties.h"
#include "gamecheck/transforms.h"

namespace gamecheck {

namespace {

struct LoadedInput {
  GameTree game;
  std::optional<ClassicalPartition> classical;
  std::optional<ObservationAssignment> file_obs;
  std::map<std::string, ObservationAssignment> named_obs;
};

LoadedInput LoadInput(const std::string& input_ref) {
  if (input_ref.rfind("corpus:", 0) == 0) {
    CorpusEntry entry = GetCorpusEntry(input_ref.substr(7));
    return LoadedInput{std::move(entry.game), std::move(entry.classical),
                       std::nullopt, std::move(entry.observations)};
  }
  std::ifstream in(input_ref);
  if (!in) throw std::invalid_argument("cannot open file '" + input_ref + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  GameFileResult parsed = ParseGameFile(buffer.str());
  if (!parsed.ok()) {
    std::string all;
    for (const std::string& e : parsed.errors) all += e + "\n";
    throw std::invalid_argument("invalid game file '" + input_ref + "':\n" + all);
  }
  return LoadedInput{std::move(parsed.file->game),
                     std::move(parsed.file->classical),
                     std::move(parsed.file->observations),
                     {}};
}

ObsVariant ParseVariant(const std::string& name) {
  if (name == "set") return ObsVariant::kSet;
  if (name == "seq") return ObsVariant::kSeq;
  throw std::invalid_argument("variant must be 'set' or 'seq'");
}

ObservationAssignment ResolveObs(const LoadedInput& input,
                                 const std::string& name, ObsVariant variant) {
  if (name == "file") {
    if (!input.file_obs) {
      throw std::invalid_argument("input carries no observations");
    }
    return *input.file_obs;
  }
  auto require_classical = [&input]() -> const ClassicalPartition& {
    if (!input.classical) {
      throw std::invalid_argument(
          "builtin observations need classical_infosets");
    }
    return *input.classical;
  };
  if (name == "builtin:cl") {
    return ClassicalObs(input.game, require_classical(), false, variant);
  }
  if (name == "builtin:cl+turn") {
    return ClassicalObs(input.game, require_classical(), true, variant);
  }
  if (name == "builtin:iso") return IsoObs(input.game, variant);
  if (name == "builtin:iso+cl") {
    return IsoPlusClassical(input.game, require_classical(), variant);
  }
  const std::string suffix = variant == ObsVariant::kSet ? ":set" : ":seq";
  if (auto it = input.named_obs.find(name + suffix);
      it != input.named_obs.end()) {
    return it->second;
  }
  if (auto it = input.named_obs.find(name); it != input.named_obs.end()) {
    return it->second;
  }
  throw std::invalid_argument("unknown observation assignment '" + name + "'");
}

std::vector<std::string> SplitCsv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteOrPrint(const std::string& content, const std::string& path,
                  std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::invalid_argument("cannot write '" + path + "'");
  file << content;
}

int RunCheck(const LoadedInput& input, const std::string& properties_csv,
             const std::string& obs_name, ObsVariant variant,
             const std::string& out_path, std::ostream& out) {
  std::optional<ObservationAssignment> obs;
  std::vector<PropertyReport> reports;
  for (const std::string& property : SplitCsv(properties_csv)) {
    auto observation = [&]() -> const ObservationAssignment& {
      if (!obs) obs = ResolveObs(input, obs_name, variant);
      return *obs;
    };
    auto classical = [&]() -> const ClassicalPartition& {
      if (!input.classical) {
        throw std::invalid_argument("property '" + property +
                                    "' needs classical_infosets");
      }
      return *input.classical;
    };
    if (property == "cons") {
      reports.push_back(CheckCons(input.game, observation(), classical()));
    } else if (property == "aps") {
      reports.push_back(CheckAps(input.game, observation()));
    } else if (property == "iso") {
      reports.push_back(CheckIso(input.game, observation()));
    } else if (property == "tsip") {
      reports.push_back(CheckTsip(input.game, observation()));
    } else if (property == "stab") {
      reports.push_back(CheckStab(input.game, observation()));
    } else if (property == "wbd") {
      reports.push_back(CheckWbd(input.game, classical()));
    } else if (property == "recall") {
      reports.push_back(CheckPerfectRecall(input.game, classical()));
    } else if (property == "obsmodel") {
      reports.push_back(CheckObservationModel(input.game, observation()));
    } else {
      throw std::invalid_argument("unknown property '" + property + "'");
    }
  }
  out << ReportsToText(reports);
  if (!out_path.empty()) {
    WriteOrPrint(ReportsToJson(reports), out_path, out);
  }
  for (const PropertyReport& r : reports) {
    if (!r.holds) return 1;
  }
  return 0;
}

int RunTransform(const LoadedInput& input, const std::string& op,
                 ObsVariant variant, const std::string& obs_name,
                 const std::string& out_path,
                 const std::string& embedding_path, std::ostream& out,
                 std::ostream& err) {
  ModificationResult result{input.game, std::nullopt, std::nullopt, {}, 0};
  int original_size = static_cast<int>(input.game.histories().size());
  if (op == "repair-wbd") {
    if (!input.classical) {
      throw std::invalid_argument("repair-wbd needs classical_infosets");
    }
    result = RepairWbd(input.game, *input.classical);
  } else if (op == "stabilize") {
    ObservationAssignment obs = ResolveObs(input, obs_name, ObsVariant::kSeq);
    int budget = 0;
    for (Player i = 1; i <= input.game.num_players(); ++i) {
      budget += InducePartition(input.game, obs, i).partition.num_blocks();
    }
    result = StableModification(input.game, obs);
    err << "size_bound: " << result.game.histories().size()
        << " <= " << original_size * (1 + budget) << " : ok\n";
  } else if (op == "coarse") {
    if (!input.classical) {
      throw std::invalid_argument("coarse needs classical_infosets");
    }
    result = CoarseModel(input.game, *input.classical, variant);
  } else {
    throw std::invalid_argument("unknown transform '" + op + "'");
  }

  const ClassicalPartition* classical =
      result.classical ? &*result.classical : nullptr;
  const ObservationAssignment* observations =
      result.observations ? &*result.observations : nullptr;
  WriteOrPrint(SerializeGameFile(result.game, classical, observations),
               out_path, out);
  if (!embedding_path.empty()) {
    WriteOrPrint(SerializeEmbedding(result.embedding), embedding_path, out);
  }
  err << "added_nodes=" << result.added_nodes << "\n";
  err << "size: " << original_size << " -> " << result.game.histories().size()
      << "\n";
  return 0;
}

int RunShow(const LoadedInput& input, const std::string& what, Player player,
            const std::string& obs_name, ObsVariant variant,
            const std::string& dot_path, std::ostream& out) {
  if (what == "tree") {
    std::string dot = ExportDot(input.game, nullptr, "");
    if (!dot_path.empty()) {
      WriteOrPrint(dot, dot_path, out);
    } else {
      out << dot;
    }
    return 0;
  }
  ObservationAssignment obs = ResolveObs(input, obs_name, variant);
  if (what == "partitions") {
    InformationPartition part = InducePartition(input.game, obs, player);
    out << "player " << player << ": " << part.partition.num_blocks()
        << " blocks\n";
    for (int b = 0; b < part.partition.num_blocks(); ++b) {
      out << "  [" << (part.partition.BlockLabel(b).empty()
                           ? "root"
                           : part.partition.BlockLabel(b))
          << "]";
      for (const History& h : part.partition.Block(b)) {
        out << " '" << HistoryToString(h) << "'";
      }
      out << "\n";
    }
    if (!dot_path.empty()) {
      WriteOrPrint(ExportDot(input.game, &part.partition,
                             "player " + std::to_string(player)),
                   dot_path, out);
    }
    return 0;
  }
  if (what == "public") {
    std::vector<InformationPartition> parts;
    for (Player i = 1; i <= input.game.num_players(); ++i) {
      parts.push_back(InducePartition(input.game, obs, i));
    }
    PublicPartition pub = PublicStates(input.game, parts);
    out << "public states: " << pub.num_blocks() << "\n";
    for (int b = 0; b < pub.num_blocks(); ++b) {
      out << "  [" << (pub.BlockLabel(b).empty() ? "root" : pub.BlockLabel(b))
          << "]";
      for (const History& h : pub.Block(b)) {
        out << " '" << HistoryToString(h) << "'";
      }
      out << "\n";
    }
    if (!dot_path.empty()) {
      WriteOrPrint(ExportDot(input.game, &pub, "public states"), dot_path,
                   out);
    }
    return 0;
  }
  throw std::invalid_argument("unknown show mode '" + what + "'");
}

void PersistCounterexample(const GameTree& game,
                           const ObservationAssignment& obs,
                           const std::string& out_dir, int index,
                           std::ostream& err) {
  const std::string path =
      out_dir + "/counterexample_" + std::to_string(index) + ".json";
  std::ofstream file(path);
  if (file) {
    file << SerializeGameFile(game, nullptr, &obs);
    err << "counterexample written to " << path << "\n";
  }
}

int RunHarness(bool lemma, bool conjecture, const std::string& enumerate_spec,
               std::uint64_t seed, int count, int max_nodes, Player player,
               const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  std::mt19937_64 seeder(seed);
  int violations = 0;
  if (lemma) {
    for (int k = 0; k < count; ++k) {
      const std::uint64_t instance_seed = seeder();
      const int players = 2 + (k % 2);
      RandomInstance instance =
          MakeRandomInstance(instance_seed, max_nodes, players, 0.5);
      LemmaStabReport report = VerifyLemmaStab(instance.game, instance.obs);
      if (!report.consistent) {
        ++violations;
        auto disagrees = [](const GameTree& g, const ObservationAssignment& o) {
          return !VerifyLemmaStab(g, o).consistent;
        };
        auto [small_game, small_obs] =
            MinimizeInstance(instance.game, instance.obs, disagrees);
        PersistCounterexample(small_game, small_obs, out_dir, violations, err);
      }
    }
    out << "lemma-stab: " << count << " instances, " << violations
        << " disagreements\n";
  }
  if (conjecture) {
    int tested = 0;
    int attempts = 0;
    const int attempt_cap = 30 * count + 100;
    while (tested < count && attempts < attempt_cap) {
      ++attempts;
      const std::uint64_t instance_seed = seeder();
      const int players = 2 + (attempts % 2);
      RandomInstance instance =
          MakeRandomObservationModel(instance_seed, max_nodes, players);
      if (!CheckObservationModel(instance.game, instance.obs).holds) continue;
      ++tested;
      ConjectureReport report = VerifyConjecture(instance.game, instance.obs);
      if (!report.AllHold()) {
        ++violations;
        err << "conjecture violation: " << report.detail << "\n";
        auto violates = [](const GameTree& g, const ObservationAssignment& o) {
          if (!CheckObservationModel(g, o).holds) return false;
          return !VerifyConjecture(g, o).AllHold();
        };
        auto [small_game, small_obs] =
            MinimizeInstance(instance.game, instance.obs, violates);
        PersistCounterexample(small_game, small_obs, out_dir, violations, err);
      }
    }
    out << "conjecture: " << tested << " instances, " << violations
        << " violations\n";
  }
  if (!enumerate_spec.empty()) {
    LoadedInput input = LoadInput(enumerate_spec);
    if (!input.classical) {
      throw std::invalid_argument("--enumerate needs classical_infosets");
    }
    std::vector<InformationPartition> maximal =
        EnumerateMaxRefinements(input.game, *input.classical, player);
    out << "maximal partitions: " << maximal.size() << "\n";
    for (size_t m = 0; m < maximal.size(); ++m) {
      out << "#" << m << ":";
      for (const std::set<History>& block : maximal[m].partition.blocks()) {
        out << " {";
        bool first = true;
        for (const History& h : block) {
          if (!first) out << ", ";
          out << "'" << HistoryToString(h) << "'";
          first = false;
        }
        out << "}";
      }
      out << "\n";
    }
  }
  return violations == 0 ? 0 : 1;
}

}  // namespace

int GamecheckMain(std::vector<std::string> args, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"observation-based analysis of imperfect-information games"};
  app.require_subcommand(1);

  std::string file, properties, obs_name = "file", variant_name = "set";
  std::string out_path, embedding_path, op, what = "tree", dot_path;
  std::string enumerate_spec, out_dir = ".";
  int player = 1;
  int count = 1000;
  int max_nodes = 30;
  std::uint64_t seed = 1;
  if (const char* env_seed = std::getenv("GAMECHECK_SEED")) {
    seed = std::strtoull(env_seed, nullptr, 10);
  }
  bool lemma = false, conjecture = false;

  CLI::App* check = app.add_subcommand("check", "decide model properties");
  check->add_option("file", file)->required();
  check->add_option("--properties", properties)->required();
  check->add_option("--obs", obs_name);
  check->add_option("--variant", variant_name);
  check->add_option("--player", player);
  check->add_option("--out", out_path);

  CLI::App* transform = app.add_subcommand("transform", "modify a model");
  transform->add_option("file", file)->required();
  transform->add_option("op", op)->required();
  transform->add_option("--obs", obs_name);
  transform->add_option("--variant", variant_name);
  transform->add_option("--out", out_path);
  transform->add_option("--embedding", embedding_path);

  CLI::App* show = app.add_subcommand("show", "render trees and partitions");
  show->add_option("file", file)->required();
  show->add_option("what", what)->required();
  show->add_option("--player", player);
  show->add_option("--obs", obs_name);
  show->add_option("--variant", variant_name);
  show->add_option("--dot", dot_path);

  CLI::App* harness = app.add_subcommand("harness", "randomized verification");
  harness->add_flag("--lemma-stab", lemma);
  harness->add_flag("--conjecture", conjecture);
  harness->add_option("--enumerate", enumerate_spec);
  harness->add_option("--seed", seed);
  harness->add_option("--count", count);
  harness->add_option("--max-nodes", max_nodes);
  harness->add_option("--player", player);
  harness->add_option("--out-dir", out_dir);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(check)) {
      LoadedInput input = LoadInput(file);
      return RunCheck(input, properties, obs_name,
                      ParseVariant(variant_name), out_path, out);
    }
    if (app.got_subcommand(transform)) {
      LoadedInput input = LoadInput(file);
      return RunTransform(input, op, ParseVariant(variant_name), obs_name,
                          out_path, embedding_path, out, err);
    }
    if (app.got_subcommand(show)) {
      LoadedInput input = LoadInput(file);
      return RunShow(input, what, player, obs_name, ParseVariant(variant_name),
                     dot_path, out);
    }
    if (app.got_subcommand(harness)) {
      return RunHarness(lemma, conjecture, enumerate_spec, seed, count,
                        max_nodes, player, out_dir, out, err);
    }
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace gamecheck
