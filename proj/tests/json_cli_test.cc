#include <cstdio>
#include <random>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gamecheck/cli_commands.h"
#include "gamecheck/corpus.h"
#include "gamecheck/dot_export.h"
#include "gamecheck/game_json.h"

using namespace gamecheck;

namespace {

int Run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int code = GamecheckMain(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string WriteTemp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/gamecheck_test_" + name;
  std::ofstream file(path);
  file << content;
  return path;
}

}  // namespace

TEST_CASE("game files round trip bit-exactly") {
  for (const std::string name :
       {"sneaking", "sneaking_modified", "iso_fail", "no_finest",
        "thick_infoset", "padding(3)", "unfair_mp", "unfair_mp_broken",
        "betting", "mini_poker"}) {
    CorpusEntry entry = GetCorpusEntry(name);
    const ObservationAssignment& obs = entry.observations.begin()->second;
    std::string text =
        SerializeGameFile(entry.game, &*entry.classical, &obs);
    GameFileResult parsed = ParseGameFile(text);
    REQUIRE(parsed.ok());
    CHECK(parsed.file->game == entry.game);
    CHECK(*parsed.file->classical == *entry.classical);
    CHECK(*parsed.file->observations == obs);
    std::string again = SerializeGameFile(
        parsed.file->game, &*parsed.file->classical,
        &*parsed.file->observations);
    CHECK(text == again);
  }
}

TEST_CASE("unknown keys are rejected") {
  GameFileResult result = ParseGameFile(
      R"({"players": 1, "nodes": [{"h": "", "utilities": [0]}], "extra": 1})");
  CHECK_FALSE(result.ok());
  result = ParseGameFile(
      R"({"players": 1, "nodes": [{"h": "", "utilities": [0], "note": "x"}]})");
  CHECK_FALSE(result.ok());
}

TEST_CASE("parse errors carry the full violation list") {
  GameFileResult result = ParseGameFile(
      R"({"players": 2,
          "nodes": [{"h": "", "player": "1"},
                    {"h": "a b", "utilities": [0, 0]},
                    {"h": "a", "utilities": [1]}]})");
  CHECK_FALSE(result.ok());
  CHECK(result.errors.size() >= 2);
}

TEST_CASE("malformed JSON is a parse error, not a crash") {
  GameFileResult result = ParseGameFile("{nope");
  CHECK_FALSE(result.ok());
}

TEST_CASE("cli: the sneaking checks drive the exit code") {
  std::string out;
  CHECK(Run({"check", "corpus:sneaking", "--obs", "builtin:iso+cl",
             "--variant", "set", "--properties", "cons"},
            &out) == 1);
  CHECK(out.find("CONS: FAILS") != std::string::npos);
  CHECK(out.find("witness") != std::string::npos);

  CHECK(Run({"check", "corpus:sneaking_modified", "--obs", "builtin:iso+cl",
             "--variant", "seq", "--properties", "cons,aps,iso,stab"},
            &out) == 0);
  CHECK(out.find("CONS: holds") != std::string::npos);
  CHECK(out.find("STAB: holds") != std::string::npos);
}

TEST_CASE("cli: malformed input exits 2") {
  const std::string path = WriteTemp("bad.json", "{broken");
  CHECK(Run({"check", path, "--properties", "cons"}) == 2);
  CHECK(Run({"check", "corpus:absent", "--properties", "cons"}) == 2);
  CHECK(Run({"check", "corpus:sneaking", "--properties", "unknown_prop"}) ==
        2);
  CHECK(Run({"bogus-subcommand"}) == 2);
}

TEST_CASE("cli: transform stabilize reports the dummy count") {
  std::string out, err;
  const std::string out_path = "/tmp/gamecheck_test_stabilized.json";
  CHECK(Run({"transform", "corpus:sneaking", "stabilize", "--obs", "iso+cl",
             "--out", out_path},
            &out, &err) == 0);
  CHECK(err.find("added_nodes=1") != std::string::npos);
  std::ifstream file(out_path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  GameFileResult parsed = ParseGameFile(buffer.str());
  REQUIRE(parsed.ok());
  CHECK(parsed.file->game.histories().size() == 14);  // 13 + 1 dummy
  std::remove(out_path.c_str());
}

TEST_CASE("cli: transforming an already-stable input is canonical identity") {
  std::string first, second, err;
  CHECK(Run({"transform", "corpus:sneaking_modified", "stabilize", "--obs",
             "iso+cl"},
            &first, &err) == 0);
  CHECK(err.find("added_nodes=0") != std::string::npos);
  // Re-serializing the same model gives the same bytes.
  CorpusEntry entry = SneakingGameModified();
  const ObservationAssignment& obs = entry.observations.at("iso+cl:seq");
  CHECK(first == SerializeGameFile(entry.game, nullptr, &obs));
}

TEST_CASE("cli: transform writes the embedding map") {
  const std::string embedding_path = "/tmp/gamecheck_test_embedding.json";
  std::string out, err;
  CHECK(Run({"transform", "corpus:sneaking", "stabilize", "--obs", "iso+cl",
             "--embedding", embedding_path},
            &out, &err) == 0);
  std::ifstream file(embedding_path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  // The shifted attack node maps below the inserted dummy.
  CHECK(text.find("\"sloppy approach\": \"sloppy approach noop#1\"") !=
        std::string::npos);
  CHECK(text.find("\"alert approach\": \"alert approach\"") !=
        std::string::npos);
  std::remove(embedding_path.c_str());
}

TEST_CASE("cli: repair-wbd and coarse run end to end") {
  std::string out, err;
  CHECK(Run({"transform", "corpus:sneaking", "repair-wbd"}, &out, &err) == 0);
  CHECK(err.find("added_nodes=1") != std::string::npos);
  CHECK(Run({"transform", "corpus:unfair_mp", "coarse", "--variant", "set"},
            &out, &err) == 0);
  CHECK(err.find("added_nodes=0") != std::string::npos);
  GameFileResult parsed = ParseGameFile(out);
  REQUIRE(parsed.ok());
  REQUIRE(parsed.file->observations.has_value());
  CHECK(Run({"transform", "corpus:unfair_mp_broken", "coarse"}, &out, &err) ==
        2);
}

TEST_CASE("cli: show renders trees, partitions and public states") {
  std::string out;
  // A one-leaf game file.
  const std::string path = WriteTemp(
      "single.json", R"({"players": 1, "nodes": [{"h": "", "utilities": [0]}]})");
  CHECK(Run({"show", path, "tree"}, &out) == 0);
  CHECK(out.find("digraph") != std::string::npos);
  CHECK(out.find("n0") != std::string::npos);
  CHECK(out.find("n1") == std::string::npos);  // exactly one node

  CHECK(Run({"show", "corpus:iso_fail", "partitions", "--player", "1",
             "--obs", "iso+cl", "--variant", "set"},
            &out) == 0);
  CHECK(out.find("'go'") != std::string::npos);
  CHECK(out.find("'go y v'") != std::string::npos);

  CHECK(Run({"show", "corpus:mini_poker", "public", "--obs", "coarse",
             "--variant", "set"},
            &out) == 0);
  // Frozen closure-oracle golden: the 31-history game collapses to 15
  // public states, with the whole pre-betting region forming one.
  CHECK(out.find("public states: 15") != std::string::npos);

  const std::string dot_path = "/tmp/gamecheck_test_clusters.dot";
  CHECK(Run({"show", "corpus:iso_fail", "partitions", "--player", "1",
             "--obs", "iso+cl", "--variant", "set", "--dot", dot_path},
            &out) == 0);
  std::ifstream dot(dot_path);
  std::stringstream buffer;
  buffer << dot.rdbuf();
  CHECK(buffer.str().find("subgraph cluster_") != std::string::npos);
  std::remove(dot_path.c_str());
}

TEST_CASE("cli: check writes the machine report when asked") {
  const std::string report_path = "/tmp/gamecheck_test_report.json";
  std::string out;
  CHECK(Run({"check", "corpus:sneaking", "--obs", "builtin:iso+cl",
             "--variant", "set", "--properties", "cons,aps", "--out",
             report_path},
            &out) == 1);
  std::ifstream file(report_path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string json_text = buffer.str();
  CHECK(json_text.find("\"property\": \"CONS\"") != std::string::npos);
  CHECK(json_text.find("\"verdict\": \"fails\"") != std::string::npos);
  CHECK(json_text.find("\"witness\"") != std::string::npos);
  std::remove(report_path.c_str());
}

TEST_CASE("cli: GAMECHECK_SEED sets the default harness seed") {
  std::string with_env, with_flag;
  setenv("GAMECHECK_SEED", "424242", 1);
  CHECK(Run({"harness", "--lemma-stab", "--count", "10", "--max-nodes", "12"},
            &with_env) == 0);
  unsetenv("GAMECHECK_SEED");
  CHECK(Run({"harness", "--lemma-stab", "--count", "10", "--max-nodes", "12",
             "--seed", "424242"},
            &with_flag) == 0);
  CHECK(with_env == with_flag);
}

TEST_CASE("cli: harness supports tiny deterministic runs") {
  std::string out;
  CHECK(Run({"harness", "--lemma-stab", "--count", "0"}, &out) == 0);
  CHECK(out.find("0 disagreements") != std::string::npos);

  CHECK(Run({"harness", "--lemma-stab", "--count", "25", "--seed", "7",
             "--max-nodes", "16"},
            &out) == 0);
  CHECK(out.find("25 instances, 0 disagreements") != std::string::npos);

  std::string repeat;
  CHECK(Run({"harness", "--lemma-stab", "--count", "25", "--seed", "7",
             "--max-nodes", "16"},
            &repeat) == 0);
  CHECK(out == repeat);

  CHECK(Run({"harness", "--conjecture", "--count", "10", "--seed", "3",
             "--max-nodes", "14"},
            &out) == 0);
  CHECK(out.find("10 instances, 0 violations") != std::string::npos);

  CHECK(Run({"harness", "--enumerate", "corpus:no_finest"}, &out) == 0);
  CHECK(out.find("maximal partitions:") != std::string::npos);
}

TEST_CASE("mutated game files never crash the parser") {
  CorpusEntry entry = SneakingGame();
  const ObservationAssignment& obs = entry.observations.at("iso+cl:seq");
  const std::string base =
      SerializeGameFile(entry.game, &*entry.classical, &obs);
  std::mt19937_64 rng(12345);
  for (int round = 0; round < 200; ++round) {
    std::string mutated = base;
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      const size_t pos = rng() % mutated.size();
      switch (rng() % 3) {
        case 0:
          mutated.erase(pos, 1);
          break;
        case 1:
          mutated[pos] = static_cast<char>('!' + rng() % 90);
          break;
        default:
          mutated.insert(pos, 1, static_cast<char>('!' + rng() % 90));
      }
    }
    GameFileResult result = ParseGameFile(mutated);  // must not crash
    if (result.ok()) {
      // A still-valid mutation must re-serialize cleanly.
      CHECK_FALSE(SerializeGameFile(result.file->game, nullptr, nullptr)
                      .empty());
    } else {
      CHECK_FALSE(result.errors.empty());
    }
  }
}

TEST_CASE("dot export clusters blocks") {
  CorpusEntry entry = ThickInfosetGame();
  InformationPartition p =
      InducePartition(entry.game, entry.observations.at("thick:set"), 1);
  std::string dot = ExportDot(entry.game, &p.partition, "thick");
  CHECK(dot.find("subgraph cluster_0") != std::string::npos);
  CHECK(dot.find("label=\"thick\"") != std::string::npos);
}

// Exit code 3 signals an internal invariant violation (for example the
// stable-modification size bound failing). Those invariants are asserted
// inside the library and cannot be triggered through well-formed inputs; the
// mapping is exercised here through the exception type itself.
TEST_CASE("internal errors carry a distinct type") {
  CHECK_THROWS_AS(throw InternalError("boom"), std::logic_error);
}
