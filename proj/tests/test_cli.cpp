#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "generator.hpp"
#include "versa/adapters.hpp"
#include "versa/correction.hpp"
#include "versa/corruptor.hpp"
#include "versa/io.hpp"

using namespace versa;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = VERSA_FIXTURE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "versa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "versa_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string corpus(const std::string& name) {
  return (kFixtures / "corpus" / (name + "_p1.versa.jsonl")).string();
}

std::size_t lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("usage") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"verify"}).code == 1);  // no inputs
  CHECK(run({"verify", corpus("case1"), "--window", "0"}).code == 1);
}

TEST_CASE("verify a clean stream") {
  const auto dir = fresh_dir("clean");
  auto r = run({"verify", corpus("clean_chain"), "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "clean_chain p1: 12 events, 0 exceptions, 0 unresolved\n");
  CHECK(read_text_file(dir / "clean_chain_p1.exceptions.jsonl").empty());
  CHECK(read_stream(dir / "clean_chain_p1.versa.jsonl").events ==
        read_stream(corpus("clean_chain")).events);
  CHECK(read_text_file(dir / "exception_stats.csv").starts_with("Provider,League,Season,Match,Total"));
}

TEST_CASE("verify repairs a swapped Block") {
  const auto dir = fresh_dir("case1");
  auto r = run({"correct", "--in", corpus("case1"), "--out-dir", dir.string(), "--format", "jsonl"});
  CHECK(r.code == 0);
  const auto recs = parse_records(read_text_file(dir / "case1_p1.exceptions.jsonl"));
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].handler_applied == AppliedHandler::Reorder);
  CHECK(fs::exists(dir / "exception_stats.jsonl"));
}

TEST_CASE("unresolved exceptions exit with 2") {
  const auto dir = fresh_dir("unresolved");
  auto r = run({"verify", (kFixtures / "unresolved" / "stray_block_p1.versa.jsonl").string(), "--out-dir",
                dir.string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("1 unresolved") != std::string::npos);
}

TEST_CASE("hard errors exit with 1") {
  const auto dir = fresh_dir("hard");
  SUBCASE("missing file") {
    auto r = run({"verify", (dir / "nope_p1.versa.jsonl").string(), "--out-dir", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("nope_p1.versa.jsonl") != std::string::npos);
  }
  SUBCASE("unmapped provider actions are listed") {
    const auto raw = dir / "raw.json";
    write_text_file(raw, R"({"match_id":"u","period":1,"events":[
      {"id":1,"matchPeriod":1,"eventSec":0.5,"teamId":"H","playerId":"H9","eventName":"simple pass","posX":50,"posY":50},
      {"id":2,"matchPeriod":1,"eventSec":1.5,"teamId":"H","playerId":"H9","eventName":"launch","posX":50,"posY":50},
      {"id":3,"matchPeriod":1,"eventSec":2.5,"teamId":"H","playerId":"H9","eventName":"hand pass","posX":50,"posY":50}]})");
    auto r = run({"convert", "--in", raw.string(), "--profile", "wyscout", "--out", (dir / "x.jsonl").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("hand pass") != std::string::npos);
    CHECK(r.err.find("launch") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "x.jsonl"));
  }
  SUBCASE("unknown profile") {
    auto r = run({"verify", corpus("case1"), "--profile", "nobody", "--out-dir", dir.string()});
    CHECK(r.code == 1);
  }
}

TEST_CASE("convert then verify") {
  const auto dir = fresh_dir("convert");
  const auto half = test::generate_half(31, "cv", 1, {.min_events = 200});
  const auto raw = dir / "cv.json";
  write_text_file(raw, to_provider_json(half, load_profile("statsbomb")));
  auto c = run({"convert", "--in", raw.string(), "--profile", "statsbomb-like", "--out-dir", dir.string()});
  REQUIRE(c.code == 0);
  const auto converted = read_stream(dir / "cv_p1.versa.jsonl");
  CHECK(action_sequence(converted) == action_sequence(half));

  // Verify can ingest provider files directly too.
  auto v = run({"verify", raw.string(), "--profile", "statsbomb", "--out-dir", (dir / "v").string()});
  CHECK(v.code == 0);

  auto s = run({"simplify", "--in", (dir / "cv_p1.versa.jsonl").string(), "--out",
                (dir / "cv_simple_p1.versa.jsonl").string()});
  CHECK(s.code == 0);
  CHECK(read_stream(dir / "cv_simple_p1.versa.jsonl").format_variant == FormatVariant::SimplifiedVersa);
}

TEST_CASE("corrupt, compare and report") {
  const auto dir = fresh_dir("pipeline");
  const auto half = test::generate_half(41, "pl", 1);
  const auto clean = dir / "clean" / "pl_p1.versa.jsonl";
  write_stream(half, clean);
  const auto plan = dir / "plan.json";
  write_text_file(plan, R"({"seed": 1, "drop_pass_received": 1.0})");
  const auto bad = dir / "bad" / "pl_p1.versa.jsonl";
  fs::create_directories(bad.parent_path());

  auto c = run({"corrupt", "--plan", plan.string(), "--in", clean.string(), "--out", bad.string(), "--truth",
                (dir / "truth.jsonl").string(), "--seed", "5"});
  REQUIRE(c.code == 0);
  CHECK(lines(read_text_file(dir / "truth.jsonl")) > 10);

  auto raw = run({"compare", "--a", clean.string(), "--b", bad.string()});
  REQUIRE(raw.code == 0);
  CHECK(raw.out.starts_with("Match,Period,Length A,Length B,Edit Distance,S_edit\npl,1,"));
  CHECK(raw.out.find(",1.000000\n") == std::string::npos);

  auto fixed = run({"compare", "--a", clean.string(), "--b", bad.string(), "--correct", "--format", "jsonl"});
  REQUIRE(fixed.code == 0);
  CHECK(fixed.out.find(R"("edit_distance":0,"edit_similarity":1.0)") != std::string::npos);

  auto mismatch = run({"compare", "--a", clean.string(), "--b", clean.string(), bad.string()});
  CHECK(mismatch.code == 1);

  auto rep = run({"report", bad.string(), "--provider", "thin", "--league", "L", "--season", "2022"});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("\nthin,L,2022,1,") != std::string::npos);
  CHECK(rep.out.find("PassReceived (") != std::string::npos);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
  const auto dir = fresh_dir("determinism");
  std::vector<std::string> inputs;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto half = test::generate_half(seed, "det" + std::to_string(seed), 1, {.min_events = 200});
    CorruptionPlan plan;
    plan.seed = seed;
    plan.drop_pass_received = 0.3;
    plan.swap_shot_block = 0.5;
    plan.drop_carry = 0.3;
    const auto path = dir / "in" / canonical_filename(half);
    write_stream(corrupt(half, plan).stream, path);
    inputs.push_back(path.string());
  }
  auto verify_into = [&](const std::string& name, const std::string& jobs) {
    std::vector<std::string> args{"verify"};
    args.insert(args.end(), inputs.begin(), inputs.end());
    for (const auto& a : {std::string("--out-dir"), (dir / name).string(), std::string("--jobs"), jobs}) {
      args.push_back(a);
    }
    return run(args);
  };
  const auto a = verify_into("a", "1");
  const auto b = verify_into("b", "1");
  const auto c = verify_into("c", "4");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    CAPTURE(name);
    CHECK(read_text_file(entry.path()) == read_text_file(dir / "b" / name));
    CHECK(read_text_file(entry.path()) == read_text_file(dir / "c" / name));
    ++files;
  }
  CHECK(files >= 13);
}
