#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <thread>

#include "CLI11.hpp"
#include "versa/adapters.hpp"
#include "versa/corruptor.hpp"
#include "versa/error.hpp"
#include "versa/io.hpp"
#include "versa/metrics.hpp"
#include "versa/verifier.hpp"

namespace versa::cli {
namespace fs = std::filesystem;

namespace {

// Runs task(k) for k in [0, n) on at most `jobs` threads. Failures are kept per
// index so callers report them in input order.
std::vector<std::exception_ptr> parallel_for(std::size_t n, unsigned jobs,
                                             const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        task(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return errors;
}

std::string describe(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

VersaStream load_input(const std::string& path, const RunConfig& cfg) {
  if (cfg.profile) return ingest(path, load_profile(*cfg.profile));
  return read_stream(path);
}

TransitionTable build_table(const RunConfig& cfg) {
  const TransitionTable base = cfg.table_path ? load_table(*cfg.table_path) : default_table();
  return base.with_continuity_threshold(cfg.carry_threshold);
}

SimplificationMap simplification_for(const std::optional<std::string>& path) {
  return path ? simplification_from_json(read_text_file(*path)) : default_simplification();
}

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--profile", cfg.profile, "Provider profile name or JSON path");
  sub.add_option("--table", cfg.table_path, "Transition table JSON");
  sub.add_option("--window", cfg.window, "Handler window radius")->check(CLI::PositiveNumber);
  sub.add_option("--carry-threshold", cfg.carry_threshold, "Spatial continuity gap in meters")
      ->check(CLI::PositiveNumber);
  sub.add_flag("--simplified", cfg.simplified, "Work on the simplified alphabet");
  sub.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

struct VerifyRun {
  std::vector<VersaStream> inputs;
  std::vector<VerificationResult> results;
  bool failed = false;
};

VerifyRun verify_all(const RunConfig& cfg, const std::optional<std::string>& map_path,
                     bool write_outputs, std::ostream& err) {
  const TransitionTable table = build_table(cfg);
  const VerifyOptions options{cfg.window};
  const SimplificationMap map = simplification_for(map_path);

  const std::size_t n = cfg.inputs.size();
  std::vector<std::optional<VersaStream>> inputs(n);
  std::vector<std::optional<VerificationResult>> results(n);
  if (write_outputs) fs::create_directories(cfg.out_dir);

  auto errors = parallel_for(n, cfg.jobs, [&](std::size_t k) {
    VersaStream s = load_input(cfg.inputs[k], cfg);
    if (cfg.simplified) s = simplify(s, map);
    auto r = verify_stream(s, table, default_registry(), options);
    if (write_outputs) {
      write_stream(r.stream, fs::path(cfg.out_dir) / canonical_filename(r.stream));
      write_text_file(fs::path(cfg.out_dir) / exceptions_filename(r.stream),
                      serialize_records(r.records));
    }
    inputs[k] = std::move(s);
    results[k] = std::move(r);
  });

  VerifyRun run;
  for (std::size_t k = 0; k < n; ++k) {
    if (errors[k]) {
      err << cfg.inputs[k] << ": " << describe(errors[k]) << "\n";
      run.failed = true;
      continue;
    }
    run.inputs.push_back(std::move(*inputs[k]));
    run.results.push_back(std::move(*results[k]));
  }
  return run;
}

std::string stats_text(const VerifyRun& run, const std::string& format) {
  std::vector<std::vector<ExceptionRecord>> records;
  for (const auto& r : run.results) records.push_back(r.records);
  const auto rows = exception_report(run.inputs, records);
  return format == "jsonl" ? exception_jsonl(rows) : exception_csv(rows);
}

int finish_verify(const VerifyRun& run, const RunConfig& cfg, std::ostream& out) {
  std::size_t unresolved = 0;
  for (std::size_t k = 0; k < run.results.size(); ++k) {
    const auto& r = run.results[k];
    unresolved += r.unresolved_count();
    out << r.stream.match_id << " p" << r.stream.period << ": " << run.inputs[k].events.size()
        << " events, " << r.records.size() << " exceptions, " << r.unresolved_count()
        << " unresolved\n";
  }
  const auto stats_name = std::string("exception_stats.") + (cfg.format == "jsonl" ? "jsonl" : "csv");
  write_text_file(fs::path(cfg.out_dir) / stats_name, stats_text(run, cfg.format));
  if (run.failed) return kHardError;
  return unresolved > 0 ? kUnresolved : kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event stream verification and correction for soccer match data"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::string> out_file;
  std::optional<std::string> map_path;
  std::optional<std::string> plan_path;
  std::optional<std::string> truth_path;
  std::optional<std::uint64_t> seed;
  bool drop_micro = false;
  bool keep_dropped = false;
  bool correct_first = false;
  std::vector<std::string> side_a;
  std::vector<std::string> side_b;
  std::optional<std::string> profile_b;
  std::optional<std::string> provider;
  std::optional<std::string> league;
  std::optional<std::string> season;

  auto* convert = app.add_subcommand("convert", "Provider file to canonical stream");
  convert->add_option("--in", cfg.inputs, "Input files")->required();
  convert->add_option("--profile", cfg.profile, "Provider profile name or JSON path")->required();
  convert->add_option("--out", out_file, "Output file (single input)");
  convert->add_option("--out-dir", cfg.out_dir, "Output directory");
  convert->add_flag("--simplified", cfg.simplified, "Also apply the simplification map");
  convert->add_option("--map", map_path, "Simplification map JSON");
  convert->add_flag("--drop-micro-carries", drop_micro, "Drop sub-threshold Carry events");
  convert->add_option("--carry-threshold", cfg.carry_threshold, "Micro-carry threshold in meters");
  convert->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<CLI::App*> verifiers;
  for (const char* name : {"verify", "correct"}) {
    auto* v = app.add_subcommand(name, "Verify and correct streams");
    v->add_option("inputs,--in", cfg.inputs, "Stream files")->required();
    add_common(*v, cfg);
    v->add_option("--out-dir", cfg.out_dir, "Output directory");
    v->add_option("--format", cfg.format, "Stats format")->check(CLI::IsMember({"csv", "jsonl"}));
    v->add_option("--map", map_path, "Simplification map JSON");
    verifiers.push_back(v);
  }

  auto* simplify_cmd = app.add_subcommand("simplify", "Apply the simplification map");
  simplify_cmd->add_option("--in", cfg.inputs, "Input stream")->required()->expected(1);
  simplify_cmd->add_option("--out", out_file, "Output stream")->required();
  simplify_cmd->add_option("--map", map_path, "Simplification map JSON");

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Inject errors with known ground truth");
  corrupt_cmd->add_option("--plan", plan_path, "Corruption plan JSON")->required();
  corrupt_cmd->add_option("--in", cfg.inputs, "Clean stream")->required()->expected(1);
  corrupt_cmd->add_option("--out", out_file, "Corrupted stream")->required();
  corrupt_cmd->add_option("--truth", truth_path, "Ground truth JSONL")->required();
  corrupt_cmd->add_option("--seed", seed, "Override the plan's seed");

  auto* compare = app.add_subcommand("compare", "Edit similarity between two providers");
  compare->add_option("--a", side_a, "Streams from provider A")->required();
  compare->add_option("--b", side_b, "Streams from provider B")->required();
  compare->add_option("--profile-a", cfg.profile, "Profile for A files");
  compare->add_option("--profile-b", profile_b, "Profile for B files");
  compare->add_flag("--simplified", cfg.simplified, "Compare on the simplified alphabet");
  compare->add_flag("--keep-dropped", keep_dropped, "With --simplified, merge only");
  compare->add_option("--map", map_path, "Simplification map JSON");
  compare->add_flag("--correct", correct_first, "Verify and correct both sides first");
  compare->add_option("--table", cfg.table_path, "Transition table JSON");
  compare->add_option("--window", cfg.window, "Handler window radius");
  compare->add_option("--carry-threshold", cfg.carry_threshold, "Spatial continuity gap");
  compare->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  compare->add_option("--out", out_file, "Write the report here instead of stdout");

  auto* report = app.add_subcommand("report", "Exception statistics per provider/league/season");
  report->add_option("inputs,--in", cfg.inputs, "Stream files")->required();
  add_common(*report, cfg);
  report->add_option("--map", map_path, "Simplification map JSON");
  report->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  report->add_option("--out", out_file, "Write the report here instead of stdout");
  report->add_option("--provider", provider, "Override provider key");
  report->add_option("--league", league, "Override league key");
  report->add_option("--season", season, "Override season key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kHardError;
  }

  try {
    if (convert->parsed()) {
      if (out_file && cfg.inputs.size() != 1) {
        err << "--out takes a single --in; use --out-dir for several\n";
        return kHardError;
      }
      const auto profile = load_profile(*cfg.profile);
      const IngestOptions opt{drop_micro, cfg.carry_threshold};
      const auto map = simplification_for(map_path);
      if (!out_file) fs::create_directories(cfg.out_dir);
      auto errors = parallel_for(cfg.inputs.size(), cfg.jobs, [&](std::size_t k) {
        VersaStream s = ingest(cfg.inputs[k], profile, opt);
        if (cfg.simplified) s = simplify(s, map);
        export_stream(s, out_file ? fs::path(*out_file) : fs::path(cfg.out_dir) / canonical_filename(s));
      });
      int code = kOk;
      for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!errors[k]) continue;
        err << cfg.inputs[k] << ": " << describe(errors[k]) << "\n";
        code = kHardError;
      }
      return code;
    }

    for (auto* v : verifiers) {
      if (!v->parsed()) continue;
      const auto run = verify_all(cfg, map_path, true, err);
      return finish_verify(run, cfg, out);
    }

    if (simplify_cmd->parsed()) {
      export_stream(simplify(read_stream(cfg.inputs.front()), simplification_for(map_path)),
                    *out_file);
      return kOk;
    }

    if (corrupt_cmd->parsed()) {
      auto plan = plan_from_json(read_text_file(*plan_path));
      if (seed) plan.seed = *seed;
      const auto result = corrupt(read_stream(cfg.inputs.front()), plan);
      write_stream(result.stream, *out_file);
      write_text_file(*truth_path, truth_to_jsonl(result.truth));
      return kOk;
    }

    if (compare->parsed()) {
      if (side_a.size() != side_b.size()) {
        err << "--a and --b need the same number of files\n";
        return kHardError;
      }
      const TransitionTable table = build_table(cfg);
      const VerifyOptions vopt{cfg.window};
      auto load_side = [&](const std::string& path, const std::optional<std::string>& profile) {
        VersaStream s = profile ? ingest(path, load_profile(*profile)) : read_stream(path);
        if (correct_first) s = verify_stream(s, table, default_registry(), vopt).stream;
        return s;
      };
      CompareOptions copt;
      if (cfg.simplified) copt.simplification = simplification_for(map_path);
      copt.apply_drops = !keep_dropped;
      std::vector<HalfConsistency> halves(side_a.size());
      auto errors = parallel_for(side_a.size(), cfg.jobs, [&](std::size_t k) {
        halves[k] = compare_providers(load_side(side_a[k], cfg.profile),
                                      load_side(side_b[k], profile_b), copt);
      });
      for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!errors[k]) continue;
        err << side_a[k] << " vs " << side_b[k] << ": " << describe(errors[k]) << "\n";
        return kHardError;
      }
      const auto rep = consistency_report(std::move(halves));
      const auto text = cfg.format == "jsonl" ? consistency_jsonl(rep) : consistency_csv(rep);
      if (out_file) {
        write_text_file(*out_file, text);
      } else {
        out << text;
      }
      return kOk;
    }

    if (report->parsed()) {
      auto run = verify_all(cfg, map_path, false, err);
      for (auto& s : run.inputs) {
        if (provider) s.info.provider = *provider;
        if (league) s.info.league = *league;
        if (season) s.info.season = *season;
      }
      const auto text = stats_text(run, cfg.format);
      if (out_file) {
        write_text_file(*out_file, text);
      } else {
        out << text;
      }
      return run.failed ? kHardError : kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kHardError;
  }
  return kHardError;
}

}  // namespace versa::cli
