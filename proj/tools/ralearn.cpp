// ralearn: learn register automata from simulated SULs, run benchmark
// suites, and generate random models.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ralearn/generator.hpp"
#include "ralearn/learner.hpp"

namespace fs = std::filesystem;
using namespace ralearn;
using nlohmann::json;

namespace {

struct RunOptions {
  Algorithm algorithm = Algorithm::SLLambda;
  bool restrictions = true;
  std::string eq_oracle = "exact";
  RandomWalkConfig walk;
  bool verify = true;
};

struct RunOutcome {
  std::optional<LearnResult> result;
  bool equivalent = true;
  std::optional<DataWord> witness;
  std::vector<json> events;
};

RunOutcome run(const RegisterAutomaton& sul, const RunOptions& opt, bool keep_events) {
  CountingOracle mq(sul);
  RunOutcome out;
  LearnerConfig cfg;
  cfg.algorithm = opt.algorithm;
  cfg.restrictions = opt.restrictions;
  if (keep_events) cfg.on_event = [&](const json& e) { out.events.push_back(e); };
  Learner learner(sul.alphabet(), mq, cfg);
  std::unique_ptr<EquivalenceOracle> eq;
  if (opt.eq_oracle == "exact") eq = std::make_unique<ExactEquivalenceOracle>(sul);
  else eq = std::make_unique<RandomWalkOracle>(mq, opt.walk);
  out.result = learner.learn(*eq);
  if (opt.verify) {
    out.witness = find_counterexample_exact(out.result->model, sul);
    out.equivalent = !out.witness;
  }
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

const char* kCsvHeader =
    "sul,algorithm,restrictions,learn_resets,total_resets,counterexamples,locations,"
    "transitions,registers,wct_learn_ms,wct_test_ms\n";

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

json stats_json(const std::string& sul_name, const RunOptions& opt, const RunOutcome& o) {
  const LearnResult& r = *o.result;
  json j = to_json(r.stats);
  j["sul"] = sul_name;
  j["algorithm"] = to_string(opt.algorithm);
  j["restrictions"] = opt.restrictions;
  j["eq_oracle"] = opt.eq_oracle;
  j["seed"] = opt.walk.seed;
  j["hypothesis_locations"] = r.hypothesis_locations;
  j["rounds"] = r.rounds;
  j["fixes"] = r.fixes;
  j["locations"] = r.model.location_count();
  j["transitions"] = r.model.transitions().size();
  j["registers"] = r.model.total_registers();
  // Size parameters of the complexity bound.
  j["t"] = r.model.transitions().size();
  j["n"] = r.model.location_count();
  j["r"] = r.model.max_registers();
  j["m"] = r.max_counterexample_length;
  j["wct_learn_ms"] = r.learn_ms;
  j["wct_test_ms"] = r.test_ms;
  if (opt.verify) j["equivalent"] = o.equivalent;
  return j;
}

int cmd_learn(const std::string& sul_path, const RunOptions& opt, const fs::path& out_dir,
              bool with_sul_dot, const std::string& events_path) {
  const RegisterAutomaton sul = load_automaton_file(sul_path);
  const std::string name = fs::path(sul_path).stem().string();
  RunOutcome o = run(sul, opt, !events_path.empty());
  const LearnResult& r = *o.result;

  fs::create_directories(out_dir);
  write_file(out_dir / "model.json", save_automaton(r.model));
  write_file(out_dir / "model.dot", export_dot(r.model));
  write_file(out_dir / "stats.json", stats_json(name, opt, o).dump(2) + "\n");
  write_file(out_dir / "bench.csv",
             std::string(kCsvHeader) + name + "," + to_string(opt.algorithm) + "," +
                 (opt.restrictions ? "on" : "off") + "," + std::to_string(r.stats.learn_resets) +
                 "," + std::to_string(r.stats.total_resets()) + "," +
                 std::to_string(r.stats.counterexamples) + "," +
                 std::to_string(r.model.location_count()) + "," +
                 std::to_string(r.model.transitions().size()) + "," +
                 std::to_string(r.model.total_registers()) + "," + fmt(r.learn_ms) + "," +
                 fmt(r.test_ms) + "\n");
  if (with_sul_dot) write_file(out_dir / "sul.dot", export_dot(sul));
  if (!events_path.empty()) {
    std::ofstream f(events_path);
    for (const auto& e : o.events) f << e.dump() << "\n";
  }

  std::cout << name << " " << to_string(opt.algorithm)
            << " restrictions=" << (opt.restrictions ? "on" : "off")
            << " learn_resets=" << r.stats.learn_resets
            << " total_resets=" << r.stats.total_resets()
            << " counterexamples=" << r.stats.counterexamples
            << " locations=" << r.model.location_count() << " learn_ms=" << fmt(r.learn_ms)
            << " test_ms=" << fmt(r.test_ms) << "\n";
  if (!o.equivalent) {
    std::cerr << "learned model differs from the SUL on "
              << to_string(sul.alphabet(), *o.witness) << "\n";
    return 1;
  }
  return 0;
}

int cmd_bench(const std::vector<std::string>& suls, const std::vector<std::string>& algorithms,
              const std::string& restrictions, RunOptions base, std::size_t reps,
              std::size_t jobs, const fs::path& out_dir) {
  std::vector<std::pair<std::string, RegisterAutomaton>> models;
  for (const auto& p : suls) models.emplace_back(fs::path(p).stem().string(), load_automaton_file(p));
  std::vector<bool> modes;
  if (restrictions == "on" || restrictions == "both") modes.push_back(true);
  if (restrictions == "off" || restrictions == "both") modes.push_back(false);

  struct Job {
    std::size_t model;
    Algorithm algorithm;
    bool restrictions;
  };
  std::vector<Job> cells;
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (const auto& a : algorithms) {
      for (bool mode : modes) cells.push_back({m, parse_algorithm(a), mode});
    }
  }
  // Exact oracles are deterministic; one repetition is enough.
  if (base.eq_oracle == "exact") reps = 1;

  std::vector<std::string> rows(cells.size());
  std::vector<std::string> errors;
  std::mutex lock;
  std::size_t next = 0;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard g(lock);
        if (next == cells.size()) return;
        i = next++;
      }
      const Job& c = cells[i];
      RunOptions opt = base;
      opt.algorithm = c.algorithm;
      opt.restrictions = c.restrictions;
      double learn = 0, total = 0, cex = 0, locs = 0, trans = 0, regs = 0, lms = 0, tms = 0;
      try {
        for (std::size_t k = 0; k < reps; ++k) {
          opt.walk.seed = base.walk.seed + k;
          const RunOutcome o = run(models[c.model].second, opt, false);
          if (!o.equivalent) {
            std::lock_guard g(lock);
            errors.push_back(models[c.model].first + ": learned model not equivalent");
          }
          const LearnResult& r = *o.result;
          learn += static_cast<double>(r.stats.learn_resets);
          total += static_cast<double>(r.stats.total_resets());
          cex += static_cast<double>(r.stats.counterexamples);
          locs += static_cast<double>(r.model.location_count());
          trans += static_cast<double>(r.model.transitions().size());
          regs += static_cast<double>(r.model.total_registers());
          lms += r.learn_ms;
          tms += r.test_ms;
        }
      } catch (const std::exception& e) {
        std::lock_guard g(lock);
        errors.push_back(models[c.model].first + ": " + e.what());
        continue;
      }
      const double n = static_cast<double>(reps);
      rows[i] = models[c.model].first + "," + to_string(c.algorithm) + "," +
                (c.restrictions ? "on" : "off") + "," + fmt(learn / n) + "," + fmt(total / n) +
                "," + fmt(cex / n) + "," + fmt(locs / n) + "," + fmt(trans / n) + "," +
                fmt(regs / n) + "," + fmt(lms / n) + "," + fmt(tms / n) + "\n";
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::max<std::size_t>(jobs, 1); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string csv = kCsvHeader;
  for (const auto& r : rows) csv += r;
  fs::create_directories(out_dir);
  write_file(out_dir / "bench.csv", csv);
  std::cout << csv;
  for (const auto& e : errors) std::cerr << e << "\n";
  return errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register automaton learning over the theory of equality"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string algorithm = "sllambda", restrictions = "on", verify = "exact";
  std::string out_dir = ".";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember({"sllambda", "slct"}));
    cmd->add_option("--eq-oracle", opt.eq_oracle)->check(CLI::IsMember({"exact", "random"}));
    cmd->add_option("--max-depth", opt.walk.max_depth, "random walk length bound");
    cmd->add_option("--walks", opt.walk.walks, "random walks per equivalence query");
    cmd->add_option("--seed", opt.walk.seed);
    cmd->add_option("--verify", verify)->check(CLI::IsMember({"exact", "none"}));
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* learn = app.add_subcommand("learn", "learn one SUL");
  std::string sul, events;
  bool dot = false;
  learn->add_option("--sul", sul, "SUL model file")->required()->check(CLI::ExistingFile);
  learn->add_option("--restrictions", restrictions)->check(CLI::IsMember({"on", "off"}));
  learn->add_flag("--export-dot", dot, "also write the SUL as sul.dot");
  learn->add_option("--events", events, "write the learner's event log (JSON lines)");
  add_common(learn);

  auto* bench = app.add_subcommand("bench", "run a suite of SULs x algorithms");
  std::vector<std::string> suls;
  std::vector<std::string> algorithms{"sllambda", "slct"};
  std::size_t reps = 1, jobs = 1;
  bench->add_option("--sul", suls, "SUL model files")->required()->check(CLI::ExistingFile);
  bench->add_option("--algorithms", algorithms)->check(CLI::IsMember({"sllambda", "slct"}));
  bench->add_option("--restrictions", restrictions)->check(CLI::IsMember({"on", "off", "both"}));
  bench->add_option("--reps", reps, "repetitions per cell (random oracle)");
  bench->add_option("--jobs", jobs, "parallel cells");
  add_common(bench);

  auto* gen = app.add_subcommand("generate", "write a random determinate RA");
  GeneratorConfig gcfg;
  std::string gen_out;
  gen->add_option("--locations", gcfg.locations)->check(CLI::PositiveNumber);
  gen->add_option("--actions", gcfg.actions)->check(CLI::PositiveNumber);
  gen->add_option("--data-fraction", gcfg.data_fraction)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gcfg.seed);
  gen->add_option("--out", gen_out, "model file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    opt.algorithm = parse_algorithm(algorithm);
    opt.restrictions = restrictions != "off";
    opt.verify = verify == "exact";
    if (*learn) return cmd_learn(sul, opt, out_dir, dot, events);
    if (*bench) {
      return cmd_bench(suls, algorithms, restrictions, opt, reps, jobs, out_dir);
    }
    const std::string text = save_automaton(generate_automaton(gcfg));
    if (gen_out.empty()) std::cout << text;
    else write_file(gen_out, text);
    return 0;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
