#include "phishlab/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "phishlab/attacks.hpp"
#include "phishlab/classifier.hpp"
#include "phishlab/collision.hpp"
#include "phishlab/config.hpp"
#include "phishlab/corpus.hpp"
#include "phishlab/error.hpp"
#include "phishlab/fixtures.hpp"
#include "phishlab/mutation.hpp"
#include "phishlab/pelican.hpp"
#include "phishlab/report.hpp"

namespace phishlab {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultUrl = "http://localhost/";

std::string format_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

/// Options every command may take.
struct Common {
  std::optional<std::string> config_path;
  std::optional<std::string> model;
  std::optional<double> threshold;
  std::optional<double> freq;
};

struct Context {
  Common common;
  Config cfg;

  void resolve() {
    if (common.config_path) cfg = load_config(*common.config_path);
    if (common.model) cfg.model = *common.model;
    if (common.threshold) cfg.threshold = common.threshold;
    if (common.freq) cfg.freq_detect_threshold = common.freq;
  }

  Classifier model() const {
    if (cfg.model.empty()) throw SchemaError("no model given (use --model or the config's model key)");
    Classifier c = load_model(cfg.model);
    if (cfg.threshold) c.threshold = *cfg.threshold;
    if (cfg.freq_detect_threshold) c.freq_detect_threshold = *cfg.freq_detect_threshold;
    return c;
  }

  fs::path corpus() const {
    if (cfg.corpus.empty()) throw SchemaError("no corpus given (use --corpus or the config's corpus key)");
    return cfg.corpus;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_model = true) {
  cmd->add_option("--config", c.config_path, "key=value configuration file");
  if (with_model) {
    cmd->add_option("--model", c.model, "classifier JSON");
    cmd->add_option("--threshold", c.threshold, "decision threshold override")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--freq-detect-threshold", c.freq, "ratio-feature detection threshold override")
        ->check(CLI::Range(0.0, 1.0));
  }
}

DomTree load_page(const std::string& path, const std::string& url) {
  return parse_html(read_text_file(path), url);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phishing-classifier evasion workbench"};
  app.require_subcommand(1);
  Context ctx;

  // score
  auto* score_cmd = app.add_subcommand("score", "Score a page");
  std::string score_page;
  std::string score_url = kDefaultUrl;
  score_cmd->add_option("page", score_page, "HTML file")->required();
  score_cmd->add_option("--url", score_url, "URL the page was served from");
  add_common(score_cmd, ctx.common);

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Craft an adversarial page");
  std::string attack_page;
  std::string attack_url = kDefaultUrl;
  std::string level_text;
  std::optional<std::string> knowledge_path;
  std::optional<std::string> rules_path;
  std::optional<std::string> pool_path;
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> batch;
  std::string attack_out;
  bool timing = false;
  attack_cmd->add_option("page", attack_page, "seed HTML file")->required();
  attack_cmd->add_option("--url", attack_url, "URL of the seed page");
  attack_cmd->add_option("--level", level_text, "white, grey or black")
      ->required()
      ->check(CLI::IsMember({"white", "grey", "black"}));
  attack_cmd->add_option("--knowledge", knowledge_path, "white-box: model the attacker holds (default: --model)");
  attack_cmd->add_option("--rules", rules_path, "grey-box: rule set the attacker holds (default: --model without weights)");
  attack_cmd->add_option("--pool", pool_path, "black-box: addition pool (JSON lines)");
  attack_cmd->add_option("--seed", rng_seed, "RNG seed");
  attack_cmd->add_option("--budget", budget, "maximum invisible additions");
  attack_cmd->add_option("--batch", batch, "additions per query")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--out", attack_out, "output directory for report.json and final.html")->required();
  attack_cmd->add_flag("--timing", timing, "include elapsed time in the report");
  add_common(attack_cmd, ctx.common);

  // defend
  auto* defend_cmd = app.add_subcommand("defend", "Run a page through the detection pipeline");
  std::string defend_page;
  std::string defend_url = kDefaultUrl;
  std::optional<std::string> store_path, whitelist_path, blacklist_path;
  std::optional<std::int64_t> now;
  defend_cmd->add_option("page", defend_page, "HTML file")->required();
  defend_cmd->add_option("--url", defend_url, "URL of the page");
  defend_cmd->add_option("--store", store_path, "phishing store JSON (created when missing)");
  defend_cmd->add_option("--whitelist", whitelist_path, "one URL per line");
  defend_cmd->add_option("--blacklist", blacklist_path, "one URL per line");
  defend_cmd->add_option("--now", now, "current time, seconds since the epoch");
  add_common(defend_cmd, ctx.common);

  // infer
  auto* infer_cmd = app.add_subcommand("infer", "Invert hashed features with corpus candidates");
  std::optional<std::string> corpus_path;
  std::optional<std::string> manifest_path;
  std::optional<std::string> decoded_path;
  unsigned threads = 0;
  infer_cmd->add_option("--corpus", corpus_path, "corpus manifest (JSON lines)");
  infer_cmd->add_option("--manifest", manifest_path, "digests, one per line (default: those of --model)");
  infer_cmd->add_option("--decoded", decoded_path, "write the decoded model here (needs --model)");
  infer_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");
  infer_cmd->add_flag("--timing", timing, "include elapsed time");
  add_common(infer_cmd, ctx.common);

  // prune
  auto* prune_cmd = app.add_subcommand("prune", "Zero the weights of exploitable rules");
  std::string strategy;
  std::string prune_out;
  prune_cmd->add_option("--strategy", strategy, "subset or single")
      ->required()
      ->check(CLI::IsMember({"subset", "single"}));
  prune_cmd->add_option("--out", prune_out, "pruned model JSON")->required();
  add_common(prune_cmd, ctx.common);

  // gen-fixtures
  auto* gen_cmd = app.add_subcommand("gen-fixtures", "Turn legitimate pages into phishing seeds");
  std::string range_text;
  std::size_t count = 10;
  std::string gen_out;
  std::string action = FixtureRequest{}.phishing_action;
  gen_cmd->add_option("--corpus", corpus_path, "corpus manifest; its legit pages are used");
  gen_cmd->add_option("--range", range_text, "target score range LO,HI")->required();
  gen_cmd->add_option("--count", count, "pages to generate")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen_out, "output directory")->required();
  gen_cmd->add_option("--action", action, "form action the pages post to");
  add_common(gen_cmd, ctx.common);

  // report
  auto* report_cmd = app.add_subcommand("report", "Aggregate attack reports");
  std::string results_dir;
  std::optional<std::string> csv_path;
  report_cmd->add_option("dir", results_dir, "directory of attack reports")->required();
  report_cmd->add_option("--csv", csv_path, "also write per-seed rows as CSV");
  add_common(report_cmd, ctx.common, false);

  // pool
  auto* pool_cmd = app.add_subcommand("pool", "Harvest an addition pool from legitimate pages");
  std::string pool_out;
  pool_cmd->add_option("--corpus", corpus_path, "corpus manifest; its legit pages are used");
  pool_cmd->add_option("--out", pool_out, "pool file (JSON lines)")->required();
  add_common(pool_cmd, ctx.common, false);

  std::vector<std::string> argv_store{"phishlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    ctx.resolve();
    if (corpus_path) ctx.cfg.corpus = *corpus_path;

    if (score_cmd->parsed()) {
      const Classifier model = ctx.model();
      const DomTree page = load_page(score_page, score_url);
      const double s = score_page_features(model, extract_features(page));
      out << format_score(s) << (is_phishing(model, s) ? " PHISH" : " BENIGN") << "\n";
      return kExitOk;
    }

    if (attack_cmd->parsed()) {
      const Classifier truth = ctx.model();
      const DomTree page = load_page(attack_page, attack_url);
      ScoreOracle oracle(truth);
      AttackResult result;
      switch (parse_level(level_text)) {
        case AttackLevel::white: {
          Classifier knowledge = knowledge_path ? load_model(*knowledge_path) : truth;
          if (ctx.cfg.freq_detect_threshold) knowledge.freq_detect_threshold = *ctx.cfg.freq_detect_threshold;
          result = white_box(knowledge, oracle, page);
          break;
        }
        case AttackLevel::grey: {
          const RuleSet known = rules_path ? load_rule_set(*rules_path) : rules_without_weights(truth);
          result = grey_box(known, oracle, page);
          break;
        }
        case AttackLevel::black: {
          if (pool_path) ctx.cfg.pool = *pool_path;
          if (ctx.cfg.pool.empty()) throw SchemaError("black-box attack needs --pool or the config's pool key");
          BlackBoxOptions opts;
          opts.seed = rng_seed.value_or(ctx.cfg.seed);
          opts.budget = budget.value_or(ctx.cfg.budget);
          opts.batch = batch.value_or(ctx.cfg.batch);
          result = black_box(oracle, page, load_pool(ctx.cfg.pool), opts);
          break;
        }
      }
      annotate(result, truth);
      fs::create_directories(attack_out);
      const fs::path final_path = fs::path(attack_out) / "final.html";
      write_text_file(final_path, serialize(result.final_page));
      write_text_file(fs::path(attack_out) / "report.json",
                      result_to_json(result, attack_page, final_path.string(), timing));
      out << outcome_name(result.outcome) << " " << format_score(result.initial_score) << " -> "
          << format_score(result.final_score) << " (" << result.queries << " queries, " << result.operations
          << " operations)\n";
      return result.success ? kExitOk : kExitExhausted;
    }

    if (defend_cmd->parsed()) {
      const Classifier model = ctx.model();
      const DomTree page = load_page(defend_page, defend_url);
      if (store_path) ctx.cfg.store = *store_path;
      if (whitelist_path) ctx.cfg.whitelist = *whitelist_path;
      if (blacklist_path) ctx.cfg.blacklist = *blacklist_path;
      PhishStore store = ctx.cfg.store.empty()
                             ? PhishStore(ctx.cfg.pelican_k, ctx.cfg.pelican_h_hours)
                             : PhishStore::load(ctx.cfg.store, ctx.cfg.pelican_k, ctx.cfg.pelican_h_hours);
      const UrlList white = ctx.cfg.whitelist.empty() ? UrlList{} : load_url_list(ctx.cfg.whitelist);
      const UrlList black = ctx.cfg.blacklist.empty() ? UrlList{} : load_url_list(ctx.cfg.blacklist);
      ScoreOracle oracle(model);
      const std::int64_t t = now.value_or(static_cast<std::int64_t>(std::time(nullptr)));
      const Verdict v = pipeline(defend_url, page, white, black, store, oracle, t, ctx.cfg.pelican);
      out << verdict_to_json(v);
      if (!ctx.cfg.store.empty() && v.label != VerdictLabel::whitelisted && v.label != VerdictLabel::blacklisted) {
        store.save(ctx.cfg.store);
      }
      return kExitOk;
    }

    if (infer_cmd->parsed()) {
      const Corpus corpus = load_corpus(ctx.corpus());
      std::optional<Classifier> hashed;
      if (!ctx.cfg.model.empty()) hashed = ctx.model();
      std::vector<std::string> manifest;
      if (manifest_path) {
        manifest = load_manifest(*manifest_path);
      } else if (hashed) {
        manifest = model_manifest(*hashed);
      } else {
        throw SchemaError("infer needs --manifest or a hashed --model");
      }
      const InversionReport report = invert_hashes(harvest_candidates(corpus), manifest, threads);
      out << inversion_to_json(report, timing);
      if (decoded_path) {
        if (!hashed) throw SchemaError("--decoded needs --model");
        save_model(decode_model(*hashed, report.recovered), *decoded_path);
      }
      return kExitOk;
    }

    if (prune_cmd->parsed()) {
      const Classifier model = ctx.model();
      const auto targets = strategy == "subset" ? subset_prune_targets(model) : single_prune_targets(model);
      const Classifier pruned = prune(model, targets);
      save_model(pruned, prune_out);
      std::size_t changed = 0;
      for (std::size_t i = 0; i < model.rules.size(); ++i) changed += model.rules[i].weight != pruned.rules[i].weight;
      out << strategy << ": " << changed << " rule weight" << (changed == 1 ? "" : "s") << " zeroed\n";
      for (const auto& id : targets) {
        const auto* r = model.find(id);
        if (r && r->weight != 0.0) out << "  " << id << " " << r->weight << "\n";
      }
      if (strategy == "single") out << "\n" << render_single_rules(single_rule_table(model));
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      const Classifier model = ctx.model();
      const Corpus corpus = load_corpus(ctx.corpus());
      FixtureRequest req;
      const auto comma = range_text.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument("");
        req.lo = std::stod(range_text.substr(0, comma));
        req.hi = std::stod(range_text.substr(comma + 1));
      } catch (const std::exception&) {
        throw SchemaError("--range must be LO,HI");
      }
      req.count = count;
      req.phishing_action = action;
      std::vector<CorpusPage> legit;
      for (const auto& p : corpus.pages) {
        if (p.label == Label::legit) legit.push_back(p);
      }
      const auto fixtures = generate_fixtures(model, legit, req);
      fs::create_directories(gen_out);
      std::string manifest;
      for (std::size_t i = 0; i < fixtures.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "fixture_%03zu.html", i);
        write_text_file(fs::path(gen_out) / name, serialize(fixtures[i].page));
        nlohmann::ordered_json rec{{"url", fixtures[i].source_url}, {"path", name}, {"label", "phish"}};
        manifest += rec.dump() + "\n";
        out << name << " " << format_score(fixtures[i].score) << "\n";
      }
      write_text_file(fs::path(gen_out) / "manifest.jsonl", manifest);
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const auto rows = load_results(results_dir);
      out << render_report(rows);
      if (csv_path) write_text_file(*csv_path, rows_to_csv(rows));
      return kExitOk;
    }

    if (pool_cmd->parsed()) {
      const Corpus corpus = load_corpus(ctx.corpus());
      const AdditionPool pool = harvest_pool(pages_with_label(corpus, Label::legit));
      save_pool(pool, pool_out);
      out << pool.specs.size() << " element specs\n";
      return kExitOk;
    }
  } catch (const NotPhishing& e) {
    err << "not detected as phishing: " << e.what() << "\n";
    return kExitNotPhishing;
  } catch (const Unreachable& e) {
    err << "unreachable: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace phishlab
