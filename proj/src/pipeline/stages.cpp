#include "geoharvest/pipeline/stages.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <regex>
#include <set>

#include "geoharvest/compliance/robots.hpp"
#include "geoharvest/compliance/viability.hpp"
#include "geoharvest/extract/extractor.hpp"
#include "geoharvest/geo/geocode.hpp"
#include "geoharvest/model/evaluate.hpp"
#include "geoharvest/model/forest.hpp"
#include "geoharvest/model/gam.hpp"
#include "geoharvest/model/store.hpp"
#include "geoharvest/quality/quality.hpp"
#include "geoharvest/sitegen/server.hpp"
#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/csv.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"
#include "geoharvest/util/hash.hpp"
#include "geoharvest/util/rng.hpp"
#include "geoharvest/util/strings.hpp"
#include "geoharvest/util/timeutil.hpp"

namespace geoharvest::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

RunLock::RunLock(const std::string& out_dir) {
  fsio::ensure_dir(out_dir);
  path_ = out_dir + "/.geoharvest.lock";
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0)
    throw ValidationError("output dir is locked by another run (" + path_ +
                          "); concurrent runs need distinct out dirs");
  std::string pid = std::to_string(::getpid()) + "\n";
  ssize_t n = ::write(fd, pid.data(), pid.size());
  (void)n;
  ::close(fd);
}

RunLock::~RunLock() { ::unlink(path_.c_str()); }

namespace {

// stage order for manifest chaining
const std::vector<std::string> kStageOrder = {"assess", "fetch",  "extract", "geocode",
                                              "quality", "model", "gridmap"};

std::unique_ptr<timeutil::Clock> make_clock(const PipelineConfig& cfg) {
  if (cfg.fixed_time) {
    auto tp = timeutil::parse_iso8601(*cfg.fixed_time);
    return std::make_unique<timeutil::FixedClock>(*tp);
  }
  return std::make_unique<timeutil::SystemClock>();
}

class ManifestWriter {
 public:
  ManifestWriter(const PipelineConfig& cfg, std::string stage)
      : cfg_(cfg), stage_(std::move(stage)) {
    started_ = timeutil::iso8601_utc(timeutil::SysClock::now());
  }

  void input(const std::string& path) { inputs_[path] = hash::sha256_file(path); }
  void output(const std::string& path) { outputs_[path] = hash::sha256_file(path); }

  void write(const std::string& status) {
    json j{{"stage", stage_},
           {"status", status},
           {"seed", cfg_.seed},
           {"config_hash", hash::sha256_hex(cfg_.to_json().dump())},
           {"started_utc", started_},
           {"finished_utc", timeutil::iso8601_utc(timeutil::SysClock::now())},
           {"inputs", inputs_},
           {"outputs", outputs_}};
    // provenance chain: cite the nearest predecessor stage manifest
    auto it = std::find(kStageOrder.begin(), kStageOrder.end(), stage_);
    while (it != kStageOrder.begin()) {
      --it;
      std::string pred = cfg_.out_dir + "/manifest." + *it + ".json";
      if (fs::exists(pred)) {
        j["predecessor"] = json{{"stage", *it}, {"manifest_sha256", hash::sha256_file(pred)}};
        break;
      }
    }
    fsio::write_file(cfg_.out_dir + "/manifest." + stage_ + ".json", j.dump(2) + "\n");
  }

 private:
  const PipelineConfig& cfg_;
  std::string stage_;
  std::string started_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

extract::ExtractionRuleSet load_rules(const PipelineConfig& cfg) {
  return extract::ExtractionRuleSet::from_json(json::parse(fsio::read_file(cfg.rules_path)));
}

std::vector<extract::ListingRecord> read_records(const std::string& path) {
  return extract::records_from_jsonl(fsio::read_file(path));
}

int scrape_year(const PipelineConfig& cfg) {
  auto clock = make_clock(cfg);
  return std::stoi(timeutil::iso8601_utc(clock->now()).substr(0, 4));
}

std::string model_path(const PipelineConfig& cfg, const std::string& kind) {
  return cfg.out_dir + "/model_" + kind + ".bin";
}

}  // namespace

StageOutcome stage_assess(const PipelineConfig& cfg, const std::string& answers_path) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "assess");
  manifest.input(answers_path);

  auto assessment = compliance::parse_answers_file(fsio::read_file(answers_path));
  compliance::ComplianceVerdict verdict = compliance::assess_viability(assessment);

  // when the target is a fixture tree, check its robots.txt against the
  // search entry points as part of the assessment
  if (cfg.fixture_dir) {
    std::string robots_path = *cfg.fixture_dir + "/robots.txt";
    if (fs::exists(robots_path)) {
      auto policy = compliance::parse_robots(fsio::read_file(robots_path), "fixture");
      auto rules = load_rules(cfg);
      std::string probe = rules.links.search_url_template;
      probe = str::replace_all(probe, "{object}", cfg.search.object_type);
      probe = str::replace_all(probe, "{place}", cfg.search.place);
      probe = str::replace_all(probe, "{sort}",
                               cfg.search.sorts.empty() ? "default" : cfg.search.sorts[0]);
      verdict.robots_allows_target =
          compliance::is_allowed(policy, probe, cfg.politeness.user_agent);
    }
  }

  fsio::write_file(cfg.out_dir + "/verdict.json",
                   compliance::verdict_to_json(verdict, assessment).dump(2) + "\n");
  fsio::write_file(cfg.out_dir + "/verdict.txt", compliance::verdict_to_text(verdict, assessment));
  manifest.output(cfg.out_dir + "/verdict.json");
  manifest.output(cfg.out_dir + "/verdict.txt");
  manifest.write("ok");

  StageOutcome out;
  out.message = "verdict: " + compliance::level_name(verdict.level);
  if (verdict.level == compliance::VerdictLevel::stop) out.exit_code = kExitComplianceBlock;
  return out;
}

StageOutcome stage_fetch(const PipelineConfig& cfg, bool acknowledge_risk) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "fetch");

  // compliance gate: a stop verdict blocks fetching unless explicitly
  // acknowledged, which is itself recorded in the audit log
  std::string verdict_note;
  std::string verdict_path = cfg.out_dir + "/verdict.json";
  if (fs::exists(verdict_path)) {
    auto vj = json::parse(fsio::read_file(verdict_path));
    if (vj.value("level", "proceed") == "stop") {
      if (!acknowledge_risk) {
        manifest.write("blocked");
        return {kExitComplianceBlock,
                "assess verdict is 'stop'; refusing to fetch (--acknowledge-risk overrides)"};
      }
      verdict_note = "stop verdict overridden by --acknowledge-risk";
    }
    manifest.input(verdict_path);
  }

  auto rules = load_rules(cfg);
  manifest.input(cfg.rules_path);

  // embedded fixture server, or the configured live origin
  std::unique_ptr<sitegen::FixtureServer> server;
  std::string origin;
  if (cfg.fixture_dir) {
    server = std::make_unique<sitegen::FixtureServer>(*cfg.fixture_dir, 0);
    origin = server->origin();
  } else {
    origin = *cfg.base_url;
  }

  fetch::FetchPlan plan;
  plan.min_delay_s = cfg.politeness.min_delay_s;
  plan.window = cfg.politeness.window;
  plan.max_retries = cfg.politeness.max_retries;
  plan.user_agent = cfg.politeness.user_agent;
  plan.respect_robots = cfg.politeness.respect_robots;

  auto clock = make_clock(cfg);
  fetch::PoliteClient client(origin, plan, compliance::RobotsPolicy{}, clock.get());
  if (!verdict_note.empty()) {
    // surfaced via the audit log below
  }

  // robots.txt first, on the same politeness clock
  fetch::FetchResult robots_res = client.get("/robots.txt");
  compliance::RobotsPolicy policy;
  if (robots_res.status == fetch::FetchStatus::ok && robots_res.body) {
    policy = compliance::parse_robots(*robots_res.body, origin);
  } else {
    policy = compliance::parse_robots("", origin);  // missing robots.txt: permissive
  }
  client.set_policy(policy);

  auto listing_urls = fetch::enumerate_listings(client, cfg.search, rules.links);

  fsio::ensure_dir(cfg.out_dir + "/pages");
  json index = json::array();
  std::regex id_re(rules.id_pattern);
  auto sink = [&](const fetch::FetchResult& r) {
    if (r.status != fetch::FetchStatus::ok || !r.body) {
      index.push_back(json{{"url", r.url}, {"status", fetch::status_name(r.status)}});
      return;
    }
    std::smatch m;
    std::string name;
    if (std::regex_search(r.url, m, id_re) && m.size() >= 2) name = m[1];
    else name = hash::sha256_hex(r.url).substr(0, 16);
    std::string file = cfg.out_dir + "/pages/" + name + ".html";
    fsio::write_file(file, *r.body);
    index.push_back(json{{"url", r.url}, {"status", "ok"}, {"file", "pages/" + name + ".html"}});
  };
  fetch::run_plan(client, listing_urls, sink);

  fsio::write_file(cfg.out_dir + "/fetch_index.json", index.dump(2) + "\n");
  std::string log = fetch::log_to_jsonl(client.log());
  if (!verdict_note.empty())
    log = json{{"note", verdict_note}}.dump() + "\n" + log;
  fsio::write_file(cfg.out_dir + "/fetch_log.jsonl", log);
  if (server) {
    server->stop();
    server->write_request_log(cfg.out_dir + "/server_request_log.jsonl");
  }

  manifest.output(cfg.out_dir + "/fetch_index.json");
  manifest.output(cfg.out_dir + "/fetch_log.jsonl");
  manifest.write("ok");
  return {kExitOk, std::to_string(listing_urls.size()) + " listing urls processed"};
}

StageOutcome stage_extract(const PipelineConfig& cfg) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "extract");
  auto rules = load_rules(cfg);
  manifest.input(cfg.rules_path);
  manifest.input(cfg.out_dir + "/fetch_index.json");

  auto clock = make_clock(cfg);
  const std::string scraped_at = timeutil::iso8601_utc(clock->now());

  json index = json::parse(fsio::read_file(cfg.out_dir + "/fetch_index.json"));
  std::vector<extract::ListingRecord> records;
  json issues = json::array();
  for (const auto& entry : index) {
    if (entry.value("status", "") != "ok") continue;
    std::string file = cfg.out_dir + "/" + entry.at("file").get<std::string>();
    auto result = extract::extract_record(fsio::read_file(file), rules,
                                          entry.at("url").get<std::string>(), scraped_at);
    for (const auto& issue : result.issues) {
      issues.push_back(json{{"id", result.record.id},
                            {"field", issue.field},
                            {"kind", extract::issue_kind_name(issue.kind)},
                            {"detail", issue.detail}});
    }
    records.push_back(std::move(result.record));
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  fsio::write_file(cfg.out_dir + "/records.jsonl", extract::records_to_jsonl(records));
  std::string csv_out = csv::join_row(extract::record_csv_header());
  for (const auto& r : records) csv_out += csv::join_row(extract::record_csv_row(r));
  fsio::write_file(cfg.out_dir + "/records.csv", csv_out);
  std::string issues_out;
  for (const auto& i : issues) issues_out += i.dump() + "\n";
  fsio::write_file(cfg.out_dir + "/issues.jsonl", issues_out);

  manifest.output(cfg.out_dir + "/records.jsonl");
  manifest.output(cfg.out_dir + "/records.csv");
  manifest.output(cfg.out_dir + "/issues.jsonl");
  manifest.write("ok");
  return {kExitOk, std::to_string(records.size()) + " records extracted"};
}

StageOutcome stage_geocode(const PipelineConfig& cfg) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "geocode");
  manifest.input(cfg.out_dir + "/records.jsonl");

  auto records = read_records(cfg.out_dir + "/records.jsonl");

  std::unique_ptr<geo::GeocodeBackend> backend;
  if (cfg.geocoder.backend == "stub") {
    std::string gaz_path = cfg.geocoder.gazetteer_path;
    if (gaz_path.empty() && cfg.fixture_dir) gaz_path = *cfg.fixture_dir + "/gazetteer.csv";
    if (gaz_path.empty())
      throw ValidationError("geocode: stub backend needs a gazetteer path");
    manifest.input(gaz_path);
    backend = std::make_unique<geo::StubGeocodeBackend>(
        geo::Gazetteer::load_csv(fsio::read_file(gaz_path)));
  } else {
    backend = std::make_unique<geo::HttpGeocodeBackend>(
        cfg.geocoder.base_url, cfg.politeness.user_agent, cfg.geocoder.min_interval_s);
  }

  geo::Geocoder geocoder(*backend, cfg.out_dir + "/geocode_cache.json");
  int geocoded = 0, failed = 0, skipped = 0;
  json failures = json::array();
  for (auto& r : records) {
    if (r.coords) {
      ++skipped;  // embedded coordinates take precedence
      continue;
    }
    if (!r.raw_address) {
      ++failed;
      failures.push_back(json{{"id", r.id}, {"reason", "no_address"}});
      continue;
    }
    geo::Address addr = geo::normalize_address(*r.raw_address, "");
    if (!addr.postal_code && r.postal_code) addr.postal_code = r.postal_code;
    if (addr.empty()) {
      ++failed;
      failures.push_back(json{{"id", r.id}, {"reason", "unresolvable_address"}});
      continue;
    }
    auto result = geocoder.geocode(addr);
    if (std::holds_alternative<geo::GeoPoint>(result)) {
      r.coords = std::get<geo::GeoPoint>(result);
      ++geocoded;
    } else {
      const auto& f = std::get<geo::GeocodeFailure>(result);
      ++failed;
      failures.push_back(json{
          {"id", r.id},
          {"reason", f.reason == geo::GeocodeFailure::Reason::no_match ? "no_match"
                                                                       : "backend_error"}});
    }
  }
  geocoder.flush_cache();

  fsio::write_file(cfg.out_dir + "/records_geo.jsonl", extract::records_to_jsonl(records));
  std::string fail_out;
  for (const auto& f : failures) fail_out += f.dump() + "\n";
  fsio::write_file(cfg.out_dir + "/geocode_failures.jsonl", fail_out);

  manifest.output(cfg.out_dir + "/records_geo.jsonl");
  manifest.output(cfg.out_dir + "/geocode_failures.jsonl");
  manifest.write("ok");
  return {kExitOk, std::to_string(geocoded) + " geocoded, " + std::to_string(failed) +
                       " failed, " + std::to_string(skipped) + " had embedded coords"};
}

StageOutcome stage_quality(const PipelineConfig& cfg) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "quality");
  manifest.input(cfg.out_dir + "/records_geo.jsonl");
  auto records = read_records(cfg.out_dir + "/records_geo.jsonl");
  if (records.empty()) return {kExitStageFailure, "quality: no records to assess"};

  std::vector<quality::PlausibilityRule> rules;
  if (!cfg.quality_cfg.rules_path.empty()) {
    manifest.input(cfg.quality_cfg.rules_path);
    rules = quality::rules_from_json(json::parse(fsio::read_file(cfg.quality_cfg.rules_path)));
  } else {
    rules = quality::default_rules(scrape_year(cfg), cfg.bbox);
  }

  quality::QualityReport report = quality::quality_report(records, rules);

  // imputation after the report: Table-2-style counts describe the corpus
  // as scraped, not as repaired
  std::string centroids_path = cfg.quality_cfg.postal_centroids_path;
  if (centroids_path.empty() && cfg.fixture_dir)
    centroids_path = *cfg.fixture_dir + "/postal_centroids.csv";
  quality::ImputeSummary impute;
  if (!centroids_path.empty() && fs::exists(centroids_path)) {
    manifest.input(centroids_path);
    auto centroids = quality::centroids_from_csv(fsio::read_file(centroids_path));
    impute = quality::impute_distance_by_postal(records, centroids,
                                                cfg.quality_cfg.centroid_radius_m);
  }

  auto [retained, ledger] = quality::apply_exclusions(records, cfg.quality_cfg.exclusions);
  report.records_retained = static_cast<int>(retained.size());

  fsio::write_file(cfg.out_dir + "/quality_report.json",
                   quality::report_to_json(report).dump(2) + "\n");
  fsio::write_file(cfg.out_dir + "/quality_report.txt", quality::report_to_text(report));
  fsio::write_file(cfg.out_dir + "/exclusions.csv", ledger.to_csv());
  fsio::write_file(cfg.out_dir + "/retained.jsonl", extract::records_to_jsonl(retained));
  fsio::write_file(
      cfg.out_dir + "/imputation.json",
      json{{"imputed", impute.imputed}, {"unimputed_ids", impute.unimputed_ids}}.dump(2) + "\n");

  manifest.output(cfg.out_dir + "/quality_report.json");
  manifest.output(cfg.out_dir + "/quality_report.txt");
  manifest.output(cfg.out_dir + "/exclusions.csv");
  manifest.output(cfg.out_dir + "/retained.jsonl");
  manifest.write("ok");
  return {kExitOk, std::to_string(retained.size()) + " of " + std::to_string(records.size()) +
                       " records retained"};
}

namespace {

model::FeatureMatrix build_pipeline_features(const PipelineConfig& cfg,
                                             const std::vector<extract::ListingRecord>& records,
                                             model::BuildSummary* summary) {
  model::BuildOptions opts;
  opts.amenity_vocab = cfg.amenity_vocab;
  opts.per_amenity_features = true;
  opts.plz_onehot = cfg.model_cfg.plz_onehot;
  return model::build_features(records, cfg.center, opts, summary);
}

void split_rows(const model::FeatureMatrix& all, uint64_t seed, int train_n,
                model::FeatureMatrix* train, model::FeatureMatrix* test) {
  std::vector<size_t> order(all.rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::Xoshiro256pp rng(rng::derive_seed(seed, 0x5eed5011ULL));
  for (size_t i = order.size(); i > 1; --i) {
    size_t j = rng.below(i);
    std::swap(order[i - 1], order[j]);
  }
  train->extended_names = all.extended_names;
  test->extended_names = all.extended_names;
  size_t ntrain = std::min<size_t>(static_cast<size_t>(train_n), order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    (i < ntrain ? train : test)->rows.push_back(all.rows[order[i]]);
  }
}

model::FittedModel fit_kind(const PipelineConfig& cfg, const model::FeatureMatrix& train,
                            const std::string& kind) {
  model::FittedModel fitted;
  if (kind == "random_forest") {
    fitted.kind = model::FittedModel::Kind::random_forest;
    model::ForestParams params;
    params.n_trees = cfg.model_cfg.forest_trees;
    fitted.forest = model::fit_random_forest(train, params, cfg.seed);
    return fitted;
  }
  bool shrink = kind == "gam_shrinkage";
  fitted.kind = shrink ? model::FittedModel::Kind::gam_shrinkage : model::FittedModel::Kind::gam;
  model::GamSpec spec;
  if (!cfg.model_cfg.spec_path.empty()) {
    spec = model::GamSpec::from_json(json::parse(fsio::read_file(cfg.model_cfg.spec_path)));
    spec.shrinkage = shrink;
  } else {
    spec = model::GamSpec::defaults(shrink);
    if (shrink) {
      // richer feature set for the data-driven variant; shrinkage prunes it
      for (const auto& name : train.extended_names) spec.linear_terms.push_back(name);
    }
  }
  fitted.gam = model::fit_gam(train, spec, cfg.seed);
  return fitted;
}

json metrics_json(const PipelineConfig& cfg, const model::FittedModel& fitted,
                  const model::EvalMetrics& eval, size_t n_train, size_t n_test) {
  json j{{"kind", model::FittedModel::kind_name(fitted.kind)},
         {"seed", cfg.seed},
         {"n_train", n_train},
         {"n_test", n_test},
         {"rmse", eval.rmse},
         {"r2", eval.r2},
         {"r2_adj", eval.r2_adj},
         {"r2_adj_is_plain", eval.r2_adj_is_plain}};
  if (fitted.kind == model::FittedModel::Kind::random_forest) {
    j["oob_rmse"] = fitted.forest->oob_rmse;
  } else {
    j["train_r2_adj"] = fitted.gam->info.r2_adj;
    j["edf_total"] = fitted.gam->info.edf_total;
    json edf = json::array();
    for (const auto& [name, e] : fitted.gam->info.edf_by_term)
      edf.push_back(json::array({name, e}));
    j["edf_by_term"] = edf;
  }
  return j;
}

}  // namespace

StageOutcome stage_model_fit(const PipelineConfig& cfg, const std::string& kind) {
  if (kind != "gam" && kind != "gam_shrinkage" && kind != "random_forest")
    return {kExitValidation, "unknown model kind '" + kind + "'"};
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "model");
  manifest.input(cfg.out_dir + "/retained.jsonl");

  auto records = read_records(cfg.out_dir + "/retained.jsonl");
  model::BuildSummary summary;
  model::FeatureMatrix all = build_pipeline_features(cfg, records, &summary);
  fsio::write_file(cfg.out_dir + "/features.csv", model::features_to_csv(all));

  if (all.rows.empty()) return {kExitStageFailure, "model: no usable feature rows"};

  model::FeatureMatrix train, test;
  split_rows(all, cfg.seed, cfg.model_cfg.train_n, &train, &test);
  if (test.rows.empty()) test = train;  // degenerate corpora still produce metrics

  model::FittedModel fitted = fit_kind(cfg, train, kind);
  model::EvalMetrics eval = model::evaluate(fitted, test.rows);

  save_model(fitted, model_path(cfg, kind));
  fsio::write_file(cfg.out_dir + "/metrics_" + kind + ".json",
                   metrics_json(cfg, fitted, eval, train.rows.size(), test.rows.size()).dump(2) +
                       "\n");

  manifest.output(cfg.out_dir + "/features.csv");
  manifest.output(model_path(cfg, kind));
  manifest.output(cfg.out_dir + "/metrics_" + kind + ".json");
  manifest.write("ok");

  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s: holdout rmse %.4f, r2_adj %.4f", kind.c_str(), eval.rmse,
                eval.r2_adj);
  return {kExitOk, buf};
}

StageOutcome stage_model_evaluate(const PipelineConfig& cfg, const std::string& kind) {
  RunLock lock(cfg.out_dir);
  std::string mp = model_path(cfg, kind);
  if (!fs::exists(mp)) return {kExitValidation, "no fitted model at " + mp};
  model::FittedModel fitted = model::load_model(mp);

  model::FeatureMatrix all = model::features_from_csv(fsio::read_file(cfg.out_dir + "/features.csv"));
  // holdout = rows not recorded as training rows
  std::set<std::string> train_ids(fitted.train_ids().begin(), fitted.train_ids().end());
  model::FeatureMatrix holdout;
  holdout.extended_names = all.extended_names;
  for (const auto& r : all.rows)
    if (!train_ids.count(r.id)) holdout.rows.push_back(r);
  if (holdout.rows.empty()) return {kExitValidation, "evaluate: no holdout rows"};

  model::EvalMetrics eval = model::evaluate(fitted, holdout.rows);
  fsio::write_file(
      cfg.out_dir + "/metrics_" + kind + ".json",
      metrics_json(cfg, fitted, eval, train_ids.size(), holdout.rows.size()).dump(2) + "\n");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s: holdout rmse %.4f (n=%zu)", kind.c_str(), eval.rmse,
                holdout.rows.size());
  return {kExitOk, buf};
}

StageOutcome stage_gridmap(const PipelineConfig& cfg, const std::string& kind) {
  RunLock lock(cfg.out_dir);
  ManifestWriter manifest(cfg, "gridmap");
  std::string mp = model_path(cfg, kind);
  if (!fs::exists(mp)) return {kExitValidation, "no fitted model at " + mp};
  manifest.input(mp);

  geo::BBox bbox{0, 0, 0, 0};
  if (cfg.bbox) {
    bbox = *cfg.bbox;
  } else if (cfg.fixture_dir && fs::exists(*cfg.fixture_dir + "/manifest.json")) {
    auto site =
        sitegen::SiteManifest::from_json(json::parse(fsio::read_file(*cfg.fixture_dir + "/manifest.json")));
    bbox = site.bbox;
  } else {
    return {kExitValidation, "gridmap: no bbox in config and no fixture manifest"};
  }

  model::FittedModel fitted = model::load_model(mp);
  model::PredictionGrid grid =
      model::prediction_grid(fitted, bbox, cfg.grid_cfg.cell_m, cfg.grid_cfg.profile, cfg.center);

  fsio::write_file(cfg.out_dir + "/grid_" + kind + ".geojson", model::grid_to_geojson(grid));
  fsio::write_file(cfg.out_dir + "/grid_" + kind + ".csv", model::grid_to_csv(grid));
  manifest.output(cfg.out_dir + "/grid_" + kind + ".geojson");
  manifest.output(cfg.out_dir + "/grid_" + kind + ".csv");
  manifest.write("ok");
  return {kExitOk, std::to_string(grid.cells.size()) + " grid cells"};
}

}  // namespace geoharvest::pipeline
