#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <thread>
#include <iostream>

#include "geoharvest/pipeline/config.hpp"
#include "geoharvest/pipeline/stages.hpp"
#include "geoharvest/sitegen/server.hpp"
#include "geoharvest/sitegen/sitegen.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"

namespace gh = geoharvest;
namespace pl = geoharvest::pipeline;

namespace {

volatile std::sig_atomic_t g_stop_requested = 0;
void handle_signal(int) { g_stop_requested = 1; }

struct GlobalOpts {
  std::string config_path;
  std::string out_override;
  int64_t seed_override = -1;
  bool verbose = false;
};

pl::PipelineConfig load_config(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw gh::ValidationError("this subcommand needs --config <pipeline.json>");
  pl::PipelineConfig cfg = pl::PipelineConfig::load(g.config_path);
  if (!g.out_override.empty()) cfg.out_dir = g.out_override;
  if (g.seed_override >= 0) cfg.seed = static_cast<uint64_t>(g.seed_override);
  return cfg;
}

int finish(const pl::StageOutcome& outcome, bool verbose) {
  if (!outcome.message.empty() && (verbose || outcome.exit_code != pl::kExitOk))
    std::cerr << outcome.message << "\n";
  else if (!outcome.message.empty())
    std::cout << outcome.message << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geographic web-scraping workflow: compliance-gated fetching, "
               "extraction, geocoding, quality reporting and hedonic modeling"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "pipeline config file (JSON)");
  app.add_option("--out", g.out_override, "override the output directory");
  app.add_option("--seed", g.seed_override, "override the config seed");
  app.add_flag("--verbose", g.verbose, "chatty progress output");

  // assess
  std::string answers_path;
  auto* assess = app.add_subcommand("assess", "evaluate the viability checklist answers");
  assess->add_option("--answers", answers_path, "answers file (Qn: yes|no|unknown per line)")
      ->required();

  // fetch
  bool acknowledge_risk = false;
  double min_delay_override = -1.0;
  std::string window_str;
  int max_retries_override = -1;
  std::string user_agent_override;
  bool unsafe_ignore_robots = false;
  auto* fetchc = app.add_subcommand("fetch", "politely fetch listing pages");
  fetchc->add_flag("--acknowledge-risk", acknowledge_risk,
                   "proceed despite a 'stop' assessment verdict (logged)");
  fetchc->add_option("--min-delay", min_delay_override, "minimum inter-request delay (s)");
  fetchc->add_option("--window", window_str, "local-time fetch window START-END (hours)");
  fetchc->add_option("--max-retries", max_retries_override, "total attempt budget per URL");
  fetchc->add_option("--user-agent", user_agent_override, "User-Agent header");
  fetchc->add_flag("--unsafe-ignore-robots", unsafe_ignore_robots,
                   "disable robots.txt enforcement (audited, discouraged)");

  auto* extractc = app.add_subcommand("extract", "turn fetched pages into typed records");
  auto* geocodec = app.add_subcommand("geocode", "resolve addresses to coordinates");
  auto* qualityc = app.add_subcommand("quality", "missingness/plausibility report, "
                                                 "imputation and exclusions");

  // model fit|evaluate
  auto* modelc = app.add_subcommand("model", "hedonic model fitting and evaluation");
  modelc->require_subcommand(1);
  std::string fit_kind = "gam";
  auto* fitc = modelc->add_subcommand("fit", "fit a model on the retained corpus");
  fitc->add_option("--kind", fit_kind, "gam | gam_shrinkage | random_forest");
  std::string eval_kind = "gam";
  auto* evalc = modelc->add_subcommand("evaluate", "evaluate a fitted model on the holdout");
  evalc->add_option("--kind", eval_kind, "gam | gam_shrinkage | random_forest");

  std::string grid_kind = "gam";
  auto* gridc = app.add_subcommand("gridmap", "spatial prediction grid (GeoJSON + CSV)");
  gridc->add_option("--kind", grid_kind, "gam | gam_shrinkage | random_forest");

  // sitegen
  std::string site_spec_path, site_out;
  auto* sitegenc = app.add_subcommand("sitegen", "generate a synthetic listing site");
  sitegenc->add_option("--spec", site_spec_path, "site spec JSON")->required();
  sitegenc->add_option("--sitedir", site_out, "output directory for the site tree")->required();

  // serve
  std::string serve_dir, serve_log;
  int serve_port = 0;
  auto* servec = app.add_subcommand("serve", "serve a site tree over HTTP");
  servec->add_option("--dir", serve_dir, "site tree directory")->required();
  servec->add_option("--port", serve_port, "port (0 = ephemeral)");
  servec->add_option("--request-log", serve_log, "write the request log here on shutdown");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sitegenc) {
      auto spec = gh::sitegen::SyntheticSiteSpec::from_json(
          nlohmann::json::parse(gh::fsio::read_file(site_spec_path)));
      if (g.seed_override >= 0) spec.seed = static_cast<uint64_t>(g.seed_override);
      auto manifest = gh::sitegen::generate_site(spec, site_out);
      std::cout << manifest.listings.size() << " listings, " << manifest.index_pages.size()
                << " index pages written to " << site_out << "\n";
      return pl::kExitOk;
    }
    if (*servec) {
      gh::sitegen::FixtureServer server(serve_dir, serve_port);
      std::cout << "serving " << serve_dir << " at " << server.origin() << "\n";
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      while (!g_stop_requested) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      server.stop();
      if (!serve_log.empty()) server.write_request_log(serve_log);
      return pl::kExitOk;
    }

    pl::PipelineConfig cfg = load_config(g);

    if (*assess) return finish(pl::stage_assess(cfg, answers_path), g.verbose);
    if (*fetchc) {
      if (min_delay_override >= 0) cfg.politeness.min_delay_s = min_delay_override;
      if (max_retries_override > 0) cfg.politeness.max_retries = max_retries_override;
      if (!user_agent_override.empty()) cfg.politeness.user_agent = user_agent_override;
      if (unsafe_ignore_robots) cfg.politeness.respect_robots = false;
      if (!window_str.empty()) {
        auto dash = window_str.find('-');
        if (dash == std::string::npos)
          throw gh::ValidationError("--window expects START-END, e.g. 22-6");
        cfg.politeness.window = gh::fetch::TimeWindow{
            std::stoi(window_str.substr(0, dash)), std::stoi(window_str.substr(dash + 1))};
      }
      return finish(pl::stage_fetch(cfg, acknowledge_risk), g.verbose);
    }
    if (*extractc) return finish(pl::stage_extract(cfg), g.verbose);
    if (*geocodec) return finish(pl::stage_geocode(cfg), g.verbose);
    if (*qualityc) return finish(pl::stage_quality(cfg), g.verbose);
    if (*modelc) {
      if (*fitc) return finish(pl::stage_model_fit(cfg, fit_kind), g.verbose);
      if (*evalc) return finish(pl::stage_model_evaluate(cfg, eval_kind), g.verbose);
    }
    if (*gridc) return finish(pl::stage_gridmap(cfg, grid_kind), g.verbose);
  } catch (const gh::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return pl::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return pl::kExitStageFailure;
  }
  return pl::kExitValidation;
}
