#pragma once

#include <string>

#include "geoharvest/pipeline/config.hpp"

namespace geoharvest::pipeline {

// Exit codes shared by the stage functions and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitStageFailure = 3;
inline constexpr int kExitComplianceBlock = 4;

struct StageOutcome {
  int exit_code = kExitOk;
  std::string message;
};

// Stages communicate exclusively through files in cfg.out_dir; each one
// writes a run manifest (manifest.<stage>.json) with input/output content
// hashes chained to its predecessor's manifest.
StageOutcome stage_assess(const PipelineConfig& cfg, const std::string& answers_path);
StageOutcome stage_fetch(const PipelineConfig& cfg, bool acknowledge_risk = false);
StageOutcome stage_extract(const PipelineConfig& cfg);
StageOutcome stage_geocode(const PipelineConfig& cfg);
StageOutcome stage_quality(const PipelineConfig& cfg);
StageOutcome stage_model_fit(const PipelineConfig& cfg, const std::string& kind);
StageOutcome stage_model_evaluate(const PipelineConfig& cfg, const std::string& kind);
StageOutcome stage_gridmap(const PipelineConfig& cfg, const std::string& kind);

// Advisory per-out-dir lock; a second concurrent run fails fast.
class RunLock {
 public:
  explicit RunLock(const std::string& out_dir);  // throws ValidationError when held
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::string path_;
};

}  // namespace geoharvest::pipeline
