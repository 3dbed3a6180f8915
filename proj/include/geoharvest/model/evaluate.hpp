#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoharvest/model/forest.hpp"
#include "geoharvest/model/gam.hpp"

namespace geoharvest::model {

// Tagged union over the model family; the serialization and CLI layers work
// against this wrapper.
struct FittedModel {
  enum class Kind { gam, gam_shrinkage, random_forest };

  Kind kind = Kind::gam;
  std::optional<GamModel> gam;
  std::optional<ForestModel> forest;

  double predict_row(const FeatureRow& row) const;
  std::vector<double> predict(const std::vector<FeatureRow>& rows) const;
  const std::vector<std::string>& train_ids() const;
  std::vector<std::string> extended_names() const;

  static std::string kind_name(Kind k);
  static std::optional<Kind> kind_from_name(std::string_view s);
};

struct EvalMetrics {
  int n = 0;
  double rmse = 0.0;
  double r2 = 0.0;
  double r2_adj = 0.0;
  bool r2_adj_is_plain = false;  // forest: no edf notion, plain R² reported
};

// Holdout evaluation; the caller asserts disjointness from training
// (train ids are recorded on the model for exactly that check).
EvalMetrics evaluate(const FittedModel& model, const std::vector<FeatureRow>& holdout);

double rmse(std::span<const double> predictions, std::span<const double> truth);

}  // namespace geoharvest::model
