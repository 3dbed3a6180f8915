#include "geoharvest/model/evaluate.hpp"

#include <cmath>

#include "geoharvest/kernels/kernels.hpp"
#include "geoharvest/util/errors.hpp"

namespace geoharvest::model {

double FittedModel::predict_row(const FeatureRow& row) const {
  if (kind == Kind::random_forest) return forest->predict_row(row);
  return gam->predict_row(row);
}

std::vector<double> FittedModel::predict(const std::vector<FeatureRow>& rows) const {
  if (kind == Kind::random_forest) return forest->predict(rows);
  return gam->predict(rows);
}

const std::vector<std::string>& FittedModel::train_ids() const {
  if (kind == Kind::random_forest) return forest->train_ids;
  return gam->train_ids;
}

std::vector<std::string> FittedModel::extended_names() const {
  if (kind == Kind::random_forest) {
    std::vector<std::string> out;
    for (size_t i = 4; i < forest->feature_names.size(); ++i)
      out.push_back(forest->feature_names[i]);
    return out;
  }
  return gam->extended_names;
}

std::string FittedModel::kind_name(Kind k) {
  switch (k) {
    case Kind::gam: return "gam";
    case Kind::gam_shrinkage: return "gam_shrinkage";
    default: return "random_forest";
  }
}

std::optional<FittedModel::Kind> FittedModel::kind_from_name(std::string_view s) {
  if (s == "gam") return Kind::gam;
  if (s == "gam_shrinkage") return Kind::gam_shrinkage;
  if (s == "random_forest") return Kind::random_forest;
  return std::nullopt;
}

double rmse(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size() || predictions.empty())
    throw ValidationError("rmse: size mismatch or empty input");
  double sse = kernels::sumsq_diff(predictions, truth);
  return std::sqrt(sse / static_cast<double>(predictions.size()));
}

EvalMetrics evaluate(const FittedModel& model, const std::vector<FeatureRow>& holdout) {
  if (holdout.empty()) throw ValidationError("evaluate: empty holdout");

  std::vector<double> truth(holdout.size());
  for (size_t i = 0; i < holdout.size(); ++i) truth[i] = holdout[i].target;
  std::vector<double> pred = model.predict(holdout);

  EvalMetrics m;
  m.n = static_cast<int>(holdout.size());
  m.rmse = rmse(pred, truth);

  double mean = kernels::sum(truth) / static_cast<double>(truth.size());
  double tss = 0.0;
  for (double v : truth) tss += (v - mean) * (v - mean);
  double sse = kernels::sumsq_diff(pred, truth);
  m.r2 = tss > 0 ? 1.0 - sse / tss : 0.0;

  if (model.kind == FittedModel::Kind::random_forest) {
    m.r2_adj = m.r2;
    m.r2_adj_is_plain = true;
  } else {
    const double n = static_cast<double>(holdout.size());
    const double edf = model.gam->info.edf_total;  // training edf by contract
    m.r2_adj = n - edf > 1 ? 1.0 - (1.0 - m.r2) * (n - 1.0) / (n - edf) : m.r2;
  }
  return m;
}

}  // namespace geoharvest::model
