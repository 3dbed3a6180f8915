#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoharvest/model/features.hpp"

namespace geoharvest::model {

struct ForestParams {
  int n_trees = 500;
  int mtry = 0;  // 0 = ceil(p / 3)
  int min_node = 5;
};

struct TreeNode {
  int feature = -1;  // -1 = leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  double value = 0.0;  // leaf mean
};

struct Tree {
  std::vector<TreeNode> nodes;
};

// Bootstrap ensemble of variance-reduction CART regression trees with
// random feature subsetting. Bit-for-bit deterministic given the seed:
// per-tree streams derive from the master seed, and split ties break on
// lowest feature index, then lowest threshold.
class ForestModel {
 public:
  ForestParams params;
  uint64_t seed = 0;
  std::vector<Tree> trees;
  std::vector<std::string> feature_names;  // layout contract for prediction
  double oob_rmse = 0.0;
  bool degenerate_constant = false;  // constant training target
  std::vector<std::string> train_ids;

  double predict_row(const FeatureRow& row) const;
  std::vector<double> predict(const std::vector<FeatureRow>& rows) const;
};

ForestModel fit_random_forest(const FeatureMatrix& data, const ForestParams& params,
                              uint64_t seed);

}  // namespace geoharvest::model
