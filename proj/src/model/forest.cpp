#include "geoharvest/model/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/rng.hpp"

namespace geoharvest::model {

namespace {

struct BuildContext {
  const FeatureMatrix& data;
  const std::vector<double>& y;
  size_t n_features;
  int mtry;
  int min_node;
  rng::Xoshiro256pp* rng;
  Tree* tree;
};

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sumL^2/nL + sumR^2/nR, larger is better
};

// Deterministic tie-breaking: better score wins; on equal score the lower
// feature index wins, then the lower threshold.
bool better(const SplitChoice& a, const SplitChoice& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

SplitChoice best_split(BuildContext& ctx, std::vector<int>& idx,
                       const std::vector<int>& features) {
  SplitChoice best;
  const size_t n = idx.size();

  std::vector<std::pair<double, double>> vals(n);  // (x, y)
  for (int f : features) {
    for (size_t i = 0; i < n; ++i) {
      vals[i] = {ctx.data.value(ctx.data.rows[static_cast<size_t>(idx[i])],
                                static_cast<size_t>(f)),
                 ctx.y[static_cast<size_t>(idx[i])]};
    }
    std::sort(vals.begin(), vals.end());

    double sum_total = 0.0;
    for (const auto& [x, yy] : vals) sum_total += yy;

    double sum_left = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      sum_left += vals[i].second;
      if (vals[i].first == vals[i + 1].first) continue;  // ties cannot split
      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(n - i - 1);
      const double sum_right = sum_total - sum_left;
      SplitChoice cand;
      cand.found = true;
      cand.feature = f;
      cand.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
      cand.score = sum_left * sum_left / nl + sum_right * sum_right / nr;
      if (!best.found || better(cand, best)) best = cand;
    }
  }
  return best;
}

int build_node(BuildContext& ctx, std::vector<int> idx) {
  Tree& tree = *ctx.tree;
  const size_t n = idx.size();

  double sum = 0.0;
  for (int i : idx) sum += ctx.y[static_cast<size_t>(i)];
  const double mean = sum / static_cast<double>(n);

  auto make_leaf = [&]() {
    tree.nodes.push_back({-1, 0.0, -1, -1, mean});
    return static_cast<int>(tree.nodes.size() - 1);
  };

  if (static_cast<int>(n) <= ctx.min_node) return make_leaf();

  bool constant = true;
  for (int i : idx)
    if (ctx.y[static_cast<size_t>(i)] != ctx.y[static_cast<size_t>(idx[0])]) {
      constant = false;
      break;
    }
  if (constant) return make_leaf();

  // mtry features sampled without replacement, then sorted so that the
  // lowest-index tie-break is independent of draw order
  std::vector<int> pool(ctx.n_features);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> features;
  for (int d = 0; d < ctx.mtry && !pool.empty(); ++d) {
    size_t pick = static_cast<size_t>(ctx.rng->below(pool.size()));
    features.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<long>(pick));
  }
  std::sort(features.begin(), features.end());

  SplitChoice split = best_split(ctx, idx, features);
  if (!split.found) return make_leaf();

  std::vector<int> left_idx, right_idx;
  for (int i : idx) {
    double v = ctx.data.value(ctx.data.rows[static_cast<size_t>(i)],
                              static_cast<size_t>(split.feature));
    (v <= split.threshold ? left_idx : right_idx).push_back(i);
  }
  if (left_idx.empty() || right_idx.empty()) return make_leaf();

  int node = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back({split.feature, split.threshold, -1, -1, mean});
  int left = build_node(ctx, std::move(left_idx));
  int right = build_node(ctx, std::move(right_idx));
  tree.nodes[static_cast<size_t>(node)].left = left;
  tree.nodes[static_cast<size_t>(node)].right = right;
  return node;
}

double tree_predict(const Tree& tree, const FeatureRow& row) {
  int node = 0;
  while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
    const TreeNode& tn = tree.nodes[static_cast<size_t>(node)];
    double v = feature_value(row, static_cast<size_t>(tn.feature));
    node = v <= tn.threshold ? tn.left : tn.right;
  }
  return tree.nodes[static_cast<size_t>(node)].value;
}

}  // namespace

ForestModel fit_random_forest(const FeatureMatrix& data, const ForestParams& params,
                              uint64_t seed) {
  if (data.rows.empty()) throw ValidationError("fit_random_forest: no rows");
  if (params.n_trees < 1) throw ValidationError("fit_random_forest: n_trees must be >= 1");

  const size_t n = data.rows.size();
  const size_t p = data.feature_count();

  ForestModel m;
  m.params = params;
  m.seed = seed;
  if (m.params.mtry <= 0)
    m.params.mtry = static_cast<int>((p + 2) / 3);  // ceil(p / 3)
  m.params.mtry = std::min<int>(m.params.mtry, static_cast<int>(p));
  for (size_t i = 0; i < p; ++i) m.feature_names.push_back(data.feature_name(i));
  for (const auto& r : data.rows) m.train_ids.push_back(r.id);

  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = data.rows[i].target;

  bool constant_target = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  m.degenerate_constant = constant_target;

  std::vector<double> oob_sum(n, 0.0);
  std::vector<int> oob_count(n, 0);
  std::vector<char> inbag(n);

  m.trees.reserve(static_cast<size_t>(m.params.n_trees));
  for (int t = 0; t < m.params.n_trees; ++t) {
    rng::Xoshiro256pp tree_rng(rng::derive_seed(seed, static_cast<uint64_t>(t)));

    std::fill(inbag.begin(), inbag.end(), 0);
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) {
      int pick = static_cast<int>(tree_rng.below(n));
      idx[i] = pick;
      inbag[static_cast<size_t>(pick)] = 1;
    }

    Tree tree;
    BuildContext ctx{data, y, p, m.params.mtry, m.params.min_node, &tree_rng, &tree};
    build_node(ctx, std::move(idx));
    m.trees.push_back(std::move(tree));

    for (size_t i = 0; i < n; ++i) {
      if (inbag[i]) continue;
      oob_sum[i] += tree_predict(m.trees.back(), data.rows[i]);
      ++oob_count[i];
    }
  }

  double sse = 0.0;
  int counted = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!oob_count[i]) continue;
    double e = oob_sum[i] / oob_count[i] - y[i];
    sse += e * e;
    ++counted;
  }
  m.oob_rmse = counted > 0 ? std::sqrt(sse / counted) : 0.0;
  return m;
}

double ForestModel::predict_row(const FeatureRow& row) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += tree_predict(t, row);
  return sum / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const std::vector<FeatureRow>& rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict_row(r));
  return out;
}

}  // namespace geoharvest::model
