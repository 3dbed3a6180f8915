#include "geoharvest/model/store.hpp"

#include <json.hpp>

#include <cstring>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/fsio.hpp"

namespace geoharvest::model {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'G', 'H', 'M', 'O', 'D', 'E', 'L', '1'};

class Writer {
 public:
  void raw(const void* p, size_t n) { buf_.append(static_cast<const char*>(p), n); }
  void u32(uint32_t v) { raw(&v, sizeof(v)); }
  void u64(uint64_t v) { raw(&v, sizeof(v)); }
  void i32(int32_t v) { raw(&v, sizeof(v)); }
  void f64(double v) { raw(&v, sizeof(v)); }
  void doubles(std::span<const double> v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(double));
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    raw(m.data().data(), m.data().size() * sizeof(double));
  }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  void raw(void* p, size_t n) {
    if (pos_ + n > data_.size()) throw ParseError("model blob truncated");
    std::memcpy(p, data_.data() + pos_, n);
    pos_ += n;
  }
  uint32_t u32() { uint32_t v; raw(&v, sizeof(v)); return v; }
  uint64_t u64() { uint64_t v; raw(&v, sizeof(v)); return v; }
  int32_t i32() { int32_t v; raw(&v, sizeof(v)); return v; }
  double f64() { double v; raw(&v, sizeof(v)); return v; }
  std::vector<double> doubles() {
    std::vector<double> v(u64());
    raw(v.data(), v.size() * sizeof(double));
    return v;
  }
  Matrix matrix() {
    size_t r = u64(), c = u64();
    Matrix m(r, c);
    raw(m.data().data(), r * c * sizeof(double));
    return m;
  }
  size_t pos() const { return pos_; }

 private:
  std::string_view data_;
  size_t pos_ = 0;
};

void write_gam(Writer& w, const GamModel& g) {
  w.u64(g.terms.size());
  for (const auto& t : g.terms) {
    w.i32(t.feature_index);
    w.f64(t.a);
    w.f64(t.b);
    w.i32(t.k);
    w.matrix(t.Z);
    w.matrix(t.S);
    w.matrix(t.S0);
    w.f64(t.lambda);
    w.f64(t.lambda0);
    w.f64(t.edf);
    w.u64(t.col_offset);
    w.u64(t.n_cols);
  }
  w.u64(g.linears.size());
  for (const auto& l : g.linears) {
    w.i32(l.feature_index);
    w.f64(l.mean);
    w.f64(l.sd);
    w.f64(l.lambda);
    w.f64(l.edf);
    w.u64(l.col);
  }
  w.doubles(g.beta);
}

GamModel read_gam(Reader& r, const json& meta) {
  GamModel g;
  g.spec = GamSpec::from_json(meta.at("spec"));
  for (const auto& n : meta.value("extended_names", json::array()))
    g.extended_names.push_back(n.get<std::string>());
  for (const auto& id : meta.value("train_ids", json::array()))
    g.train_ids.push_back(id.get<std::string>());

  size_t nterms = r.u64();
  for (size_t i = 0; i < nterms; ++i) {
    SmoothTerm t;
    t.feature_index = r.i32();
    t.a = r.f64();
    t.b = r.f64();
    t.k = r.i32();
    t.Z = r.matrix();
    t.S = r.matrix();
    t.S0 = r.matrix();
    t.lambda = r.f64();
    t.lambda0 = r.f64();
    t.edf = r.f64();
    t.col_offset = r.u64();
    t.n_cols = r.u64();
    if (i < g.spec.smooths.size()) t.feature = g.spec.smooths[i].feature;
    g.terms.push_back(std::move(t));
  }
  size_t nlin = r.u64();
  for (size_t i = 0; i < nlin; ++i) {
    LinearTerm l;
    l.feature_index = r.i32();
    l.mean = r.f64();
    l.sd = r.f64();
    l.lambda = r.f64();
    l.edf = r.f64();
    l.col = r.u64();
    if (i < g.spec.linear_terms.size()) l.feature = g.spec.linear_terms[i];
    g.linears.push_back(std::move(l));
  }
  g.beta = r.doubles();

  const json& info = meta.at("info");
  g.info.n_train = info.value("n_train", 0);
  g.info.gcv = info.value("gcv", 0.0);
  g.info.rss = info.value("rss", 0.0);
  g.info.edf_total = info.value("edf_total", 0.0);
  g.info.r2_adj = info.value("r2_adj", 0.0);
  g.info.train_rmse = info.value("train_rmse", 0.0);
  for (const auto& e : info.value("edf_by_term", json::array()))
    g.info.edf_by_term.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
  return g;
}

void write_forest(Writer& w, const ForestModel& f) {
  w.u64(f.trees.size());
  for (const auto& t : f.trees) {
    w.u64(t.nodes.size());
    for (const auto& n : t.nodes) {
      w.i32(n.feature);
      w.f64(n.threshold);
      w.i32(n.left);
      w.i32(n.right);
      w.f64(n.value);
    }
  }
}

ForestModel read_forest(Reader& r, const json& meta) {
  ForestModel f;
  f.params.n_trees = meta.at("params").value("n_trees", 500);
  f.params.mtry = meta.at("params").value("mtry", 0);
  f.params.min_node = meta.at("params").value("min_node", 5);
  f.seed = meta.value("seed", 0ULL);
  f.oob_rmse = meta.value("oob_rmse", 0.0);
  f.degenerate_constant = meta.value("degenerate_constant", false);
  for (const auto& n : meta.value("feature_names", json::array()))
    f.feature_names.push_back(n.get<std::string>());
  for (const auto& id : meta.value("train_ids", json::array()))
    f.train_ids.push_back(id.get<std::string>());

  size_t ntrees = r.u64();
  f.trees.reserve(ntrees);
  for (size_t i = 0; i < ntrees; ++i) {
    Tree t;
    size_t nn = r.u64();
    t.nodes.reserve(nn);
    for (size_t k = 0; k < nn; ++k) {
      TreeNode n;
      n.feature = r.i32();
      n.threshold = r.f64();
      n.left = r.i32();
      n.right = r.i32();
      n.value = r.f64();
      t.nodes.push_back(n);
    }
    f.trees.push_back(std::move(t));
  }
  return f;
}

json gam_meta(const GamModel& g) {
  json info{{"n_train", g.info.n_train},     {"gcv", g.info.gcv},
            {"rss", g.info.rss},             {"edf_total", g.info.edf_total},
            {"r2_adj", g.info.r2_adj},       {"train_rmse", g.info.train_rmse}};
  info["edf_by_term"] = json::array();
  for (const auto& [name, edf] : g.info.edf_by_term)
    info["edf_by_term"].push_back(json::array({name, edf}));
  return json{{"spec", g.spec.to_json()},
              {"extended_names", g.extended_names},
              {"train_ids", g.train_ids},
              {"info", info}};
}

json forest_meta(const ForestModel& f) {
  return json{{"params", json{{"n_trees", f.params.n_trees},
                              {"mtry", f.params.mtry},
                              {"min_node", f.params.min_node}}},
              {"seed", f.seed},
              {"oob_rmse", f.oob_rmse},
              {"degenerate_constant", f.degenerate_constant},
              {"feature_names", f.feature_names},
              {"train_ids", f.train_ids}};
}

}  // namespace

void save_model(const FittedModel& m, const std::string& path) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(static_cast<uint32_t>(m.kind));

  json meta;
  if (m.kind == FittedModel::Kind::random_forest) meta = forest_meta(*m.forest);
  else meta = gam_meta(*m.gam);
  std::string meta_str = meta.dump();
  w.u64(meta_str.size());
  w.raw(meta_str.data(), meta_str.size());

  if (m.kind == FittedModel::Kind::random_forest) write_forest(w, *m.forest);
  else write_gam(w, *m.gam);

  fsio::write_file(path, w.str());
}

FittedModel load_model(const std::string& path) {
  std::string blob = fsio::read_file(path);
  Reader r(blob);
  char magic[8];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError("not a model blob (bad magic): " + path);

  FittedModel m;
  m.kind = static_cast<FittedModel::Kind>(r.u32());
  std::string meta_str(r.u64(), '\0');
  r.raw(meta_str.data(), meta_str.size());
  json meta = json::parse(meta_str);

  if (m.kind == FittedModel::Kind::random_forest) m.forest = read_forest(r, meta);
  else m.gam = read_gam(r, meta);
  return m;
}

}  // namespace geoharvest::model
