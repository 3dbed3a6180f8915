#include "geoharvest/model/gam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoharvest/kernels/kernels.hpp"
#include "geoharvest/util/errors.hpp"

namespace geoharvest::model {

using nlohmann::json;

GamSpec GamSpec::defaults(bool shrinkage) {
  GamSpec s;
  for (const auto& f : FeatureMatrix::core_names()) s.smooths.push_back({f, 10});
  s.shrinkage = shrinkage;
  s.lambda_grid = default_lambda_grid();
  return s;
}

std::vector<double> GamSpec::default_lambda_grid() {
  std::vector<double> grid;
  const int n = 40;
  for (int i = 0; i < n; ++i)
    grid.push_back(std::pow(10.0, -4.0 + 10.0 * static_cast<double>(i) / (n - 1)));
  return grid;
}

void GamSpec::validate() const {
  if (smooths.empty() && linear_terms.empty())
    throw ValidationError("gam spec: no smooth or linear terms");
  for (const auto& s : smooths) {
    if (s.basis_size < 4)
      throw ValidationError("gam spec: smooth '" + s.feature + "' needs basis_size >= 4");
  }
  if (lambda_grid.empty()) throw ValidationError("gam spec: empty lambda grid");
  for (double l : lambda_grid)
    if (!(l > 0.0)) throw ValidationError("gam spec: lambda grid must be positive");
}

GamSpec GamSpec::from_json(const json& j) {
  GamSpec s;
  if (j.contains("smooths")) {
    for (const auto& sj : j["smooths"])
      s.smooths.push_back({sj.at("feature").get<std::string>(), sj.value("basis_size", 10)});
  } else {
    for (const auto& f : FeatureMatrix::core_names()) s.smooths.push_back({f, 10});
  }
  for (const auto& lt : j.value("linear_terms", json::array()))
    s.linear_terms.push_back(lt.get<std::string>());
  s.shrinkage = j.value("shrinkage", false);
  if (j.contains("lambda_grid"))
    for (const auto& l : j["lambda_grid"]) s.lambda_grid.push_back(l.get<double>());
  else
    s.lambda_grid = default_lambda_grid();
  s.max_sweeps = j.value("max_sweeps", 5);
  s.validate();
  return s;
}

json GamSpec::to_json() const {
  json j;
  j["smooths"] = json::array();
  for (const auto& s : smooths)
    j["smooths"].push_back({{"feature", s.feature}, {"basis_size", s.basis_size}});
  j["linear_terms"] = linear_terms;
  j["shrinkage"] = shrinkage;
  j["lambda_grid"] = lambda_grid;
  j["max_sweeps"] = max_sweeps;
  return j;
}

namespace {

// Orthonormal basis of the null space of a single constraint row c
// (Householder reflection; columns 2..k of H).
Matrix constraint_null_basis(std::span<const double> c) {
  const size_t k = c.size();
  std::vector<double> w(c.begin(), c.end());
  double norm = std::sqrt(kernels::dot(w, w));
  if (norm == 0.0) throw ValidationError("gam: degenerate constraint vector");
  w[0] += (w[0] >= 0 ? norm : -norm);
  double wnorm2 = kernels::dot(w, w);

  Matrix Z(k, k - 1);
  for (size_t j = 1; j < k; ++j) {
    for (size_t i = 0; i < k; ++i) {
      double h = (i == j ? 1.0 : 0.0) - 2.0 * w[i] * w[j] / wnorm2;
      Z(i, j - 1) = h;
    }
  }
  return Z;
}

Matrix transform_penalty(const Matrix& S_full, const Matrix& Z) {
  const size_t k = Z.rows(), m = Z.cols();
  Matrix SZ(k, m);
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < k; ++i) {
      double s = 0;
      for (size_t l = 0; l < k; ++l) s += S_full(i, l) * Z(l, j);
      SZ(i, j) = s;
    }
  Matrix out(m, m);
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < m; ++i) out(i, j) = kernels::dot(Z.col(i), SZ.col(j));
  return out;
}

Matrix null_space_penalty(const Matrix& S) {
  Matrix V;
  std::vector<double> w;
  sym_eigen(S, V, w);
  const double tol = 1e-7 * std::max(w.empty() ? 0.0 : w.back(), 1e-12);
  Matrix S0(S.rows(), S.cols());
  for (size_t e = 0; e < w.size(); ++e) {
    if (w[e] >= tol) continue;
    for (size_t i = 0; i < S.rows(); ++i)
      for (size_t j = 0; j < S.cols(); ++j) S0(i, j) += V(i, e) * V(j, e);
  }
  return S0;
}

struct Workspace {
  Matrix X;       // n x p design
  Matrix XtX;     // p x p
  std::vector<double> Xty;
  double yty = 0.0;
  size_t n = 0, p = 0;
};

struct SolveOutcome {
  std::vector<double> beta;
  double rss = 0.0, gcv = 0.0, tr_h = 0.0;
  std::vector<double> block_edf;  // aligned with terms then linears
  bool singular = false;
  size_t singular_pivot = 0;
};

Matrix assemble_penalty(const GamModel& m, size_t p) {
  Matrix P(p, p);
  for (const auto& t : m.terms) {
    for (size_t i = 0; i < t.n_cols; ++i)
      for (size_t j = 0; j < t.n_cols; ++j) {
        double v = t.lambda * t.S(i, j);
        if (t.lambda0 > 0.0) v += t.lambda0 * t.S0(i, j);
        P(t.col_offset + i, t.col_offset + j) += v;
      }
  }
  for (const auto& l : m.linears) P(l.col, l.col) += l.lambda;
  return P;
}

SolveOutcome penalized_solve(const Workspace& ws, const GamModel& m) {
  SolveOutcome out;
  Matrix A = ws.XtX;
  Matrix P = assemble_penalty(m, ws.p);
  for (size_t i = 0; i < ws.p; ++i)
    for (size_t j = 0; j < ws.p; ++j) A(i, j) += P(i, j);

  Matrix L;
  try {
    L = cholesky(A);
  } catch (const SingularMatrixError& e) {
    out.singular = true;
    out.singular_pivot = e.pivot;
    return out;
  }
  out.beta = cholesky_solve(L, ws.Xty);

  // rss = y'y - 2 b'X'y + b'X'X b
  std::vector<double> xtxb(ws.p, 0.0);
  for (size_t j = 0; j < ws.p; ++j) kernels::axpy(out.beta[j], ws.XtX.col(j), xtxb);
  out.rss = ws.yty - 2.0 * kernels::dot(out.beta, ws.Xty) + kernels::dot(out.beta, xtxb);
  if (out.rss < 0.0) out.rss = 0.0;

  // F = (X'X + P)^{-1} X'X; tr(H) = tr(F); per-block edf from diag(F)
  Matrix F = cholesky_solve_matrix(L, ws.XtX);
  std::vector<double> diag(ws.p);
  for (size_t i = 0; i < ws.p; ++i) diag[i] = F(i, i);
  out.tr_h = kernels::sum(diag);

  for (const auto& t : m.terms) {
    double e = 0;
    for (size_t i = 0; i < t.n_cols; ++i) e += diag[t.col_offset + i];
    out.block_edf.push_back(e);
  }
  for (const auto& l : m.linears) out.block_edf.push_back(diag[l.col]);

  const double n = static_cast<double>(ws.n);
  const double denom = n - out.tr_h;
  out.gcv = denom > 0 ? n * out.rss / (denom * denom) : std::numeric_limits<double>::infinity();
  return out;
}

std::string pivot_to_term(const GamModel& m, size_t pivot) {
  for (const auto& t : m.terms)
    if (pivot >= t.col_offset && pivot < t.col_offset + t.n_cols) return t.feature;
  for (const auto& l : m.linears)
    if (pivot == l.col) return l.feature;
  return "intercept";
}

}  // namespace

GamSolveResult gam_penalized_solve(const Matrix& design, std::span<const double> y,
                                   const Matrix& penalty) {
  Workspace ws;
  ws.X = design;
  ws.XtX = crossprod(design);
  ws.Xty = crossprod_vec(design, y);
  ws.yty = kernels::dot(y, y);
  ws.n = design.rows();
  ws.p = design.cols();

  Matrix A = ws.XtX;
  for (size_t i = 0; i < ws.p; ++i)
    for (size_t j = 0; j < ws.p; ++j) A(i, j) += penalty(i, j);
  Matrix L = cholesky(A);

  GamSolveResult out;
  out.beta = cholesky_solve(L, ws.Xty);
  std::vector<double> xtxb(ws.p, 0.0);
  for (size_t j = 0; j < ws.p; ++j) kernels::axpy(out.beta[j], ws.XtX.col(j), xtxb);
  out.rss = ws.yty - 2.0 * kernels::dot(out.beta, ws.Xty) + kernels::dot(out.beta, xtxb);
  Matrix F = cholesky_solve_matrix(L, ws.XtX);
  for (size_t i = 0; i < ws.p; ++i) out.edf_total += F(i, i);
  const double n = static_cast<double>(ws.n);
  out.gcv = n * out.rss / ((n - out.edf_total) * (n - out.edf_total));
  return out;
}

GamModel fit_gam(const FeatureMatrix& data, const GamSpec& spec, uint64_t seed) {
  (void)seed;  // the fit is deterministic; kept for interface uniformity
  spec.validate();
  if (data.rows.empty()) throw ValidationError("fit_gam: no rows");
  for (const auto& r : data.rows)
    if (!std::isfinite(r.target)) throw ValidationError("fit_gam: non-finite target value");

  GamModel m;
  m.spec = spec;
  m.extended_names = data.extended_names;

  const size_t n = data.rows.size();
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = data.rows[i].target;

  // ---- term construction ----
  size_t col = 1;  // 0 = intercept
  for (const auto& sp : spec.smooths) {
    SmoothTerm t;
    t.feature = sp.feature;
    t.feature_index = data.feature_index(sp.feature);
    if (t.feature_index < 0)
      throw ValidationError("fit_gam: unknown smooth feature '" + sp.feature + "'");
    t.k = sp.basis_size;

    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i)
      x[i] = data.value(data.rows[i], static_cast<size_t>(t.feature_index));
    t.a = *std::min_element(x.begin(), x.end());
    t.b = *std::max_element(x.begin(), x.end());

    BSplineBasis basis(t.a, t.b, t.k);
    t.a = basis.lower();
    t.b = basis.upper();
    Matrix B = basis.design(x);

    std::vector<double> colmeans(static_cast<size_t>(t.k));
    for (int j = 0; j < t.k; ++j)
      colmeans[static_cast<size_t>(j)] =
          kernels::sum(B.col(static_cast<size_t>(j))) / static_cast<double>(n);
    t.Z = constraint_null_basis(colmeans);
    t.S = transform_penalty(BSplineBasis::second_diff_penalty(t.k), t.Z);
    if (spec.shrinkage) t.S0 = null_space_penalty(t.S);

    t.col_offset = col;
    t.n_cols = static_cast<size_t>(t.k - 1);
    col += t.n_cols;
    m.terms.push_back(std::move(t));
  }
  for (const auto& name : spec.linear_terms) {
    LinearTerm l;
    l.feature = name;
    l.feature_index = data.feature_index(name);
    if (l.feature_index < 0)
      throw ValidationError("fit_gam: unknown linear feature '" + name + "'");
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i)
      x[i] = data.value(data.rows[i], static_cast<size_t>(l.feature_index));
    double mean = kernels::sum(x) / static_cast<double>(n);
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    l.mean = mean;
    l.sd = var > 0 ? std::sqrt(var) : 1.0;
    l.col = col++;
    m.linears.push_back(std::move(l));
  }
  const size_t p = col;

  // ---- design assembly ----
  Workspace ws;
  ws.n = n;
  ws.p = p;
  ws.X = Matrix(n, p);
  for (size_t i = 0; i < n; ++i) ws.X(i, 0) = 1.0;
  for (auto& t : m.terms) {
    BSplineBasis basis(t.a, t.b, t.k);
    std::vector<double> brow(static_cast<size_t>(t.k));
    for (size_t i = 0; i < n; ++i) {
      basis.eval(data.value(data.rows[i], static_cast<size_t>(t.feature_index)), brow);
      for (size_t j = 0; j < t.n_cols; ++j) {
        ws.X(i, t.col_offset + j) = kernels::dot(brow, t.Z.col(j));
      }
    }
  }
  for (auto& l : m.linears) {
    for (size_t i = 0; i < n; ++i) {
      double v = data.value(data.rows[i], static_cast<size_t>(l.feature_index));
      ws.X(i, l.col) = (v - l.mean) / l.sd;
    }
  }
  ws.XtX = crossprod(ws.X);
  ws.Xty = crossprod_vec(ws.X, y);
  ws.yty = kernels::dot(y, y);

  // ---- GCV coordinate descent over the lambda grid ----
  const auto& grid = spec.lambda_grid;
  const double mid = grid[grid.size() / 2];
  for (auto& t : m.terms) {
    t.lambda = mid;
    t.lambda0 = spec.shrinkage ? mid : 0.0;
  }
  for (auto& l : m.linears) l.lambda = spec.shrinkage ? mid : 0.0;

  struct Coord {
    double* lambda;
  };
  std::vector<Coord> coords;
  for (auto& t : m.terms) {
    coords.push_back({&t.lambda});
    if (spec.shrinkage) coords.push_back({&t.lambda0});
  }
  if (spec.shrinkage)
    for (auto& l : m.linears) coords.push_back({&l.lambda});

  SolveOutcome current = penalized_solve(ws, m);
  if (current.singular)
    throw ValidationError("fit_gam: singular penalized design involving term '" +
                          pivot_to_term(m, current.singular_pivot) + "'");

  for (int sweep = 0; sweep < spec.max_sweeps; ++sweep) {
    bool changed = false;
    for (auto& c : coords) {
      double best_lambda = *c.lambda;
      double best_gcv = current.gcv;
      SolveOutcome best = current;
      for (double g : grid) {
        if (g == *c.lambda) continue;
        double saved = *c.lambda;
        *c.lambda = g;
        SolveOutcome trial = penalized_solve(ws, m);
        *c.lambda = saved;
        if (!trial.singular && trial.gcv < best_gcv) {
          best_gcv = trial.gcv;
          best_lambda = g;
          best = std::move(trial);
        }
      }
      if (best_lambda != *c.lambda) {
        *c.lambda = best_lambda;
        current = std::move(best);
        changed = true;
      }
    }
    if (!changed) break;
  }

  if (current.singular)
    throw ValidationError("fit_gam: singular penalized design involving term '" +
                          pivot_to_term(m, current.singular_pivot) + "'");

  m.beta = current.beta;
  size_t b = 0;
  for (auto& t : m.terms) {
    t.edf = current.block_edf[b++];
    m.info.edf_by_term.emplace_back(t.feature, t.edf);
  }
  for (auto& l : m.linears) {
    l.edf = current.block_edf[b++];
    m.info.edf_by_term.emplace_back(l.feature, l.edf);
  }

  m.info.n_train = static_cast<int>(n);
  m.info.gcv = current.gcv;
  m.info.rss = current.rss;
  m.info.edf_total = current.tr_h;
  m.info.train_rmse = std::sqrt(current.rss / static_cast<double>(n));
  double ymean = kernels::sum(y) / static_cast<double>(n);
  double tss = 0;
  for (double v : y) tss += (v - ymean) * (v - ymean);
  double dof = static_cast<double>(n) - current.tr_h;
  m.info.r2_adj =
      tss > 0 && dof > 0 ? 1.0 - (current.rss / dof) / (tss / (static_cast<double>(n) - 1)) : 0.0;

  m.train_ids.reserve(n);
  for (const auto& r : data.rows) m.train_ids.push_back(r.id);
  return m;
}

double GamModel::predict_row(const FeatureRow& row) const {
  double out = beta.empty() ? 0.0 : beta[0];
  std::vector<double> brow;
  for (const auto& t : terms) {
    double x = feature_value(row, static_cast<size_t>(t.feature_index));
    BSplineBasis basis(t.a, t.b, t.k);
    brow.resize(static_cast<size_t>(t.k));
    basis.eval(x, brow);
    for (size_t j = 0; j < t.n_cols; ++j)
      out += kernels::dot(brow, t.Z.col(j)) * beta[t.col_offset + j];
  }
  for (const auto& l : linears) {
    double x = feature_value(row, static_cast<size_t>(l.feature_index));
    out += (x - l.mean) / l.sd * beta[l.col];
  }
  return out;
}

std::vector<double> GamModel::predict(const std::vector<FeatureRow>& rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict_row(r));
  return out;
}

double GamModel::smooth_effect(size_t term_index, double x) const {
  const auto& t = terms[term_index];
  BSplineBasis basis(t.a, t.b, t.k);
  std::vector<double> brow(static_cast<size_t>(t.k));
  basis.eval(x, brow);
  double out = 0;
  for (size_t j = 0; j < t.n_cols; ++j)
    out += kernels::dot(brow, t.Z.col(j)) * beta[t.col_offset + j];
  return out;
}

}  // namespace geoharvest::model
