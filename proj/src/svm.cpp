#include "cvfspeech/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace cvf {

namespace {

constexpr double kStepEps = 1e-7;
constexpr int kHardSweepCap = 5000;

double kernel_eval(KernelKind kind, double gamma,
                   std::span<const double> u, std::span<const double> v) {
  if (kind == KernelKind::linear) {
    double dot = 0.0;
    for (size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    return dot;
  }
  double sq = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

// SMO working state over a precomputed Gram matrix.
struct Solver {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  const SvmConfig& cfg;
  std::vector<double> gram;
  std::vector<double> alpha;
  std::vector<double> g;  // sum_j alpha_j y_j K(i,j), bias excluded
  double b = 0.0;
  std::mt19937_64 rng;
  int n;

  Solver(const std::vector<std::vector<double>>& x_,
         const std::vector<int>& y_, const SvmConfig& cfg_, uint64_t seed)
      : x(x_), y(y_), cfg(cfg_), rng(seed), n(static_cast<int>(x_.size())) {
    gram.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = kernel_eval(cfg.kernel, cfg.gamma, x[i], x[j]);
        gram[static_cast<size_t>(i) * n + j] = v;
        gram[static_cast<size_t>(j) * n + i] = v;
      }
    alpha.assign(n, 0.0);
    g.assign(n, 0.0);
  }

  double k(int i, int j) const { return gram[static_cast<size_t>(i) * n + j]; }
  double error(int i) const { return g[i] + b - y[i]; }

  // Dual objective restricted to the pair (i1, i2), up to a constant.
  double pair_objective(int i1, int i2, double a1, double a2) const {
    const double u1 = g[i1] - alpha[i1] * y[i1] * k(i1, i1) -
                      alpha[i2] * y[i2] * k(i1, i2);
    const double u2 = g[i2] - alpha[i1] * y[i1] * k(i1, i2) -
                      alpha[i2] * y[i2] * k(i2, i2);
    return a1 + a2 - 0.5 * k(i1, i1) * a1 * a1 - 0.5 * k(i2, i2) * a2 * a2 -
           y[i1] * y[i2] * k(i1, i2) * a1 * a2 - y[i1] * u1 * a1 -
           y[i2] * u2 * a2;
  }

  bool take_step(int i1, int i2) {
    if (i1 == i2) return false;
    const double c = cfg.c;
    const double alph1 = alpha[i1], alph2 = alpha[i2];
    const int y1 = y[i1], y2 = y[i2];
    const double e1 = error(i1), e2 = error(i2);
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, alph2 - alph1);
      hi = std::min(c, c + alph2 - alph1);
    } else {
      lo = std::max(0.0, alph1 + alph2 - c);
      hi = std::min(c, alph1 + alph2);
    }
    if (lo >= hi) return false;

    const double eta = k(i1, i1) + k(i2, i2) - 2.0 * k(i1, i2);
    double a2;
    if (eta > 0.0) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // objective is flat or concave along the pair direction: compare the
      // clipping-interval endpoints
      const double a1_lo = alph1 + s * (alph2 - lo);
      const double a1_hi = alph1 + s * (alph2 - hi);
      const double obj_lo = pair_objective(i1, i2, a1_lo, lo);
      const double obj_hi = pair_objective(i1, i2, a1_hi, hi);
      if (obj_lo > obj_hi + 1e-12)
        a2 = lo;
      else if (obj_hi > obj_lo + 1e-12)
        a2 = hi;
      else
        return false;
    }
    if (std::abs(a2 - alph2) < kStepEps * (a2 + alph2 + kStepEps))
      return false;

    double a1 = alph1 + s * (alph2 - a2);
    if (a1 < 0.0) {
      a2 += s * a1;
      a1 = 0.0;
    } else if (a1 > c) {
      a2 += s * (a1 - c);
      a1 = c;
    }

    const double d1 = a1 - alph1, d2 = a2 - alph2;
    const double b1 = (b - e1) - y1 * d1 * k(i1, i1) - y2 * d2 * k(i1, i2);
    const double b2 = (b - e2) - y1 * d1 * k(i1, i2) - y2 * d2 * k(i2, i2);
    if (a1 > 0.0 && a1 < c)
      b = b1;
    else if (a2 > 0.0 && a2 < c)
      b = b2;
    else
      b = 0.5 * (b1 + b2);

    alpha[i1] = a1;
    alpha[i2] = a2;
    for (int j = 0; j < n; ++j)
      g[j] += y1 * d1 * k(i1, j) + y2 * d2 * k(i2, j);
    return true;
  }

  bool violates_kkt(int i) const {
    const double r = error(i) * y[i];
    return (r < -cfg.kkt_tolerance && alpha[i] < cfg.c) ||
           (r > cfg.kkt_tolerance && alpha[i] > 0.0);
  }

  bool examine(int i2) {
    if (!violates_kkt(i2)) return false;
    const double e2 = error(i2);

    // best |E1 - E2| over non-bound candidates
    int best = -1;
    double best_gap = -1.0;
    for (int i = 0; i < n; ++i) {
      if (alpha[i] <= 0.0 || alpha[i] >= cfg.c) continue;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && take_step(best, i2)) return true;

    const int start1 = static_cast<int>(rng() % static_cast<uint64_t>(n));
    for (int o = 0; o < n; ++o) {
      const int i = (start1 + o) % n;
      if (alpha[i] <= 0.0 || alpha[i] >= cfg.c) continue;
      if (take_step(i, i2)) return true;
    }
    const int start2 = static_cast<int>(rng() % static_cast<uint64_t>(n));
    for (int o = 0; o < n; ++o) {
      const int i = (start2 + o) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  }

  void run() {
    int changeless = 0;
    int sweeps = 0;
    while (changeless < cfg.max_passes && sweeps < kHardSweepCap) {
      int changed = 0;
      for (int i = 0; i < n; ++i) changed += examine(i) ? 1 : 0;
      changeless = changed == 0 ? changeless + 1 : 0;
      ++sweeps;
    }
  }
};

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void SvmConfig::validate() const {
  if (!(c > 0.0)) throw validation_error("svm: C must be > 0");
  if (kernel == KernelKind::rbf && !(gamma > 0.0))
    throw validation_error("svm: gamma must be > 0 for the rbf kernel");
  if (!(kkt_tolerance > 0.0))
    throw validation_error("svm: kkt_tolerance must be > 0");
  if (max_passes < 1) throw validation_error("svm: max_passes must be >= 1");
}

std::vector<double> Standardization::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (!active()) return out;
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = (out[i] - means[i]) / scales[i];
  return out;
}

Standardization fit_standardization(
    const std::vector<std::vector<double>>& rows) {
  Standardization s;
  if (rows.empty()) return s;
  const size_t d = rows[0].size();
  s.means.assign(d, 0.0);
  s.scales.assign(d, 1.0);
  for (const auto& r : rows)
    for (size_t j = 0; j < d; ++j) s.means[j] += r[j];
  for (size_t j = 0; j < d; ++j) s.means[j] /= static_cast<double>(rows.size());
  for (size_t j = 0; j < d; ++j) {
    double var = 0.0;
    for (const auto& r : rows) {
      const double dv = r[j] - s.means[j];
      var += dv * dv;
    }
    const double sd = std::sqrt(var / static_cast<double>(rows.size()));
    s.scales[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

SvmModel train_smo(const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& labels,
                   const SvmConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (rows.empty() || rows.size() != labels.size())
    throw validation_error("svm: rows and labels must align and be non-empty");
  const size_t dim = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != dim) throw validation_error("svm: ragged feature rows");
    for (double v : r)
      if (!std::isfinite(v))
        throw validation_error("svm: non-finite feature value");
  }

  std::set<std::string> classes(labels.begin(), labels.end());
  if (classes.size() != 2)
    throw validation_error("svm: exactly 2 classes required, got " +
                           std::to_string(classes.size()));

  SvmModel model;
  model.kernel = cfg.kernel;
  model.c = cfg.c;
  model.gamma = cfg.kernel == KernelKind::rbf ? cfg.gamma : 0.0;
  model.dim = dim;
  model.class_neg = *classes.begin();
  model.class_pos = *std::next(classes.begin());

  std::vector<int> y(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    y[i] = labels[i] == model.class_pos ? 1 : -1;

  std::vector<std::vector<double>> xs;
  xs.reserve(rows.size());
  if (cfg.standardize) {
    model.standardization = fit_standardization(rows);
    for (const auto& r : rows) xs.push_back(model.standardization.apply(r));
  } else {
    xs = rows;
  }

  Solver solver(xs, y, cfg, seed);
  solver.run();
  model.bias = solver.b;
  model.training_alpha = solver.alpha;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (solver.alpha[i] <= 1e-12) continue;
    model.alpha.push_back(solver.alpha[i]);
    model.y.push_back(y[i]);
    model.support_vectors.push_back(xs[i]);
  }
  return model;
}

double decision_value(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim)
    throw validation_error("svm: dimension mismatch: expected " +
                           std::to_string(model.dim) + ", got " +
                           std::to_string(x.size()));
  const std::vector<double> xs = model.standardization.apply(x);
  double f = model.bias;
  for (size_t i = 0; i < model.alpha.size(); ++i)
    f += model.alpha[i] * model.y[i] *
         kernel_eval(model.kernel, model.gamma, model.support_vectors[i], xs);
  return f;
}

Prediction predict(const SvmModel& model, std::span<const double> x) {
  const double f = decision_value(model, x);
  return {f >= 0.0 ? model.class_pos : model.class_neg, f};
}

std::string model_to_string(const SvmModel& model) {
  std::string out = "svm kernel=";
  out += model.kernel == KernelKind::linear ? "linear" : "rbf";
  out += " C=" + format_g12(model.c);
  out += " gamma=" + format_g12(model.gamma);
  out += " dim=" + std::to_string(model.dim);
  out += " neg=" + model.class_neg;
  out += " pos=" + model.class_pos;
  out += " bias=" + format_g12(model.bias);
  out += " nsv=" + std::to_string(model.alpha.size());
  out += "\n";
  if (model.standardization.active()) {
    out += "standardize";
    for (double m : model.standardization.means) out += " " + format_g12(m);
    for (double s : model.standardization.scales) out += " " + format_g12(s);
    out += "\n";
  } else {
    out += "standardize off\n";
  }
  for (size_t i = 0; i < model.alpha.size(); ++i) {
    out += format_g12(model.alpha[i]);
    out += " ";
    out += std::to_string(model.y[i]);
    for (double v : model.support_vectors[i]) out += " " + format_g12(v);
    out += "\n";
  }
  return out;
}

SvmModel model_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw validation_error("svm model: empty input");

  SvmModel model;
  size_t nsv = 0;
  {
    std::istringstream hs(line);
    std::string tag;
    hs >> tag;
    if (tag != "svm") throw validation_error("svm model: bad header");
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw validation_error("svm model: bad header field '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "kernel") {
        if (val == "linear")
          model.kernel = KernelKind::linear;
        else if (val == "rbf")
          model.kernel = KernelKind::rbf;
        else
          throw validation_error("svm model: unknown kernel '" + val + "'");
      } else if (key == "C")
        model.c = std::stod(val);
      else if (key == "gamma")
        model.gamma = std::stod(val);
      else if (key == "dim")
        model.dim = std::stoul(val);
      else if (key == "neg")
        model.class_neg = val;
      else if (key == "pos")
        model.class_pos = val;
      else if (key == "bias")
        model.bias = std::stod(val);
      else if (key == "nsv")
        nsv = std::stoul(val);
      else
        throw validation_error("svm model: unknown header key '" + key + "'");
    }
  }

  if (!std::getline(in, line))
    throw validation_error("svm model: missing standardization row");
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "standardize")
      throw validation_error("svm model: missing standardization row");
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      if (tok == "off") break;
      vals.push_back(std::stod(tok));
    }
    if (!vals.empty()) {
      if (vals.size() != model.dim * 2)
        throw validation_error("svm model: standardization row length");
      model.standardization.means.assign(vals.begin(),
                                         vals.begin() + model.dim);
      model.standardization.scales.assign(vals.begin() + model.dim,
                                          vals.end());
    }
  }

  for (size_t i = 0; i < nsv; ++i) {
    if (!std::getline(in, line))
      throw validation_error("svm model: truncated support vectors");
    std::istringstream ls(line);
    double a;
    int yv;
    if (!(ls >> a >> yv))
      throw validation_error("svm model: bad support vector line");
    std::vector<double> v(model.dim);
    for (size_t j = 0; j < model.dim; ++j)
      if (!(ls >> v[j]))
        throw validation_error("svm model: bad support vector line");
    model.alpha.push_back(a);
    model.y.push_back(yv);
    model.support_vectors.push_back(std::move(v));
  }
  return model;
}

void save_model(const SvmModel& model, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw io_error("cannot open for writing: " + path);
  const std::string text = model_to_string(model);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw io_error("write failure: " + path);
}

SvmModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return model_from_string(ss.str());
}

}  // namespace cvf
