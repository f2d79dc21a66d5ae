#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>

#include "histofeat/classifiers.hpp"
#include "histofeat/error.hpp"

namespace histofeat {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double default_gamma(const Matrix& x) {
  const auto& v = x.data();
  const double f = static_cast<double>(std::max<std::size_t>(1, x.cols()));
  if (v.empty()) return 1.0 / f;
  double mean = 0.0;
  for (double e : v) mean += e;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double e : v) var += (e - mean) * (e - mean);
  var /= static_cast<double>(v.size());
  return var > 0.0 ? 1.0 / (f * var) : 1.0 / f;
}

namespace {

constexpr double kTau = 1e-12;

// LRU cache of kernel rows K(i, .).
class KernelRows {
 public:
  KernelRows(const Matrix& x, double gamma, std::size_t budget_bytes) : x_(x), gamma_(gamma) {
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows()) * sizeof(double);
    capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return it->second->second;
    }
    if (order_.size() >= capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
    std::vector<double> values(x_.rows());
    const auto xi = x_.row(i);
    for (std::size_t t = 0; t < x_.rows(); ++t) values[t] = rbf_kernel(xi, x_.row(t), gamma_);
    order_.emplace_front(i, std::move(values));
    index_[i] = order_.begin();
    return order_.front().second;
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  const Matrix& x_;
  double gamma_;
  std::size_t capacity_;
  std::list<Entry> order_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

}  // namespace

SvmDualSolution solve_svm_dual(const Matrix& x, std::span<const int> y, const SmoOptions& options) {
  const std::size_t n = x.rows();
  if (n != y.size()) throw Error(ErrorKind::Shape, "SVM rows and labels differ in length");
  if (!(options.c > 0.0)) throw Error(ErrorKind::Config, "SVM box constraint C must be positive");
  if (!(options.gamma > 0.0)) throw Error(ErrorKind::Config, "RBF gamma must be positive");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::Config, "SMO tolerance must be positive");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw Error(ErrorKind::Config, "SVM labels must be +1 or -1");
  }
  if (!pos || !neg) throw Error(ErrorKind::Training, "SVM training needs both classes");

  const double c = options.c;
  const std::size_t max_iter = options.max_passes.value_or(10 * n);

  // Minimises 0.5 a'Qa - e'a subject to 0 <= a <= C, y'a = 0, with
  // Q_ij = y_i y_j K_ij and gradient G = Qa - e. Working sets follow the
  // second-order rule of Fan, Chen and Lin (2005).
  SvmDualSolution sol;
  sol.y.assign(y.begin(), y.end());
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);
  KernelRows kernel(x, options.gamma, options.cache_bytes);

  auto upper = [&](std::size_t t) { return sol.alpha[t] >= c; };
  auto lower = [&](std::size_t t) { return sol.alpha[t] <= 0.0; };

  std::size_t iter = 0;
  bool converged = false;
  for (;;) {
    // i: maximal violator in I_up
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? !upper(t) : !lower(t)) {
        const double v = -y[t] * grad[t];
        if (v > gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    if (i == n) {
      converged = true;
      break;
    }
    const std::vector<double> ki = kernel.row(i);

    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!(y[t] == 1 ? !lower(t) : !upper(t))) continue;
      const double v = y[t] * grad[t];
      gmax2 = std::max(gmax2, v);
      const double diff = gmax + v;
      if (diff > 0.0) {
        double quad = 2.0 - 2.0 * ki[t];  // K_ii + K_tt - 2 K_it, K_ii = 1
        if (quad <= 0.0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < options.tol || j == n) {
      converged = true;
      break;
    }
    if (iter >= max_iter) break;
    ++iter;

    const std::vector<double>& kj = kernel.row(j);
    const double old_ai = sol.alpha[i];
    const double old_aj = sol.alpha[j];
    double& ai = sol.alpha[i];
    double& aj = sol.alpha[j];
    const double kij = ki[j];

    if (y[i] != y[j]) {
      double quad = 2.0 - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }

    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * ki[t] * dai + y[j] * kj[t] * daj);
  }

  // rho from free vectors, or the midpoint of the feasible interval
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.bias = -rho;
  sol.converged = converged;
  sol.iterations = iter;
  return sol;
}

SvmModel train_svm_smo(const Matrix& x, std::span<const Label> y, const SmoOptions& options) {
  std::vector<int> signs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) signs[i] = svm_sign(y[i]);
  const SvmDualSolution sol = solve_svm_dual(x, signs, options);

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < sol.alpha.size(); ++i)
    if (sol.alpha[i] > 0.0) support.push_back(i);

  SvmModel model;
  model.support_vectors = x.select_rows(support);
  for (auto i : support) model.coef.push_back(sol.alpha[i] * sol.y[i]);
  model.bias = sol.bias;
  model.gamma = options.gamma;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  return model;
}

double SvmModel::decision(std::span<const double> q) const {
  double f = bias;
  for (std::size_t i = 0; i < coef.size(); ++i) f += coef[i] * rbf_kernel(support_vectors.row(i), q, gamma);
  return f;
}

Label SvmModel::predict_row(std::span<const double> q) const {
  return decision(q) > 0.0 ? Label::Abnormal : Label::Normal;
}

double svm_dual_objective(const Matrix& x, std::span<const int> y, std::span<const double> alpha, double gamma) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      quad += alpha[i] * alpha[j] * y[i] * y[j] * rbf_kernel(x.row(i), x.row(j), gamma);
  }
  return linear - 0.5 * quad;
}

double svm_kkt_violation(const Matrix& x, const SvmDualSolution& sol, double c, double gamma) {
  double worst = 0.0;
  const std::size_t n = x.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double f = sol.bias;
    for (std::size_t j = 0; j < n; ++j)
      if (sol.alpha[j] != 0.0) f += sol.alpha[j] * sol.y[j] * rbf_kernel(x.row(j), x.row(i), gamma);
    const double margin = sol.y[i] * f - 1.0;
    double v;
    if (sol.alpha[i] <= 0.0) v = std::max(0.0, -margin);
    else if (sol.alpha[i] >= c) v = std::max(0.0, margin);
    else v = std::abs(margin);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace histofeat
