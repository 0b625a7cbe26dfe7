#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "estimator_detail.hpp"
#include "fitpa/errors.hpp"
#include "fitpa/estimator.hpp"

namespace fitpa {

void EstimationConfig::validate() const {
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) throw std::invalid_argument("smoothing weight must be >= 0");
  if (!(fitness_shape > 1.0) || !std::isfinite(fitness_shape)) throw std::invalid_argument("fitness shape must be > 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("gradient tolerance must be > 0");
  if (!(binning.log_base > 1.0)) throw std::invalid_argument("log_base must be > 1");
  if (binning.per_degree_until < 0) throw std::invalid_argument("per_degree_until must be >= 0");
}

namespace detail {

void Ties::fill(std::vector<double>& log_a) const {
  for (std::size_t b = 0; b < size(); ++b) {
    if (free[b]) continue;
    const double w = left_weight[b];
    log_a[b] = w * log_a[left[b]] + (1.0 - w) * log_a[right[b]];
  }
}

Ties make_ties(const SufficientStats& stats) {
  const auto n = stats.bin_count();
  Ties t;
  t.free.resize(n);
  t.left.resize(n);
  t.right.resize(n);
  t.left_weight.assign(n, 1.0);
  t.influence.resize(n);
  std::vector<std::size_t> free_bins;
  for (std::size_t b = 0; b < n; ++b) {
    t.free[b] = stats.bin_selections[b] > 0.0;
    if (t.free[b]) free_bins.push_back(b);
  }
  if (free_bins.empty()) throw EstimationError("no selections: every degree bin is empty");

  for (std::size_t b = 0; b < n; ++b) {
    if (t.free[b]) {
      t.left[b] = t.right[b] = b;
      continue;
    }
    const auto it = std::upper_bound(free_bins.begin(), free_bins.end(), b);
    if (it == free_bins.begin()) {
      t.left[b] = t.right[b] = *it;
    } else if (it == free_bins.end()) {
      t.left[b] = t.right[b] = free_bins.back();
    } else {
      const auto l = *(it - 1);
      const auto r = *it;
      t.left[b] = l;
      t.right[b] = r;
      t.left_weight[b] = static_cast<double>(r - b) / static_cast<double>(r - l);
    }
  }

  for (std::size_t j : free_bins) {
    auto& inf = t.influence[j];
    inf.lo = inf.hi = j;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == j || t.left[b] == j || t.right[b] == j) {
        inf.lo = std::min(inf.lo, b);
        inf.hi = std::max(inf.hi, b);
      }
    }
    inf.coef.assign(inf.hi - inf.lo + 1, 0.0);
    for (std::size_t b = inf.lo; b <= inf.hi; ++b) {
      double c = 0.0;
      if (t.left[b] == j) c += t.left_weight[b];
      if (t.right[b] == j) c += 1.0 - t.left_weight[b];
      inf.coef[b - inf.lo] = c;
    }
  }
  return t;
}

std::vector<double> fitness_mass(const SufficientStats& stats, std::span<const double> eta) {
  const auto n_steps = stats.step_count();
  const auto n_bins = stats.bin_count();
  std::vector<double> diff((n_steps + 1) * n_bins, 0.0);
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    for (const auto& seg : stats.exposure[i]) {
      diff[seg.first_step * n_bins + seg.bin] += eta[i];
      diff[seg.end_step * n_bins + seg.bin] -= eta[i];
    }
  }
  std::vector<double> mass(n_steps * n_bins, 0.0);
  std::vector<double> running(n_bins, 0.0);
  for (std::size_t s = 0; s < n_steps; ++s) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      running[b] += diff[s * n_bins + b];
      // Exact zero for empty cells; the running sum may leave rounding residue.
      if (stats.bin_population[s * n_bins + b] == 0) running[b] = 0.0;
      mass[s * n_bins + b] = running[b];
    }
  }
  return mass;
}

std::vector<double> normalizers(const SufficientStats& stats, std::span<const double> A,
                                std::span<const double> mass) {
  const auto n_bins = stats.bin_count();
  std::vector<double> z(stats.step_count(), 0.0);
  for (std::size_t s = 0; s < z.size(); ++s) {
    const double* row = mass.data() + s * n_bins;
    double acc = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) acc += A[b] * row[b];
    z[s] = acc;
  }
  return z;
}

void check_parameters(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta) {
  if (A.size() != stats.bin_count()) throw std::invalid_argument("A has wrong number of bins");
  if (eta.size() != stats.node_count()) throw std::invalid_argument("fitness vector has wrong length");
  for (double a : A) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("attachment values must be positive and finite");
  }
  for (double e : eta) {
    if (!(e > 0.0) || !std::isfinite(e)) throw std::domain_error("fitness values must be positive and finite");
  }
}

double curvature_penalty(std::span<const double> log_a) {
  double p = 0.0;
  for (std::size_t b = 1; b + 1 < log_a.size(); ++b) {
    const double d = log_a[b + 1] - 2.0 * log_a[b] + log_a[b - 1];
    p += d * d;
  }
  return p;
}

}  // namespace detail

namespace {

using detail::Ties;

std::vector<double> logs(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
  return out;
}

std::vector<double> exps(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::exp(x); });
  return out;
}

/// D_b = sum_t m(t) S_b(t) / Z(t): the expected selections per unit A_b.
std::vector<double> bin_exposure(const SufficientStats& stats, std::span<const double> mass,
                                 std::span<const double> z) {
  const auto n_bins = stats.bin_count();
  std::vector<double> d(n_bins, 0.0);
  for (std::size_t s = 0; s < stats.step_count(); ++s) {
    const double w = stats.step_selections[s] / z[s];
    const double* row = mass.data() + s * n_bins;
    for (std::size_t b = 0; b < n_bins; ++b) d[b] += w * row[b];
  }
  return d;
}

/// sum_t over the node's at-risk steps of m(t) A_{bin(i,t)} / Z(t).
std::vector<double> node_exposure(const SufficientStats& stats, std::span<const double> A,
                                  std::span<const double> z) {
  std::vector<double> prefix(stats.step_count() + 1, 0.0);
  for (std::size_t s = 0; s < stats.step_count(); ++s) {
    prefix[s + 1] = prefix[s] + stats.step_selections[s] / z[s];
  }
  std::vector<double> den(stats.node_count(), 0.0);
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    double acc = 0.0;
    for (const auto& seg : stats.exposure[i]) acc += A[seg.bin] * (prefix[seg.end_step] - prefix[seg.first_step]);
    den[i] = acc;
  }
  return den;
}

// Neumaier compensated sum. The objective runs to ~1e5 in magnitude and the
// MM steps near convergence change it by less than its rounding error, so a
// plain sum makes the ascent trace jitter.
struct Sum {
  double hi = 0.0, lo = 0.0;
  void add(double x) {
    const double t = hi + x;
    lo += std::abs(hi) >= std::abs(x) ? (hi - t) + x : (x - t) + hi;
    hi = t;
  }
  double value() const { return hi + lo; }
};

void add_likelihood(Sum& ll, const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                    std::span<const double> z) {
  for (std::size_t b = 0; b < stats.bin_count(); ++b) {
    if (stats.bin_selections[b] > 0.0) ll.add(stats.bin_selections[b] * std::log(A[b]));
  }
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    if (stats.node_selections[i] > 0.0) ll.add(stats.node_selections[i] * std::log(eta[i]));
  }
  for (std::size_t s = 0; s < stats.step_count(); ++s) ll.add(-stats.step_selections[s] * std::log(z[s]));
}

void add_prior(Sum& p, const SufficientStats& stats, std::span<const double> eta, const EstimationConfig& config) {
  if (!config.estimate_fitness) return;
  const double a = config.fitness_shape - 1.0;
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    if (stats.exposed(i)) p.add(a * (std::log(eta[i]) - eta[i]));
  }
}

double likelihood_from(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                       std::span<const double> z) {
  Sum ll;
  add_likelihood(ll, stats, A, eta, z);
  return ll.value();
}

double objective_from(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                      std::span<const double> z, const EstimationConfig& config) {
  Sum f;
  add_likelihood(f, stats, A, eta, z);
  if (config.smoothing > 0.0) f.add(-config.smoothing * detail::curvature_penalty(logs(A)));
  add_prior(f, stats, eta, config);
  return f.value();
}

/// Maximizes, coordinate by coordinate over the free bins, the concave
/// surrogate  sum_b m_b x_b - sum_b D_b exp(x_b) - lambda * penalty(x)
/// which minorizes the objective at the current point.
void surrogate_ascent(const SufficientStats& stats, const Ties& ties, std::span<const double> d,
                      double lambda, std::vector<double>& x) {
  const auto n_bins = stats.bin_count();
  constexpr int kMaxSweeps = 25;
  constexpr double kMaxStep = 4.0;
  std::vector<double> second_diff_coef;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double largest = 0.0;
    for (std::size_t j = 0; j < n_bins; ++j) {
      if (!ties.free[j]) continue;
      const auto& inf = ties.influence[j];
      const std::size_t k_lo = std::max<std::size_t>(1, inf.lo == 0 ? 1 : inf.lo - 1);
      const std::size_t k_hi = std::min<std::size_t>(n_bins >= 2 ? n_bins - 2 : 0, inf.hi + 1);

      auto second_diff = [&](std::size_t k) { return x[k + 1] - 2.0 * x[k] + x[k - 1]; };
      auto coef_diff = [&](std::size_t k) { return inf.at(k + 1) - 2.0 * inf.at(k) + inf.at(k - 1); };

      // Gain of moving x_j by delta, relative to delta = 0.
      auto gain = [&](double delta) {
        double g = stats.bin_selections[j] * delta;
        for (std::size_t b = inf.lo; b <= inf.hi; ++b) {
          const double c = inf.coef[b - inf.lo];
          if (c != 0.0 && d[b] != 0.0) g -= d[b] * std::exp(x[b]) * std::expm1(c * delta);
        }
        if (lambda > 0.0 && n_bins >= 3) {
          for (std::size_t k = k_lo; k <= k_hi; ++k) {
            const double dk = second_diff(k);
            const double ck = coef_diff(k);
            g -= lambda * (2.0 * dk * ck * delta + ck * ck * delta * delta);
          }
        }
        return g;
      };

      double grad = stats.bin_selections[j];
      double hess = 0.0;
      for (std::size_t b = inf.lo; b <= inf.hi; ++b) {
        const double c = inf.coef[b - inf.lo];
        const double v = d[b] * std::exp(x[b]);
        grad -= v * c;
        hess -= v * c * c;
      }
      if (lambda > 0.0 && n_bins >= 3) {
        for (std::size_t k = k_lo; k <= k_hi; ++k) {
          const double ck = coef_diff(k);
          grad -= 2.0 * lambda * second_diff(k) * ck;
          hess -= 2.0 * lambda * ck * ck;
        }
      }
      if (!(hess < 0.0)) continue;
      double delta = std::clamp(-grad / hess, -kMaxStep, kMaxStep);
      int halvings = 0;
      while (gain(delta) < 0.0 && halvings < 60) {
        delta *= 0.5;
        ++halvings;
      }
      if (gain(delta) < 0.0) continue;
      for (std::size_t b = inf.lo; b <= inf.hi; ++b) x[b] += inf.coef[b - inf.lo] * delta;
      largest = std::max(largest, std::abs(delta));
    }
    if (largest < 1e-12) break;
  }
}

std::vector<double> update_A_with(const SufficientStats& stats, const Ties& ties, std::span<const double> A,
                                  std::span<const double> mass, const EstimationConfig& config) {
  auto x = logs(A);
  ties.fill(x);
  const auto a_tied = exps(x);
  const auto z = detail::normalizers(stats, a_tied, mass);
  const auto d = bin_exposure(stats, mass, z);

  bool closed_form = config.smoothing == 0.0;
  for (std::size_t b = 0; b < stats.bin_count() && closed_form; ++b) {
    if (!ties.free[b] && d[b] != 0.0) closed_form = false;
  }
  if (closed_form) {
    for (std::size_t b = 0; b < stats.bin_count(); ++b) {
      if (!ties.free[b]) continue;
      if (!(d[b] > 0.0)) throw EstimationError("degenerate bin " + std::to_string(b) + ": zero exposure");
      x[b] = std::log(stats.bin_selections[b] / d[b]);
    }
  } else {
    surrogate_ascent(stats, ties, d, config.smoothing, x);
  }
  ties.fill(x);
  return exps(x);
}

std::vector<double> update_fitness_with(const SufficientStats& stats, std::span<const double> A,
                                        std::span<const double> mass, const EstimationConfig& config) {
  const auto z = detail::normalizers(stats, A, mass);
  const auto den = node_exposure(stats, A, z);
  const double a = config.fitness_shape - 1.0;
  std::vector<double> eta(stats.node_count(), 1.0);
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    if (stats.exposed(i)) eta[i] = (stats.node_selections[i] + a) / (den[i] + a);
  }
  return eta;
}

}  // namespace

std::vector<double> tie_empty_bins(const SufficientStats& stats, std::span<const double> A) {
  const auto ties = detail::make_ties(stats);
  auto x = logs(A);
  ties.fill(x);
  return exps(x);
}

bool is_free_bin(const SufficientStats& stats, std::size_t bin) { return stats.bin_selections.at(bin) > 0.0; }

double log_likelihood(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta) {
  detail::check_parameters(stats, A, eta);
  const auto mass = detail::fitness_mass(stats, eta);
  const auto z = detail::normalizers(stats, A, mass);
  return likelihood_from(stats, A, eta, z);
}

double penalized_objective(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                           const EstimationConfig& config) {
  detail::check_parameters(stats, A, eta);
  const auto mass = detail::fitness_mass(stats, eta);
  const auto z = detail::normalizers(stats, A, mass);
  return objective_from(stats, A, eta, z, config);
}

std::vector<double> update_A(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                             const EstimationConfig& config) {
  detail::check_parameters(stats, A, eta);
  const auto ties = detail::make_ties(stats);
  const auto mass = detail::fitness_mass(stats, eta);
  return update_A_with(stats, ties, A, mass, config);
}

std::vector<double> update_fitness(const SufficientStats& stats, std::span<const double> A,
                                   std::span<const double> eta, const EstimationConfig& config) {
  detail::check_parameters(stats, A, eta);
  const auto mass = detail::fitness_mass(stats, eta);
  return update_fitness_with(stats, A, mass, config);
}

ObjectiveGradient objective_gradient(const SufficientStats& stats, std::span<const double> A,
                                     std::span<const double> eta, const EstimationConfig& config) {
  detail::check_parameters(stats, A, eta);
  const auto ties = detail::make_ties(stats);
  const auto n_bins = stats.bin_count();
  const auto mass = detail::fitness_mass(stats, eta);
  const auto z = detail::normalizers(stats, A, mass);
  const auto d = bin_exposure(stats, mass, z);
  const auto x = logs(A);

  std::vector<double> full(n_bins, 0.0);
  for (std::size_t b = 0; b < n_bins; ++b) full[b] = stats.bin_selections[b] - A[b] * d[b];
  if (config.smoothing > 0.0 && n_bins >= 3) {
    std::vector<double> sd(n_bins, 0.0);
    for (std::size_t k = 1; k + 1 < n_bins; ++k) sd[k] = x[k + 1] - 2.0 * x[k] + x[k - 1];
    for (std::size_t b = 0; b < n_bins; ++b) {
      double dp = 0.0;
      if (b >= 1) dp += sd[b - 1];
      dp -= 2.0 * sd[b];
      if (b + 1 < n_bins) dp += sd[b + 1];
      full[b] -= config.smoothing * 2.0 * dp;
    }
  }

  ObjectiveGradient g;
  g.log_A.assign(n_bins, 0.0);
  for (std::size_t j = 0; j < n_bins; ++j) {
    if (!ties.free[j]) continue;
    const auto& inf = ties.influence[j];
    for (std::size_t b = inf.lo; b <= inf.hi; ++b) g.log_A[j] += inf.coef[b - inf.lo] * full[b];
  }

  const auto den = node_exposure(stats, A, z);
  const double a = config.estimate_fitness ? config.fitness_shape - 1.0 : 0.0;
  g.log_eta.assign(stats.node_count(), 0.0);
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    if (!stats.exposed(i)) continue;
    g.log_eta[i] = stats.node_selections[i] - eta[i] * den[i] + a * (1.0 - eta[i]);
  }
  return g;
}

namespace {

// Largest gradient component relative to its count term; tied bins and
// unexposed nodes carry no free parameter.
double stationarity_residual(const SufficientStats& stats, const std::vector<double>& A, const std::vector<double>& eta,
                             const EstimationConfig& config) {
  const auto g = objective_gradient(stats, A, eta, config);
  double worst = 0.0;
  for (std::size_t b = 0; b < A.size(); ++b) {
    if (is_free_bin(stats, b)) worst = std::max(worst, std::abs(g.log_A[b]) / stats.bin_selections[b]);
  }
  if (config.estimate_fitness) {
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (stats.exposed(i)) {
        worst = std::max(worst, std::abs(g.log_eta[i]) / (stats.node_selections[i] + config.fitness_shape - 1.0));
      }
    }
  }
  return worst;
}

}  // namespace

FitState fit(const SufficientStats& stats, const EstimationConfig& config, const std::optional<StartingPoint>& start) {
  config.validate();
  if (!(stats.total_selections() > 0.0)) throw EstimationError("degenerate network: no selections");
  const auto ties = detail::make_ties(stats);

  FitState st;
  st.A.assign(stats.bin_count(), 1.0);
  st.eta.assign(stats.node_count(), 1.0);
  if (start) {
    detail::check_parameters(stats, start->A, start->eta);
    st.A = start->A;
    if (config.estimate_fitness) st.eta = start->eta;
  }
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    if (!stats.exposed(i)) st.eta[i] = 1.0;
  }
  {
    auto x = logs(st.A);
    ties.fill(x);
    st.A = exps(x);
  }

  struct Point {
    std::vector<double> A, eta, mass;
    double objective = 0.0;
  };
  auto evaluate = [&](Point& p) {
    p.mass = detail::fitness_mass(stats, p.eta);
    p.objective = objective_from(stats, p.A, p.eta, detail::normalizers(stats, p.A, p.mass), config);
  };
  // One minorize-maximize step: A with fitness fixed, then fitness.
  auto mm = [&](const Point& p) {
    Point q;
    q.A = update_A_with(stats, ties, p.A, p.mass, config);
    q.eta = config.estimate_fitness ? update_fitness_with(stats, q.A, p.mass, config) : p.eta;
    evaluate(q);
    return q;
  };

  Point cur{st.A, st.eta, {}, 0.0};
  evaluate(cur);
  st.objective_trace.push_back(cur.objective);

  // Squared extrapolation of the MM map in log parameters. The extrapolated
  // point is kept only when it beats two plain MM steps, so every iteration
  // still ascends.
  for (int it = 1; it <= config.max_iterations; ++it) {
    const Point p1 = mm(cur);
    Point next = mm(p1);
    const auto x0 = logs(cur.A), x1 = logs(p1.A), x2 = logs(next.A);
    const auto e0 = logs(cur.eta), e1 = logs(p1.eta), e2 = logs(next.eta);
    double rr = 0.0, vv = 0.0;
    for (std::size_t b = 0; b < x0.size(); ++b) {
      const double r = x1[b] - x0[b], v = x2[b] - 2.0 * x1[b] + x0[b];
      rr += r * r;
      vv += v * v;
    }
    for (std::size_t i = 0; i < e0.size(); ++i) {
      const double r = e1[i] - e0[i], v = e2[i] - 2.0 * e1[i] + e0[i];
      rr += r * r;
      vv += v * v;
    }
    if (vv > 0.0 && std::isfinite(next.objective)) {
      const double step = -std::sqrt(rr / vv);
      if (step < -1.0) {
        auto jump = [step](double a, double b, double c) {
          const double r = b - a, v = c - 2.0 * b + a;
          return std::clamp(a - 2.0 * step * r + step * step * v, -300.0, 300.0);
        };
        Point ex;
        std::vector<double> xa(x0.size()), xe(e0.size());
        for (std::size_t b = 0; b < x0.size(); ++b) xa[b] = jump(x0[b], x1[b], x2[b]);
        ties.fill(xa);
        for (std::size_t i = 0; i < e0.size(); ++i) xe[i] = stats.exposed(i) ? jump(e0[i], e1[i], e2[i]) : 0.0;
        ex.A = exps(xa);
        ex.eta = exps(xe);
        evaluate(ex);
        if (std::isfinite(ex.objective)) {
          Point settled = mm(ex);
          if (std::isfinite(settled.objective) && settled.objective >= next.objective) next = std::move(settled);
        }
      }
    }

    st.objective_trace.push_back(next.objective);
    st.iterations = it;
    if (!std::isfinite(next.objective)) throw EstimationError("objective became non-finite");
    const double previous = cur.objective;
    cur = std::move(next);
    if (std::abs(cur.objective - previous) <= config.tolerance * std::max(std::abs(previous), 1e-300) &&
        stationarity_residual(stats, cur.A, cur.eta, config) <= config.gradient_tolerance) {
      st.converged = true;
      break;
    }
  }
  st.A = std::move(cur.A);
  st.eta = std::move(cur.eta);
  return st;
}

ExponentFit fit_attachment_exponent(const DegreeBinning& binning, std::span<const double> A,
                                    std::span<const double> weights) {
  if (A.size() != binning.size() || weights.size() != binning.size()) {
    throw std::invalid_argument("A and weights must have one entry per bin");
  }
  std::vector<double> xs, ys, ws;
  for (std::size_t b = 0; b < binning.size(); ++b) {
    const double rep = binning.representative(b);
    if (!(rep >= 1.0) || !(weights[b] > 0.0) || !(A[b] > 0.0)) continue;
    xs.push_back(std::log(rep));
    ys.push_back(std::log(A[b]));
    ws.push_back(weights[b]);
  }
  if (xs.size() < 2) throw EstimationError("exponent fit needs at least two bins with degree >= 1");

  const double sw = std::accumulate(ws.begin(), ws.end(), 0.0);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += ws[i] * xs[i];
    my += ws[i] * ys[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw EstimationError("exponent fit needs at least two distinct degrees");

  ExponentFit out;
  out.alpha = sxy / sxx;
  if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - my - out.alpha * (xs[i] - mx);
      rss += ws[i] * r * r;
    }
    const double sigma2 = rss / static_cast<double>(xs.size() - 2);
    out.standard_error = std::sqrt(sigma2 / sxx);
  }
  return out;
}

const NodeFitness& EstimationResult::fitness_of(NodeId node) const {
  if (!index_.empty()) {
    if (auto it = index_.find(node); it != index_.end()) return eta[it->second];
  } else {
    for (const auto& f : eta) {
      if (f.node == node) return f;
    }
  }
  throw CoverageError("result has no fitness for node " + std::to_string(node));
}

void EstimationResult::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < eta.size(); ++i) index_.emplace(eta[i].node, i);
}

EstimationResult finalize(const TemporalNetwork& net, const SufficientStats& stats, const EstimationConfig& config,
                          FitState state) {
  EstimationResult r;
  r.binning = stats.binning;
  r.config = config;
  r.period = net.window();
  r.bin_selections = stats.bin_selections;
  r.objective_trace = std::move(state.objective_trace);
  r.converged = state.converged;
  r.iterations = state.iterations;

  const double a0 = state.A[stats.binning.bin_of(0)];
  r.A = state.A;
  for (auto& a : r.A) a /= a0;

  std::vector<double> eta = state.eta;
  double sum = 0.0;
  std::size_t exposed = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!stats.exposed(i)) continue;
    eta[i] *= a0;
    sum += eta[i];
    ++exposed;
  }
  const double mean = exposed ? sum / static_cast<double>(exposed) : 1.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (stats.exposed(i)) eta[i] /= mean;
  }

  const double normalized_objective = penalized_objective(stats, r.A, eta, config);
  r.normalization_shift = normalized_objective - r.objective_trace.back();

  const auto se = standard_errors(stats, r.A, eta, config);
  r.A_sigma = se.log_A_sigma;
  r.sigma_fallback = se.fallback;

  try {
    const auto ef = fit_attachment_exponent(r.binning, r.A, r.bin_selections);
    r.alpha = ef.alpha;
    r.alpha_stderr = ef.standard_error;
  } catch (const EstimationError&) {
    r.alpha = std::numeric_limits<double>::quiet_NaN();
    r.alpha_stderr = std::numeric_limits<double>::quiet_NaN();
  }

  r.eta.reserve(stats.node_count());
  for (std::size_t i = 0; i < stats.node_count(); ++i) {
    const NodeId n = stats.nodes[i];
    r.eta.push_back(NodeFitness{n, net.node(n).label, eta[i], stats.exposed(i)});
  }
  r.build_index();
  return r;
}

EstimationResult estimate(const TemporalNetwork& net, const EstimationConfig& config,
                          const std::optional<StartingPoint>& start) {
  config.validate();
  const auto stats = build_sufficient_stats(net, config.binning);
  if (!(stats.total_selections() > 0.0)) throw EstimationError("degenerate network: no selections");
  auto state = fit(stats, config, start);
  return finalize(net, stats, config, std::move(state));
}

}  // namespace fitpa
