#pragma once

// Shared between the estimator translation units; not installed.

#include <span>
#include <vector>

#include "fitpa/estimator.hpp"

namespace fitpa::detail {

/// How each bin's log A depends on the selected ("free") bins.
struct Ties {
  std::vector<bool> free;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  std::vector<double> left_weight;

  /// For a free bin j: the contiguous bins whose log A moves with log A_j,
  /// and d(log A_b)/d(log A_j) for each of them.
  struct Influence {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::vector<double> coef;
    double at(std::size_t b) const { return b < lo || b > hi ? 0.0 : coef[b - lo]; }
  };
  std::vector<Influence> influence;

  std::size_t size() const noexcept { return free.size(); }
  void fill(std::vector<double>& log_a) const;
};

Ties make_ties(const SufficientStats& stats);

/// Fitness mass per (step, bin), row-major by step.
std::vector<double> fitness_mass(const SufficientStats& stats, std::span<const double> eta);

/// Z(t) for every step given the fitness mass.
std::vector<double> normalizers(const SufficientStats& stats, std::span<const double> A,
                                std::span<const double> mass);

void check_parameters(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta);

/// Sum of squared second differences of log A.
double curvature_penalty(std::span<const double> log_a);

}  // namespace fitpa::detail
