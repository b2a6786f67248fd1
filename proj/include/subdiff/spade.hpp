#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subdiff/hankel.hpp"
#include "subdiff/measure.hpp"

namespace subdiff {

// Spatial-mode demultiplexing model built from a frequency measure Q. The
// mode-overlap amplitudes have the power series
//   C_n(x) = sum_p i^n (-i x)^p / p! * tildeL(p, n)
// where tildeL is the Cholesky factor of Q's moment matrix; for the built-in
// Gaussian Q this collapses to the closed form
//   C_n(x) = exp(-x^2/8) (x/2)^n / sqrt(n!).
// r_n and s_n translate mode probabilities into generalized moments.
struct SpadeModel {
  explicit SpadeModel(MeasureSpec q_measure) : q(std::move(q_measure)) {}

  MeasureSpec q;
  int n_max = 0;
  CholeskyFactor tilde_l;  // order n_max + 1 (s_n needs row n_max+1)
  // c_coeffs[n][t] multiplies x^(n+2t) in the real part of C_n and
  // c_coeffs_im[n][t] multiplies x^(n+1+2t) in the imaginary part (the
  // imaginary table is identically zero for symmetric Q).
  std::vector<std::vector<Real>> c_coeffs;
  std::vector<std::vector<Real>> c_coeffs_im;
  std::vector<Real> r;  // r_n = tildeL(n, n)^2 / n!^2
  std::vector<Real> s;  // s_n = 2 tildeL(n,n) tildeL(n+1,n+1) / (n! (n+1)!)
  bool closed_form_gaussian = false;
  int series_terms = 0;  // truncation length of the generic series

  // |C_n(x)|^2, closed form for Gaussian Q, truncated series otherwise.
  Real mode_intensity(int n, const Real& x) const;
  // Estimated magnitude of the first dropped series term at |x|, relative to
  // the retained value; used to validate the truncation over a support.
  Real series_tail_ratio(int n, const Real& x_abs) const;
};

struct ModeProbabilities {
  std::vector<Real> pad;         // q_n, n = 0..n_max
  std::vector<Real> ipad_plus;   // q_n^+, n = 0..n_max-1
  std::vector<Real> ipad_minus;  // q_n^-, n = 0..n_max-1
};

enum class SpadeModeKind { EvenPad, OddIpad };

// One simulated experiment: either a set of even (PAD) modes or one
// interferometric (iPAD) pair; the two bases are incompatible projections
// and are never mixed in a single run.
struct CountRecord {
  SpadeModeKind kind = SpadeModeKind::EvenPad;
  std::vector<int> pad_modes;        // measured mode indices (PAD runs)
  std::vector<uint64_t> pad_counts;  // aligned with pad_modes
  int ipad_index = 0;                // pair index (iPAD runs)
  uint64_t count_plus = 0, count_minus = 0;
  uint64_t other_count = 0;  // no photon, or a photon outside measured modes
  uint64_t m_modes = 0;      // temporal modes M
  double epsilon = 0;
  uint64_t seed = 0;
  uint64_t stream = 0;
};

struct EstimateEntry {
  int order = 0;  // moment order k of beta_k
  double estimate = 0;
  double analytic_variance = 0;  // exact binomial variance of the estimator
};

struct EstimateReport {
  std::vector<EstimateEntry> entries;
  double n_photons = 0;  // N = M * epsilon
};

// Aggregates over replicated runs.
struct ReplicateSummary {
  int order = 0;
  double beta_true = 0;
  double mean_estimate = 0;
  double bias_z = 0;             // (mean - beta) * sqrt(R) / sigma_analytic
  double analytic_variance = 0;  // from the exact binomial formula
  double empirical_variance = 0;
  double variance_ratio = 0;  // empirical / analytic
  int replicates = 0;
};

SpadeModel build_spade(const MeasureSpec& q, int n_max);

// q_n = int |C_n|^2 dP and the iPAD splits q_n^± = int |(C_n ± C_{n+1})|^2/2 dP.
ModeProbabilities mode_probabilities(const SpadeModel& model,
                                     const MeasureSpec& p_measure);

// Generalized moments indexed by order k = 0..2*n_max (odd orders up to
// 2*n_max - 1): beta_{2n} = q_n / r_n and beta_{2n+1} = (q_n^+ - q_n^-)/s_n.
// These operational definitions make the count estimators exactly unbiased.
std::vector<Real> generalized_moments(const SpadeModel& model,
                                      const MeasureSpec& p_measure);

// Photon counting over M temporal modes with one-photon probability epsilon
// per mode; the per-mode landing probabilities are epsilon * q. Collapsed to
// a single multinomial draw over M trials, which is distribution-identical
// to per-mode sampling. Fully deterministic given (seed, stream).
CountRecord simulate_counts(const SpadeModel& model,
                            const MeasureSpec& p_measure, uint64_t m_modes,
                            double epsilon, uint64_t seed,
                            SpadeModeKind kind, const std::vector<int>& modes,
                            uint64_t stream = 0);

// Unbiased moment estimators from counts. If the true object measure is
// supplied, analytic variances use the exact mode probabilities; otherwise
// they fall back to plug-in probabilities from the observed counts.
EstimateReport estimate(const CountRecord& counts, const SpadeModel& model,
                        const MeasureSpec* p_truth = nullptr);

std::vector<ReplicateSummary> summarize_replicates(
    const std::vector<EstimateReport>& reports, const SpadeModel& model,
    const MeasureSpec& p_truth);

}  // namespace subdiff
