#include "subdiff/spade.hpp"

#include <cmath>

#include "subdiff/rng.hpp"

namespace subdiff {

namespace {
constexpr int kSeriesTermsDefault = 30;  // x^(n+2t) terms kept per mode

// Amplitude of mode n at position x as (re, im); imaginary part vanishes for
// symmetric Q.
std::pair<Real, Real> amplitude(const SpadeModel& model, int n, const Real& x) {
  if (model.closed_form_gaussian) {
    const Real re =
        exp(-x * x / 8) * pow(x / 2, n) / sqrt(factorial(n));
    return {re, Real(0)};
  }
  const Real x2 = x * x;
  // re = sum_t c[t] x^(n+2t), Horner in x^2 with an outer factor x^n.
  const auto& cr = model.c_coeffs[n];
  Real re(0);
  for (int t = static_cast<int>(cr.size()) - 1; t >= 0; --t)
    re = re * x2 + cr[t];
  re *= pow(x, n);
  const auto& ci = model.c_coeffs_im[n];
  Real im(0);
  for (int t = static_cast<int>(ci.size()) - 1; t >= 0; --t)
    im = im * x2 + ci[t];
  im *= pow(x, n + 1);
  return {re, im};
}
}  // namespace

Real SpadeModel::mode_intensity(int n, const Real& x) const {
  const auto [re, im] = amplitude(*this, n, x);
  return re * re + im * im;
}

Real SpadeModel::series_tail_ratio(int n, const Real& x_abs) const {
  if (closed_form_gaussian) return Real(0);
  const int p_next = n + 2 * static_cast<int>(c_coeffs[n].size());
  // Magnitude bound on the first dropped term: the factor entries satisfy
  // |tildeL(p, n)| <= hw_Q^p, so the term is at most (hw_Q * x)^p / p!.
  const Real base = x_abs * q.half_width();
  return pow(base, p_next) / factorial(p_next);
}

SpadeModel build_spade(const MeasureSpec& q, int n_max) {
  if (n_max < 1) throw ConfigError("spade n_max must be >= 1");
  SpadeModel model(q);
  model.n_max = n_max;

  int series_rows;  // highest factor row needed by the amplitude series
  switch (q.kind()) {
    case MeasureSpec::Kind::GaussianFrequency:
      model.closed_form_gaussian = true;
      series_rows = n_max + 1;
      break;
    case MeasureSpec::Kind::Density:
      model.closed_form_gaussian = false;
      series_rows = std::min(n_max + 1 + 2 * kSeriesTermsDefault,
                             2 * (kMomentOrderCap / 4));
      break;
    case MeasureSpec::Kind::Atoms:
      throw ConfigError(
          "unsupported frequency measure '" + q.name() +
          "': the demultiplexing construction requires a measure with "
          "infinite bounded support or the analytic Gaussian measure; a "
          "finite-atom measure satisfies neither hypothesis");
    default:
      throw ConfigError("unsupported frequency measure kind");
  }

  const HankelMatrix h = escalate_on_pivot_failure(
      [&] { return build_hankel(q, series_rows); });
  const CholeskyFactor full = cholesky(h);

  // Keep the (n_max+2) x (n_max+2) block as the reported factor.
  Mat block(n_max + 2, n_max + 2);
  for (int i = 0; i <= n_max + 1; ++i)
    for (int j = 0; j <= n_max + 1; ++j) block(i, j) = full.entries(i, j);
  model.tilde_l = CholeskyFactor{block};

  model.c_coeffs.resize(n_max + 1);
  model.c_coeffs_im.resize(n_max + 1);
  if (!model.closed_form_gaussian) {
    model.series_terms = 0;
    for (int n = 0; n <= n_max; ++n) {
      for (int p = n; p <= series_rows; p += 2) {
        const int t = (p - n) / 2;
        const Real sign = (t % 2 == 0) ? Real(1) : Real(-1);
        model.c_coeffs[n].push_back(sign * full.entries(p, n) / factorial(p));
      }
      for (int p = n + 1; p <= series_rows; p += 2) {
        const int t = (p - n - 1) / 2;
        const Real sign = (t % 2 == 0) ? Real(-1) : Real(1);
        model.c_coeffs_im[n].push_back(sign * full.entries(p, n) /
                                       factorial(p));
      }
      model.series_terms =
          std::max(model.series_terms,
                   static_cast<int>(model.c_coeffs[n].size()));
    }
  }

  for (int n = 0; n <= n_max; ++n) {
    const Real lnn = model.tilde_l.entries(n, n);
    const Real lnn1 = model.tilde_l.entries(n + 1, n + 1);
    const Real rn = lnn * lnn / (factorial(n) * factorial(n));
    const Real sn = 2 * lnn * lnn1 / (factorial(n) * factorial(n + 1));
    if (!(rn > 0) || !(sn > 0))
      throw NumericError("mode-weight coefficient underflow at n=" +
                         std::to_string(n));
    model.r.push_back(rn);
    model.s.push_back(sn);
  }
  return model;
}

ModeProbabilities mode_probabilities(const SpadeModel& model,
                                     const MeasureSpec& p_measure) {
  if (!p_measure.has_finite_half_width())
    throw ConfigError("mode probabilities require a bounded object measure");

  if (!model.closed_form_gaussian) {
    const Real tail = model.series_tail_ratio(0, p_measure.half_width());
    if (tail > 1e-12)
      throw NumericError(
          "object support exceeds the amplitude-series validity radius "
          "(relative tail " + tail.str(4) + " > 1e-12); increase the series "
          "length or shrink the support");
  }

  ModeProbabilities probs;
  auto check = [](const Real& v, const std::string& what) {
    if (v < 0 || v > Real(1) + 1e-10)
      throw NumericError("mode probability " + what + " = " + v.str(8) +
                         " outside [0, 1]; amplitude series truncation is "
                         "too short");
    return v;
  };

  for (int n = 0; n <= model.n_max; ++n) {
    const Real qn = integrate(p_measure, [&](const Real& x) {
      return model.mode_intensity(n, x);
    });
    probs.pad.push_back(check(qn, "q_" + std::to_string(n)));
  }
  for (int n = 0; n + 1 <= model.n_max; ++n) {
    Real qp = integrate(p_measure, [&](const Real& x) {
      const auto [re1, im1] = amplitude(model, n, x);
      const auto [re2, im2] = amplitude(model, n + 1, x);
      const Real re = re1 + re2, im = im1 + im2;
      return (re * re + im * im) / 2;
    });
    Real qm = integrate(p_measure, [&](const Real& x) {
      const auto [re1, im1] = amplitude(model, n, x);
      const auto [re2, im2] = amplitude(model, n + 1, x);
      const Real re = re1 - re2, im = im1 - im2;
      return (re * re + im * im) / 2;
    });
    probs.ipad_plus.push_back(check(qp, "q_" + std::to_string(n) + "^+"));
    probs.ipad_minus.push_back(check(qm, "q_" + std::to_string(n) + "^-"));
  }
  return probs;
}

std::vector<Real> generalized_moments(const SpadeModel& model,
                                      const MeasureSpec& p_measure) {
  const ModeProbabilities probs = mode_probabilities(model, p_measure);
  std::vector<Real> beta(2 * model.n_max + 1, Real(0));
  for (int n = 0; n <= model.n_max; ++n)
    beta[2 * n] = probs.pad[n] / model.r[n];
  for (int n = 0; n + 1 <= model.n_max; ++n)
    beta[2 * n + 1] =
        (probs.ipad_plus[n] - probs.ipad_minus[n]) / model.s[n];
  return beta;
}

CountRecord simulate_counts(const SpadeModel& model,
                            const MeasureSpec& p_measure, uint64_t m_modes,
                            double epsilon, uint64_t seed, SpadeModeKind kind,
                            const std::vector<int>& modes, uint64_t stream) {
  if (m_modes < 1) throw ConfigError("temporal mode count M must be >= 1");
  if (!(epsilon >= 0) || epsilon >= 1)
    throw ConfigError("per-mode photon probability epsilon must be in [0, 1)");

  const ModeProbabilities probs = mode_probabilities(model, p_measure);
  CountRecord rec;
  rec.kind = kind;
  rec.m_modes = m_modes;
  rec.epsilon = epsilon;
  rec.seed = seed;
  rec.stream = stream;

  std::vector<double> cell_probs;
  if (kind == SpadeModeKind::EvenPad) {
    if (modes.empty()) throw ConfigError("PAD run needs at least one mode");
    for (int n : modes) {
      if (n < 0 || n > model.n_max)
        throw ConfigError("PAD mode index out of range: " + std::to_string(n));
      cell_probs.push_back(epsilon * to_double(probs.pad[n]));
    }
    rec.pad_modes = modes;
  } else {
    if (modes.size() != 1)
      throw ConfigError("iPAD run measures exactly one mode pair");
    const int n = modes[0];
    if (n < 0 || n + 1 > model.n_max)
      throw ConfigError("iPAD pair index out of range: " + std::to_string(n));
    rec.ipad_index = n;
    cell_probs.push_back(epsilon * to_double(probs.ipad_plus[n]));
    cell_probs.push_back(epsilon * to_double(probs.ipad_minus[n]));
  }

  double total = 0;
  for (double p : cell_probs) total += p;
  if (total > 1.0 + 1e-12)
    throw NumericError("simulated cell probabilities exceed 1");

  Philox gen(seed, stream);
  const auto counts = multinomial_draw(gen, m_modes, cell_probs);
  if (kind == SpadeModeKind::EvenPad) {
    rec.pad_counts.assign(counts.begin(), counts.end() - 1);
  } else {
    rec.count_plus = counts[0];
    rec.count_minus = counts[1];
  }
  rec.other_count = counts.back();
  return rec;
}

EstimateReport estimate(const CountRecord& counts, const SpadeModel& model,
                        const MeasureSpec* p_truth) {
  EstimateReport rep;
  const double n_photons = static_cast<double>(counts.m_modes) * counts.epsilon;
  if (!(n_photons > 0))
    throw ConfigError("estimate needs N = M * epsilon > 0");
  rep.n_photons = n_photons;

  std::optional<ModeProbabilities> truth_probs;
  if (p_truth) truth_probs = mode_probabilities(model, *p_truth);
  const double eps = counts.epsilon;

  if (counts.kind == SpadeModeKind::EvenPad) {
    for (size_t i = 0; i < counts.pad_modes.size(); ++i) {
      const int n = counts.pad_modes[i];
      const double rn = to_double(model.r[n]);
      EstimateEntry e;
      e.order = 2 * n;
      e.estimate = static_cast<double>(counts.pad_counts[i]) / (rn * n_photons);
      const double qn =
          truth_probs ? to_double(truth_probs->pad[n])
                      : static_cast<double>(counts.pad_counts[i]) /
                            (eps * static_cast<double>(counts.m_modes));
      e.analytic_variance = qn * (1 - eps * qn) / (rn * rn * n_photons);
      rep.entries.push_back(e);
    }
  } else {
    const int n = counts.ipad_index;
    const double sn = to_double(model.s[n]);
    EstimateEntry e;
    e.order = 2 * n + 1;
    e.estimate = (static_cast<double>(counts.count_plus) -
                  static_cast<double>(counts.count_minus)) /
                 (sn * n_photons);
    double qp, qm;
    if (truth_probs) {
      qp = to_double(truth_probs->ipad_plus[n]);
      qm = to_double(truth_probs->ipad_minus[n]);
    } else {
      const double m = static_cast<double>(counts.m_modes);
      qp = static_cast<double>(counts.count_plus) / (eps * m);
      qm = static_cast<double>(counts.count_minus) / (eps * m);
    }
    const double diff = qp - qm;
    e.analytic_variance =
        (qp + qm - eps * diff * diff) / (sn * sn * n_photons);
    rep.entries.push_back(e);
  }
  return rep;
}

std::vector<ReplicateSummary> summarize_replicates(
    const std::vector<EstimateReport>& reports, const SpadeModel& model,
    const MeasureSpec& p_truth) {
  if (reports.empty()) throw ConfigError("no replicates to summarize");
  const size_t n_entries = reports.front().entries.size();
  const int replicates = static_cast<int>(reports.size());
  const auto beta = generalized_moments(model, p_truth);

  std::vector<ReplicateSummary> out;
  for (size_t j = 0; j < n_entries; ++j) {
    ReplicateSummary s;
    s.order = reports.front().entries[j].order;
    s.replicates = replicates;
    s.beta_true = to_double(beta[s.order]);
    s.analytic_variance = reports.front().entries[j].analytic_variance;

    double mean = 0;
    for (const auto& r : reports) mean += r.entries[j].estimate;
    mean /= replicates;
    double var = 0;
    for (const auto& r : reports) {
      const double d = r.entries[j].estimate - mean;
      var += d * d;
    }
    var /= std::max(1, replicates - 1);

    s.mean_estimate = mean;
    s.empirical_variance = var;
    s.variance_ratio =
        s.analytic_variance > 0 ? var / s.analytic_variance : 0;
    const double se = std::sqrt(s.analytic_variance /
                                static_cast<double>(replicates));
    s.bias_z = se > 0 ? (mean - s.beta_true) / se : 0;
    out.push_back(s);
  }
  return out;
}

}  // namespace subdiff
