#pragma once

#include <string>

#include "subdiff/measure.hpp"
#include "subdiff/submodel.hpp"

namespace subdiff {

enum class PsfFamily { Gaussian, SuperGaussian, GeneralizedLorentzian, HardAperture };

// Highest derivative order served by the finite-difference families.
inline constexpr int kMaxPsfDerivativeOrder = 8;
// Zero-protection floor applied to the photon density in experimental mode.
inline constexpr double kEtaFloor = 1e-30;
// Truncation certificate: the certified mass outside the integration window
// must fall below this fraction of the accumulated Fisher integral.
inline constexpr double kTailRelTarget = 1e-10;

// Point-spread function of a direct-imaging detector, normalized to unit
// integral. The classical side works in plain double precision: all Fisher
// integrands are smooth and well-scaled once the certified truncation window
// is applied.
//
// Families:
//   Gaussian(sigma)               h = exp(-xi^2/(2 sigma^2)) / (sigma sqrt(2 pi))
//   SuperGaussian(d2, p)          h = d1 exp(-(xi/d2)^(2p))
//   GeneralizedLorentzian(d2, p)  h = d1 / ((xi/d2)^(2p) + 1)
//   HardAperture                  h = sin(xi)^2 / (pi xi^2)   [experimental]
//
// The first three admit the shifted dominating pair
//   underline(xi)   = h(|xi| + delta0)          <= h(xi - x),
//   envelope(n, xi) >= |h^(n)(xi - x)|          for all |x| <= delta0,
// built by replacing |xi| with |xi| + delta0 in the decreasing factor and
// bounding the polynomial factor by its absolute-coefficient value at the
// farthest point of the window. HardAperture has zeros, so no positive lower
// envelope exists and every domination request fails.
class PsfModel {
 public:
  static PsfModel gaussian(double sigma = 1.0);
  static PsfModel super_gaussian(double d2, int p);
  static PsfModel generalized_lorentzian(double d2, int p);
  static PsfModel hard_aperture();

  PsfFamily family() const { return family_; }
  const std::string& label() const { return label_; }
  bool experimental() const { return family_ == PsfFamily::HardAperture; }
  bool has_dominators() const { return family_ != PsfFamily::HardAperture; }
  double d1() const { return d1_; }
  double d2() const { return d2_; }
  int p() const { return p_; }
  double sigma() const;  // Gaussian only

  // Characteristic width, used for difference steps and window seeds.
  double width_scale() const;

  double value(double xi) const;

  // n-th derivative. Closed form (Hermite recurrence) for the Gaussian;
  // central differences with three Richardson levels for the others.
  double derivative(int n, double xi) const;

  // Dominating pair for |x| <= delta0 (families with dominators only).
  double underline(double xi, double delta0) const;
  double envelope(int n, double xi, double delta0) const;
  // Log forms, safe far into the tails where the plain values underflow.
  double log_underline(double xi, double delta0) const;
  double log_envelope(int n, double xi, double delta0) const;

 private:
  PsfModel() = default;
  double fd_derivative(int n, double xi) const;

  PsfFamily family_ = PsfFamily::Gaussian;
  std::string label_;
  double d1_ = 0;
  double d2_ = 0;
  int p_ = 1;
};

// Outcome of the domination-pair verification at a given (delta0, mu):
// pointwise grid checks of the two envelope inequalities plus the two
// integrals that must be finite,
//   integral_score    = int [h^(mu)(xi)]^2  / underline(xi) dxi,
//   integral_envelope = int [envelope(mu+1, xi)]^2 / underline(xi) dxi.
struct DominationReport {
  bool pass = false;
  bool underline_ok = false;
  bool envelope_ok = false;
  bool integrals_finite = false;
  double integral_score = 0;
  double integral_envelope = 0;
  double delta0 = 0;
  int mu = 0;
  std::string note;
};

// Classical precision limit of direct imaging for one tilted submodel:
// fisher = int etadot^2 / eta0 dxi over the certified window [-T, T], and
// crb = dot_beta^2 / (n_photons * fisher).
struct FisherReport {
  double fisher = 0;
  double dot_beta = 0;
  double n_photons = 1;
  double crb = 0;
  double truncation_xi = 0;  // window half-length T
  double tail_bound = 0;     // certified mass outside the window; for the
                             // experimental mode, the last observed increment
  double quad_error = 0;     // quadrature error estimate inside the window
  bool experimental = false;
  std::string note;
};

// Photon density eta(xi) = int h(xi - x) P(dx). The measure must live in the
// position domain (atoms or a density).
double intensity(const PsfModel& psf, const MeasureSpec& p_measure, double xi);

// Verifies the dominating-pair hypotheses for all |x| <= delta0 on a grid
// and evaluates the two integrals. HardAperture always fails (h has zeros).
DominationReport check_domination(const PsfModel& psf, double delta0, int mu);

// Fisher information of the direct-imaging submodel. Runs the domination
// check at delta0 equal to the submodel half-width and refuses on failure;
// the HardAperture family requires allow_experimental and is computed with
// the zero-protection floor and an uncertified window.
FisherReport submodel_fisher(const PsfModel& psf, const TiltedSubmodel& sub,
                             double n_photons = 1.0,
                             bool allow_experimental = false);

// Cramer-Rao bound from the report ingredients; errors on zero Fisher.
double crb(double dot_beta_value, double fisher, double n_photons);

// True for the one PSF/frequency-measure pair with a common normalization:
// the unit-width Gaussian PSF and the Gaussian frequency measure. Cross-side
// comparisons (Fisher versus the purified-score norm) are meaningful only
// for matched pairs.
bool matched_gaussian_pair(const PsfModel& psf, const MeasureSpec& q);

}  // namespace subdiff
