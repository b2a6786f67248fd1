#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "subdiff/real.hpp"

namespace subdiff {

// Gauss-Legendre quadrature on the reference interval [-1, 1]. A rule with
// `order` nodes integrates polynomials up to degree 2*order-1 exactly.
struct QuadratureRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;  // sum to 2 on [-1, 1]
  int order = 0;
};

QuadratureRule gauss_legendre(int order);

struct Atom {
  Real position;
  Real weight;
};

inline constexpr int kMomentOrderCap = 512;
inline constexpr int kDefaultQuadratureNodes = 200;

// A probability measure on the real line: either a finite list of atoms, a
// density on a compact interval integrated with an attached quadrature rule,
// or the analytic Gaussian spatial-frequency measure
// Q(dk) = sqrt(2/pi) * exp(-2 k^2) dk, represented by its moment formula
// E[k^(2m)] = (2m-1)!! / 4^m.
class MeasureSpec {
 public:
  enum class Kind { Atoms, Density, GaussianFrequency };

  static MeasureSpec atoms(std::string name, std::vector<Atom> atoms);
  // `density` need not be normalized; the constructor computes the
  // normalization with the attached rule and stores it.
  static MeasureSpec density(std::string name, Real c1, Real c2,
                             std::function<Real(const Real&)> density,
                             int quadrature_nodes = kDefaultQuadratureNodes);
  static MeasureSpec gaussian_frequency();

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool has_finite_half_width() const { return kind_ != Kind::GaussianFrequency; }
  const Real& half_width() const;  // sup |x| over the support
  const std::vector<Atom>& atom_list() const { return atoms_; }
  const Real& interval_lo() const { return c1_; }
  const Real& interval_hi() const { return c2_; }
  const QuadratureRule& quadrature() const { return quad_; }

  // Density value including the stored normalization factor.
  Real density_at(const Real& x) const;

  // Largest admissible Hankel order: a measure with m atoms supports orders
  // J < m only; densities and the Gaussian measure are unrestricted (up to
  // the precision budget).
  int max_hankel_order() const;

  bool contains(const Real& x) const;

 private:
  MeasureSpec() = default;
  Kind kind_ = Kind::Density;
  std::string name_;
  std::vector<Atom> atoms_;
  Real c1_{0}, c2_{0};
  std::function<Real(const Real&)> density_;
  Real density_norm_{1};
  QuadratureRule quad_;
  Real half_width_{0};
};

struct StandardizedMeasure {
  MeasureSpec base;  // supported in [-1, 1], half-width 1
  Real delta;        // original half-width

  StandardizedMeasure(MeasureSpec base_measure, Real original_half_width)
      : base(std::move(base_measure)),
        delta(std::move(original_half_width)) {}
};

// p-th raw moment, exact for atoms, quadrature for densities, closed form
// for the Gaussian frequency measure.
Real moment(const MeasureSpec& p_measure, int p);

// All raw moments 0..p_max in one pass (one power accumulation per node).
std::vector<Real> moments_up_to(const MeasureSpec& p_measure, int p_max);

// Integral of an arbitrary function against the measure. Not available for
// the analytic Gaussian frequency measure (moments only).
Real integrate(const MeasureSpec& p_measure,
               const std::function<Real(const Real&)>& f);

// Split P into a base measure of half-width 1 and the scale delta, so that
// moment(P, p) = delta^p * moment(base, p).
StandardizedMeasure standardize(const MeasureSpec& p_measure);

// Inverse of standardize: stretch a base measure by delta.
MeasureSpec rescale(const MeasureSpec& base, const Real& delta);

// Built-in object-measure families, declared by the shape of the
// standardized base on [-1, 1]:
//   uniform        flat density
//   two_atom       equal point masses at -1 and +1
//   quadratic      density proportional to 1 + y^2
//   trunc_gaussian density proportional to exp(-y^2/2), truncated at +/-1
MeasureSpec builtin_r0(const std::string& family,
                       int quadrature_nodes = kDefaultQuadratureNodes);
MeasureSpec builtin_p0(const std::string& family, const Real& delta,
                       int quadrature_nodes = kDefaultQuadratureNodes);
std::vector<std::string> builtin_families();

// Two-column CSV (position, weight) -> atoms measure.
MeasureSpec load_atoms_csv(const std::string& path, const std::string& name);

}  // namespace subdiff
