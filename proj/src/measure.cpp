#include "subdiff/measure.hpp"

#include <boost/math/special_functions/fpclassify.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace subdiff {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw ConfigError("quadrature order must be >= 1");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(order, Real(0));
  rule.weights.assign(order, Real(0));
  const Real pi = real_pi();
  const Real tol = ldexp(Real(1), -static_cast<int>(precision_bits()) + 4);

  // Newton iteration on the Legendre polynomial P_order, seeded with the
  // Chebyshev-type approximation to the k-th root; symmetric pairs share one
  // solve.
  for (int k = 0; k < (order + 1) / 2; ++k) {
    Real x = cos(pi * (Real(k) + Real(3) / 4) / (Real(order) + Real(1) / 2));
    Real pp(0);
    for (int iter = 0; iter < 200; ++iter) {
      // Evaluate P_order(x) and its derivative by the three-term recurrence.
      Real p0(1), p1 = x;
      for (int n = 2; n <= order; ++n) {
        Real p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / pp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    Real w = 2 / ((1 - x * x) * pp * pp);
    rule.nodes[k] = -x;  // ascending
    rule.weights[k] = w;
    rule.nodes[order - 1 - k] = x;
    rule.weights[order - 1 - k] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = Real(0);
  return rule;
}

const Real& MeasureSpec::half_width() const {
  if (!has_finite_half_width())
    throw NumericError("half_width: measure has unbounded support");
  return half_width_;
}

Real MeasureSpec::density_at(const Real& x) const {
  if (kind_ != Kind::Density)
    throw NumericError("density_at: measure is not a density");
  return density_(x) * density_norm_;
}

int MeasureSpec::max_hankel_order() const {
  if (kind_ == Kind::Atoms) return static_cast<int>(atoms_.size()) - 1;
  return kMomentOrderCap / 2;
}

bool MeasureSpec::contains(const Real& x) const {
  switch (kind_) {
    case Kind::Atoms: {
      const Real tol = half_width_ * 1e-12 + Real(1e-300);
      for (const auto& a : atoms_)
        if (abs(x - a.position) <= tol) return true;
      return false;
    }
    case Kind::Density: {
      const Real tol = (c2_ - c1_) * 1e-12;
      return x >= c1_ - tol && x <= c2_ + tol;
    }
    case Kind::GaussianFrequency:
      return true;
  }
  return false;
}

MeasureSpec MeasureSpec::atoms(std::string name, std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("atoms measure needs at least one atom");
  Real total(0);
  Real hw(0);
  for (const auto& a : atoms) {
    if (a.weight < 0)
      throw ConfigError("atom weights must be nonnegative in measure '" +
                        name + "'");
    total += a.weight;
    if (abs(a.position) > hw) hw = abs(a.position);
  }
  if (abs(total - 1) > 1e-12)
    throw ConfigError("atom weights must sum to 1 within 1e-12 in measure '" +
                      name + "'");
  MeasureSpec m;
  m.kind_ = Kind::Atoms;
  m.name_ = std::move(name);
  m.atoms_ = std::move(atoms);
  for (auto& a : m.atoms_) a.weight /= total;  // exact renormalization
  m.half_width_ = hw;
  return m;
}

MeasureSpec MeasureSpec::density(std::string name, Real c1, Real c2,
                                 std::function<Real(const Real&)> density,
                                 int quadrature_nodes) {
  if (!(c1 < c2)) throw ConfigError("density interval must satisfy c1 < c2");
  MeasureSpec m;
  m.kind_ = Kind::Density;
  m.name_ = std::move(name);
  m.c1_ = c1;
  m.c2_ = c2;
  m.density_ = std::move(density);
  m.quad_ = gauss_legendre(quadrature_nodes);
  m.half_width_ = std::max(abs(c1), abs(c2));

  // Normalize and check nonnegativity at the nodes.
  const Real mid = (c1 + c2) / 2, hw = (c2 - c1) / 2;
  Real z(0);
  for (int i = 0; i < m.quad_.order; ++i) {
    Real x = mid + hw * m.quad_.nodes[i];
    Real v = m.density_(x);
    if (v < 0)
      throw ConfigError("density is negative at x=" + x.str(8) +
                        " in measure '" + m.name_ + "'");
    z += m.quad_.weights[i] * v;
  }
  z *= hw;
  if (!(z > 0))
    throw ConfigError("density integrates to zero in measure '" + m.name_ + "'");
  m.density_norm_ = 1 / z;
  return m;
}

MeasureSpec MeasureSpec::gaussian_frequency() {
  MeasureSpec m;
  m.kind_ = Kind::GaussianFrequency;
  m.name_ = "gaussian";
  return m;
}

Real moment(const MeasureSpec& p_measure, int p) {
  if (p < 0) throw ConfigError("moment order must be nonnegative");
  if (p > kMomentOrderCap)
    throw NumericError("moment order " + std::to_string(p) +
                       " exceeds the configured cap " +
                       std::to_string(kMomentOrderCap));
  return moments_up_to(p_measure, p)[p];
}

std::vector<Real> moments_up_to(const MeasureSpec& p_measure, int p_max) {
  if (p_max < 0) throw ConfigError("moment order must be nonnegative");
  if (p_max > kMomentOrderCap)
    throw NumericError("moment order " + std::to_string(p_max) +
                       " exceeds the configured cap " +
                       std::to_string(kMomentOrderCap));
  std::vector<Real> mom(p_max + 1, Real(0));
  switch (p_measure.kind()) {
    case MeasureSpec::Kind::Atoms: {
      for (const auto& a : p_measure.atom_list()) {
        Real pw(1);
        for (int p = 0; p <= p_max; ++p) {
          mom[p] += a.weight * pw;
          pw *= a.position;
        }
      }
      break;
    }
    case MeasureSpec::Kind::Density: {
      const auto& q = p_measure.quadrature();
      const Real mid = (p_measure.interval_lo() + p_measure.interval_hi()) / 2;
      const Real hw = (p_measure.interval_hi() - p_measure.interval_lo()) / 2;
      for (int i = 0; i < q.order; ++i) {
        Real x = mid + hw * q.nodes[i];
        Real w = q.weights[i] * hw * p_measure.density_at(x);
        Real pw(1);
        for (int p = 0; p <= p_max; ++p) {
          mom[p] += w * pw;
          pw *= x;
        }
      }
      break;
    }
    case MeasureSpec::Kind::GaussianFrequency: {
      // E[k^(2m)] = (2m-1)!! / 4^m, odd moments vanish.
      for (int p = 0; p <= p_max; p += 2) {
        mom[p] = double_factorial(p - 1) / pow(Real(4), p / 2);
      }
      break;
    }
  }
  return mom;
}

Real integrate(const MeasureSpec& p_measure,
               const std::function<Real(const Real&)>& f) {
  switch (p_measure.kind()) {
    case MeasureSpec::Kind::Atoms: {
      Real s(0);
      for (const auto& a : p_measure.atom_list()) {
        Real v = f(a.position);
        if (!boost::math::isfinite(v))
          throw NumericError("integrand not finite at node x=" +
                             a.position.str(8));
        s += a.weight * v;
      }
      return s;
    }
    case MeasureSpec::Kind::Density: {
      const auto& q = p_measure.quadrature();
      const Real mid = (p_measure.interval_lo() + p_measure.interval_hi()) / 2;
      const Real hw = (p_measure.interval_hi() - p_measure.interval_lo()) / 2;
      Real s(0);
      for (int i = 0; i < q.order; ++i) {
        Real x = mid + hw * q.nodes[i];
        Real v = f(x);
        if (!boost::math::isfinite(v))
          throw NumericError("integrand not finite at node x=" + x.str(8));
        s += q.weights[i] * hw * p_measure.density_at(x) * v;
      }
      return s;
    }
    case MeasureSpec::Kind::GaussianFrequency:
      throw NumericError(
          "integrate: the analytic Gaussian frequency measure supports "
          "moments only");
  }
  throw NumericError("integrate: unknown measure kind");
}

StandardizedMeasure standardize(const MeasureSpec& p_measure) {
  if (!p_measure.has_finite_half_width())
    throw NumericError("standardize: measure has unbounded support");
  const Real delta = p_measure.half_width();
  if (!(delta > 0))
    throw NumericError("standardize: measure has zero half-width");
  MeasureSpec base = [&]() -> MeasureSpec {
    switch (p_measure.kind()) {
      case MeasureSpec::Kind::Atoms: {
        std::vector<Atom> scaled = p_measure.atom_list();
        for (auto& a : scaled) a.position /= delta;
        return MeasureSpec::atoms(p_measure.name() + "_base",
                                  std::move(scaled));
      }
      case MeasureSpec::Kind::Density: {
        // y = x/delta; the normalization constant is recomputed by the
        // constructor, so only the shape needs rescaling.
        const MeasureSpec original = p_measure;
        auto shape = [original, delta](const Real& y) {
          return original.density_at(y * delta);
        };
        return MeasureSpec::density(
            p_measure.name() + "_base", p_measure.interval_lo() / delta,
            p_measure.interval_hi() / delta, shape,
            p_measure.quadrature().order);
      }
      case MeasureSpec::Kind::GaussianFrequency:
        break;
    }
    throw NumericError("standardize: measure has unbounded support");
  }();
  return StandardizedMeasure(std::move(base), delta);
}

MeasureSpec rescale(const MeasureSpec& base, const Real& delta) {
  if (!(delta > 0)) throw ConfigError("rescale: delta must be positive");
  switch (base.kind()) {
    case MeasureSpec::Kind::Atoms: {
      std::vector<Atom> scaled = base.atom_list();
      for (auto& a : scaled) a.position *= delta;
      return MeasureSpec::atoms(base.name(), std::move(scaled));
    }
    case MeasureSpec::Kind::Density: {
      const MeasureSpec b = base;
      const Real d = delta;
      auto shape = [b, d](const Real& x) { return b.density_at(x / d); };
      return MeasureSpec::density(base.name(), base.interval_lo() * delta,
                                  base.interval_hi() * delta, shape,
                                  base.quadrature().order);
    }
    case MeasureSpec::Kind::GaussianFrequency:
      throw NumericError("rescale: unbounded measure cannot be rescaled");
  }
  throw NumericError("rescale: unknown measure kind");
}

MeasureSpec builtin_r0(const std::string& family, int quadrature_nodes) {
  if (family == "uniform") {
    return MeasureSpec::density("uniform", Real(-1), Real(1),
                                [](const Real&) { return Real(1); },
                                quadrature_nodes);
  }
  if (family == "two_atom") {
    return MeasureSpec::atoms(
        "two_atom",
        {{Real(-1), Real(1) / 2}, {Real(1), Real(1) / 2}});
  }
  if (family == "quadratic") {
    return MeasureSpec::density("quadratic", Real(-1), Real(1),
                                [](const Real& y) { return 1 + y * y; },
                                quadrature_nodes);
  }
  if (family == "trunc_gaussian") {
    return MeasureSpec::density(
        "trunc_gaussian", Real(-1), Real(1),
        [](const Real& y) { return exp(-y * y / 2); }, quadrature_nodes);
  }
  throw ConfigError("unknown built-in measure family '" + family +
                    "' (available: uniform, two_atom, quadratic, "
                    "trunc_gaussian)");
}

MeasureSpec builtin_p0(const std::string& family, const Real& delta,
                       int quadrature_nodes) {
  return rescale(builtin_r0(family, quadrature_nodes), delta);
}

std::vector<std::string> builtin_families() {
  return {"uniform", "two_atom", "quadratic", "trunc_gaussian"};
}

MeasureSpec load_atoms_csv(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open atoms CSV file: " + path);
  std::vector<Atom> atoms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    // Skip an optional header row.
    if (lineno == 1 && line.find_first_not_of(
                           "0123456789+-.eE, \t\r") != std::string::npos)
      continue;
    std::stringstream ss(line);
    std::string pos_s, w_s;
    if (!std::getline(ss, pos_s, ',') || !std::getline(ss, w_s))
      throw ConfigError("malformed atoms CSV line " + std::to_string(lineno) +
                        " in " + path);
    atoms.push_back({Real(pos_s), Real(w_s)});
  }
  return MeasureSpec::atoms(name, std::move(atoms));
}

}  // namespace subdiff
