#include "nsfd/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "nsfd/errors.hpp"

namespace nsfd {

Poly Poly::bump(double center, double halfwidth, int power) {
  // q(x) = 1 - ((x-c)/w)^2, expanded; then q^power.
  const double w2 = halfwidth * halfwidth;
  Poly q({1.0 - center * center / w2, 2.0 * center / w2, -1.0 / w2});
  Poly out = Poly::constant(1.0);
  for (int k = 0; k < power; ++k) out = out * q;
  return out;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly::constant(0.0);
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k)
    a[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Poly(std::move(a));
}

double Poly::integrate(double a, double b) const {
  Poly F = antiderivative();
  return F(b) - F(a);
}

Poly Poly::operator*(const Poly& o) const {
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(r));
}

double SepScalar::eval(const Point& x) const {
  if (!in_support(x)) return 0.0;
  double s = 0;
  for (const SepTerm& t : terms) s += t.coef * t.p[0](x[0]) * t.p[1](x[1]) * t.p[2](x[2]);
  return s;
}

double SepScalar::eval_partial(const std::array<int, 3>& order, const Point& x) const {
  if (!in_support(x)) return 0.0;
  double s = 0;
  for (const SepTerm& t : terms) {
    double prod = t.coef;
    for (int i = 0; i < 3; ++i) {
      Poly p = t.p[static_cast<std::size_t>(i)];
      for (int k = 0; k < order[static_cast<std::size_t>(i)]; ++k) p = p.derivative();
      prod *= p(x[static_cast<std::size_t>(i)]);
    }
    s += prod;
  }
  return s;
}

SepScalar SepScalar::partial(int axis) const {
  SepScalar out;
  out.support = support;
  out.terms.reserve(terms.size());
  for (const SepTerm& t : terms) {
    SepTerm d = t;
    d.p[static_cast<std::size_t>(axis)] = t.p[static_cast<std::size_t>(axis)].derivative();
    out.terms.push_back(std::move(d));
  }
  return out;
}

double SepScalar::integrate_box(const Box& cell) const {
  double lo[3], hi[3];
  for (int i = 0; i < 3; ++i) {
    lo[i] = std::max(cell.lo[i], support.lo[i]);
    hi[i] = std::min(cell.hi[i], support.hi[i]);
    if (!(hi[i] > lo[i])) return 0.0;
  }
  double s = 0;
  for (const SepTerm& t : terms)
    s += t.coef * t.p[0].integrate(lo[0], hi[0]) * t.p[1].integrate(lo[1], hi[1]) *
         t.p[2].integrate(lo[2], hi[2]);
  return s;
}

double SepScalar::integrate_product(const SepScalar& other) const {
  double lo[3], hi[3];
  for (int i = 0; i < 3; ++i) {
    lo[i] = std::max(support.lo[i], other.support.lo[i]);
    hi[i] = std::min(support.hi[i], other.support.hi[i]);
    if (!(hi[i] > lo[i])) return 0.0;
  }
  double s = 0;
  for (const SepTerm& ta : terms)
    for (const SepTerm& tb : other.terms) {
      double prod = ta.coef * tb.coef;
      for (int i = 0; i < 3; ++i) {
        std::size_t ii = static_cast<std::size_t>(i);
        prod *= (ta.p[ii] * tb.p[ii]).integrate(lo[i], hi[i]);
      }
      s += prod;
    }
  return s;
}

SepScalar sep_difference(const SepScalar& a, const SepScalar& b) {
  SepScalar out = a;
  for (const SepTerm& t : b.terms) {
    SepTerm n = t;
    n.coef = -n.coef;
    out.terms.push_back(std::move(n));
  }
  return out;
}

SepVector curl(const SepVector& psi) {
  return {sep_difference(psi[2].partial(1), psi[1].partial(2)),
          sep_difference(psi[0].partial(2), psi[2].partial(0)),
          sep_difference(psi[1].partial(0), psi[0].partial(1))};
}

double l2_norm_sq(const SepVector& f) {
  return f[0].l2_norm_sq() + f[1].l2_norm_sq() + f[2].l2_norm_sq();
}

SepVector bump_potential(const Point& center, const Point& halfwidth,
                         const std::array<double, 3>& amp, int power) {
  Box supp;
  for (int i = 0; i < 3; ++i) {
    supp.lo[i] = center[i] - halfwidth[i];
    supp.hi[i] = center[i] + halfwidth[i];
  }
  SepVector psi;
  for (int k = 0; k < 3; ++k) {
    SepScalar& s = psi[static_cast<std::size_t>(k)];
    s.support = supp;
    SepTerm t;
    t.coef = amp[static_cast<std::size_t>(k)];
    for (int i = 0; i < 3; ++i)
      t.p[static_cast<std::size_t>(i)] = Poly::bump(center[i], halfwidth[i], power);
    s.terms.push_back(std::move(t));
  }
  return psi;
}

Envelope Envelope::one() { return Envelope(); }

Envelope Envelope::exp_decay(double lambda) {
  Envelope e;
  e.kind_ = Kind::Exp;
  e.lambda_ = lambda;
  return e;
}

Envelope Envelope::poly_bump(double center, double halfwidth, int power) {
  Envelope e;
  e.kind_ = Kind::PolyBump;
  e.poly_ = Poly::bump(center, halfwidth, power);
  e.dpoly_ = e.poly_.derivative();
  e.poly_sq_ = e.poly_ * e.poly_;
  e.lo_ = center - halfwidth;
  e.hi_ = center + halfwidth;
  return e;
}

double Envelope::value(double t) const {
  switch (kind_) {
    case Kind::One: return 1.0;
    case Kind::Exp: return std::exp(-lambda_ * t);
    case Kind::PolyBump: return (t < lo_ || t > hi_) ? 0.0 : poly_(t);
  }
  return 0;
}

double Envelope::derivative(double t) const {
  switch (kind_) {
    case Kind::One: return 0.0;
    case Kind::Exp: return -lambda_ * std::exp(-lambda_ * t);
    case Kind::PolyBump: return (t < lo_ || t > hi_) ? 0.0 : dpoly_(t);
  }
  return 0;
}

double Envelope::integral(double a, double b) const {
  switch (kind_) {
    case Kind::One: return b - a;
    case Kind::Exp:
      if (lambda_ == 0) return b - a;
      return (std::exp(-lambda_ * a) - std::exp(-lambda_ * b)) / lambda_;
    case Kind::PolyBump: {
      double lo = std::max(a, lo_), hi = std::min(b, hi_);
      return hi > lo ? poly_.integrate(lo, hi) : 0.0;
    }
  }
  return 0;
}

double Envelope::square_integral(double a, double b) const {
  switch (kind_) {
    case Kind::One: return b - a;
    case Kind::Exp:
      if (lambda_ == 0) return b - a;
      return (std::exp(-2.0 * lambda_ * a) - std::exp(-2.0 * lambda_ * b)) / (2.0 * lambda_);
    case Kind::PolyBump: {
      double lo = std::max(a, lo_), hi = std::min(b, hi_);
      return hi > lo ? poly_sq_.integrate(lo, hi) : 0.0;
    }
  }
  return 0;
}

double domain_volume(const DomainSpec& spec) {
  switch (spec.kind) {
    case ShapeKind::Box: {
      double v = 1;
      for (int i = 0; i < 3; ++i) v *= spec.box.hi[i] - spec.box.lo[i];
      return v;
    }
    case ShapeKind::Ball:
      return 4.0 / 3.0 * M_PI * spec.ball_radius * spec.ball_radius * spec.ball_radius;
    case ShapeKind::LShape: {
      auto vol = [](const Box& b) {
        double v = 1;
        for (int i = 0; i < 3; ++i) v *= std::max(0.0, b.hi[i] - b.lo[i]);
        return v;
      };
      Box inter;
      for (int i = 0; i < 3; ++i) {
        inter.lo[i] = std::max(spec.box.lo[i], spec.box2.lo[i]);
        inter.hi[i] = std::min(spec.box.hi[i], spec.box2.hi[i]);
      }
      return vol(spec.box) + vol(spec.box2) - vol(inter);
    }
    case ShapeKind::Mask: {
      double occ = 0;
      for (std::uint8_t b : spec.mask.occ) occ += b ? 1.0 : 0.0;
      return occ * spec.mask.voxel * spec.mask.voxel * spec.mask.voxel;
    }
  }
  return 0;
}

double AnalyticField::spatial_l2_sq(const DomainSpec& spec) const {
  if (kind == "constant") {
    double c2 = constant_value[0] * constant_value[0] + constant_value[1] * constant_value[1] +
                constant_value[2] * constant_value[2];
    return c2 * domain_volume(spec);
  }
  return l2_norm_sq(spatial);
}

AnalyticField make_zero_field() {
  AnalyticField f;
  f.kind = "zero";
  for (auto& s : f.spatial) s.support = Box{{0, 0, 0}, {0, 0, 0}};
  return f;
}

AnalyticField make_constant_field(const std::array<double, 3>& value, const Box& cover) {
  AnalyticField f;
  f.kind = "constant";
  f.constant_value = value;
  // Oversized support so that every grid cell clips to the full cell.
  Box supp = cover;
  for (int i = 0; i < 3; ++i) {
    double pad = 1.0 + (cover.hi[i] - cover.lo[i]);
    supp.lo[i] -= pad;
    supp.hi[i] += pad;
  }
  for (int k = 0; k < 3; ++k) {
    SepScalar& s = f.spatial[static_cast<std::size_t>(k)];
    s.support = supp;
    SepTerm t;
    t.coef = value[static_cast<std::size_t>(k)];
    for (auto& p : t.p) p = Poly::constant(1.0);
    s.terms.push_back(std::move(t));
  }
  return f;
}

AnalyticField make_solenoidal_bump(const Point& center, const Point& halfwidth,
                                   const std::array<double, 3>& potential_amp,
                                   double amplitude) {
  AnalyticField f;
  f.kind = "solenoidal-bump";
  std::array<double, 3> amp = potential_amp;
  for (double& a : amp) a *= amplitude;
  f.spatial = curl(bump_potential(center, halfwidth, amp));
  return f;
}

AnalyticField make_decaying_swirl(const Point& center, const Point& halfwidth,
                                  double amplitude, double decay) {
  AnalyticField f;
  f.kind = "decaying-swirl";
  // Horizontal swirl: curl of (0, 0, chi) = (d2 chi, -d1 chi, 0).
  f.spatial = curl(bump_potential(center, halfwidth, {0, 0, amplitude}));
  f.time = Envelope::exp_decay(decay);
  return f;
}

}  // namespace nsfd
