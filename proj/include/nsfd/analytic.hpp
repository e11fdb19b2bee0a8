#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsfd/geometry.hpp"

namespace nsfd {

// Dense-coefficient 1D polynomial, c[k] x^k.
class Poly {
 public:
  Poly() : c_{0.0} {}
  explicit Poly(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.push_back(0.0);
  }
  static Poly constant(double v) { return Poly({v}); }
  // (1 - ((x-center)/halfwidth)^2)^power, expanded in x.
  static Poly bump(double center, double halfwidth, int power);

  double operator()(double x) const {
    double acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }
  Poly derivative() const;
  Poly antiderivative() const;
  double integrate(double a, double b) const;
  Poly operator*(const Poly& o) const;
  Poly& scale(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }

 private:
  std::vector<double> c_;
};

// coef * p0(x0) p1(x1) p2(x2)
struct SepTerm {
  double coef = 0;
  std::array<Poly, 3> p;
};

// Scalar function: a sum of separable polynomial terms on a common closed
// support box, identically zero outside. Closed under differentiation, and
// integrals over axis-aligned boxes are exact (clip, then integrate the
// polynomial factors).
class SepScalar {
 public:
  Box support;
  std::vector<SepTerm> terms;

  double eval(const Point& x) const;
  // partial derivative of any mixed order
  double eval_partial(const std::array<int, 3>& order, const Point& x) const;
  SepScalar partial(int axis) const;
  double integrate_box(const Box& cell) const;
  // integral of this*other over all space (supports intersected)
  double integrate_product(const SepScalar& other) const;
  double l2_norm_sq() const { return integrate_product(*this); }
  void scale(double s) {
    for (SepTerm& t : terms) t.coef *= s;
  }
  bool in_support(const Point& x) const {
    for (int i = 0; i < 3; ++i)
      if (x[i] < support.lo[i] || x[i] > support.hi[i]) return false;
    return true;
  }
};

using SepVector = std::array<SepScalar, 3>;

// curl psi = (d2 psi3 - d3 psi2, d3 psi1 - d1 psi3, d1 psi2 - d2 psi1);
// divergence free by construction.
SepVector curl(const SepVector& psi);
SepScalar sep_difference(const SepScalar& a, const SepScalar& b);
double l2_norm_sq(const SepVector& f);

// Product bump potential: psi_k(x) = amp[k] * B1(x1) B2(x2) B3(x3) with
// Bi = (1 - ((x-c_i)/w_i)^2)^power; power >= 6 keeps the curl in C^4.
SepVector bump_potential(const Point& center, const Point& halfwidth,
                         const std::array<double, 3>& amp, int power = 6);

// Temporal factor g(t): constant 1, exponential decay, or a polynomial bump
// supported on [lo, hi].
class Envelope {
 public:
  enum class Kind { One, Exp, PolyBump };

  static Envelope one();
  static Envelope exp_decay(double lambda);
  static Envelope poly_bump(double center, double halfwidth, int power = 6);

  Kind kind() const { return kind_; }
  double value(double t) const;
  double derivative(double t) const;
  double integral(double a, double b) const;         // int_a^b g
  double square_integral(double a, double b) const;  // int_a^b g^2
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

 private:
  Kind kind_ = Kind::One;
  double lambda_ = 0;
  Poly poly_, dpoly_, poly_sq_;
  double lo_ = 0, hi_ = 0;
};

// Space-time vector field g(t) * F(x). Every named field the artifact ships
// takes this separable form; `constant` uses an oversized support box so cell
// averages clip to the exact value.
struct AnalyticField {
  std::string kind;  // zero | constant | solenoidal-bump | decaying-swirl
  SepVector spatial;
  Envelope time = Envelope::one();
  std::array<double, 3> constant_value{0, 0, 0};

  double eval_spatial(int comp, const Point& x) const { return spatial[comp].eval(x); }
  double eval(int comp, double t, const Point& x) const {
    return time.value(t) * spatial[comp].eval(x);
  }
  bool is_zero() const { return kind == "zero"; }

  // ||F||_{L^2(Omega)}^2 of the spatial part. The analytic shapes are
  // supported inside the domain; constants integrate |c|^2 |Omega|.
  double spatial_l2_sq(const DomainSpec& spec) const;
};

double domain_volume(const DomainSpec& spec);

AnalyticField make_zero_field();
AnalyticField make_constant_field(const std::array<double, 3>& value, const Box& cover);
AnalyticField make_solenoidal_bump(const Point& center, const Point& halfwidth,
                                   const std::array<double, 3>& potential_amp,
                                   double amplitude);
AnalyticField make_decaying_swirl(const Point& center, const Point& halfwidth,
                                  double amplitude, double decay);

}  // namespace nsfd
