#include "nsfd/field.hpp"

#include <cmath>

#include "nsfd/errors.hpp"

namespace nsfd {

void require_same_domain(const GridDomain& a, const GridDomain& b, const char* what) {
  if (&a != &b) throw DomainMismatch(std::string(what) + ": fields live on different grids");
}

void require_axis(int axis) {
  if (axis < 0 || axis > 2) throw AxisOutOfRange("axis must be 0, 1 or 2");
}

ScalarField dplus(const ScalarField& f, int axis) {
  require_axis(axis);
  ScalarField out(f.domain_ptr());
  const double inv_h = 1.0 / f.dom().h();
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = (f.nb(i, axis, +1) - f[i]) * inv_h;
  return out;
}

ScalarField dminus(const ScalarField& f, int axis) {
  require_axis(axis);
  ScalarField out(f.domain_ptr());
  const double inv_h = 1.0 / f.dom().h();
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = (f[i] - f.nb(i, axis, -1)) * inv_h;
  return out;
}

ScalarField d2(const ScalarField& f, int axis) {
  require_axis(axis);
  ScalarField out(f.domain_ptr());
  const double inv_h2 = 1.0 / (f.dom().h() * f.dom().h());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = (f.nb(i, axis, +1) + f.nb(i, axis, -1) - 2.0 * f[i]) * inv_h2;
  return out;
}

VectorField dplus(const VectorField& f, int axis) {
  VectorField out(f.domain_ptr());
  for (int c = 0; c < 3; ++c) out.comp(c) = dplus(f.comp(c), axis);
  return out;
}

VectorField gradient(const ScalarField& f) {
  VectorField out(f.domain_ptr());
  for (int axis = 0; axis < 3; ++axis) out.comp(axis) = dplus(f, axis);
  return out;
}

ScalarField divergence(const VectorField& w) {
  ScalarField out(w.domain_ptr());
  const double inv_h = 1.0 / w.dom().h();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0;
    for (int axis = 0; axis < 3; ++axis)
      s += w.comp(axis)[i] - w.comp(axis).nb(i, axis, -1);
    out[i] = s * inv_h;
  }
  return out;
}

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
  double s = 0, c = 0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

template <class Term>
double reduce(std::size_t n, SumMode mode, Term term) {
  if (mode == SumMode::Compensated) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
    return acc.value();
  }
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += term(i);
  return acc;
}

}  // namespace

double inner(const ScalarField& u, const ScalarField& w, SumMode mode) {
  require_same_domain(u.dom(), w.dom(), "inner");
  const double h3 = u.dom().h() * u.dom().h() * u.dom().h();
  return h3 * reduce(u.size(), mode, [&](std::size_t i) { return u[i] * w[i]; });
}

double inner(const VectorField& u, const VectorField& w, SumMode mode) {
  require_same_domain(u.dom(), w.dom(), "inner");
  const double h3 = u.dom().h() * u.dom().h() * u.dom().h();
  return h3 * reduce(u.dom().size(), mode, [&](std::size_t i) {
    return u.comp(0)[i] * w.comp(0)[i] + u.comp(1)[i] * w.comp(1)[i] +
           u.comp(2)[i] * w.comp(2)[i];
  });
}

double norm(const ScalarField& u, SumMode mode) { return std::sqrt(inner(u, u, mode)); }
double norm(const VectorField& u, SumMode mode) { return std::sqrt(inner(u, u, mode)); }

double max_abs(const ScalarField& u) {
  double m = 0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i]));
  return m;
}

double max_abs(const VectorField& u) {
  double m = 0;
  for (int c = 0; c < 3; ++c) m = std::max(m, max_abs(u.comp(c)));
  return m;
}

double max_abs_boundary(const ScalarField& u) {
  double m = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u.dom().is_boundary(i)) m = std::max(m, std::abs(u[i]));
  return m;
}

double max_abs_boundary(const VectorField& u) {
  double m = 0;
  for (int c = 0; c < 3; ++c) m = std::max(m, max_abs_boundary(u.comp(c)));
  return m;
}

double max_abs_divergence_interior(const VectorField& w) {
  ScalarField d = divergence(w);
  double m = 0;
  for (std::size_t i : w.dom().interior_points()) m = std::max(m, std::abs(d[i]));
  return m;
}

double sbp_defect(const VectorField& w, const ScalarField& phi) {
  require_same_domain(w.dom(), phi.dom(), "sbp_defect");
  if (max_abs_boundary(w) != 0.0)
    throw BoundaryNotZero("sbp_defect: w does not vanish on the discrete boundary");
  if (max_abs_boundary(phi) != 0.0)
    throw BoundaryNotZero("sbp_defect: phi does not vanish on the discrete boundary");

  const GridDomain& g = w.dom();
  const double h3 = g.h() * g.h() * g.h();
  const double inv_h = 1.0 / g.h();
  double lhs = 0, rhs = 0;
  for (std::size_t i : g.interior_points()) {
    double dot = 0, div = 0;
    for (int axis = 0; axis < 3; ++axis) {
      dot += w.comp(axis)[i] * (phi.nb(i, axis, +1) - phi[i]) * inv_h;
      div += (w.comp(axis)[i] - w.comp(axis).nb(i, axis, -1)) * inv_h;
    }
    lhs += dot * h3;
    rhs += div * phi[i] * h3;
  }
  return lhs + rhs;
}

}  // namespace nsfd
