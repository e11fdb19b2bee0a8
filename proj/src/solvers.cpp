#include "nsfd/solvers.hpp"

#include <cmath>

namespace nsfd {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

KrylovResult cg(const ApplyFn& apply, const std::vector<double>& b, std::vector<double>& x,
                double tol, int max_iter) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return {true, 0, 0.0};

  std::vector<double> r = b, p = b, ap(n);
  double rr = dot(r, r);
  KrylovResult res;
  for (int it = 0; it < max_iter; ++it) {
    apply(p, ap);
    double pap = dot(p, ap);
    if (pap <= 0) break;  // loss of positive definiteness: bail out to the residual check
    double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    double rr_new = dot(r, r);
    res.iterations = it + 1;
    if (std::sqrt(rr_new) <= tol * bnorm) {
      res.converged = true;
      break;
    }
    double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  // True residual, not the recurrence estimate.
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) ap[i] = b[i] - ap[i];
  res.relative_residual = norm2(ap) / bnorm;
  res.converged = res.relative_residual <= tol;
  return res;
}

KrylovResult bicgstab(const ApplyFn& apply, const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return {true, 0, 0.0};

  std::vector<double> r = b;
  std::vector<double> r0 = r, p = r, v(n), s(n), t(n);
  double rho = dot(r0, r);
  KrylovResult res;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    apply(p, v);
    double r0v = dot(r0, v);
    if (r0v == 0.0) break;
    double alpha = rho / r0v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= tol * bnorm) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
      res.converged = true;
      break;
    }
    apply(s, t);
    double tt = dot(t, t);
    if (tt == 0.0) break;
    double omega = dot(t, s) / tt;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i] + omega * s[i];
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    if (norm2(r) <= tol * bnorm) {
      res.converged = true;
      break;
    }
    double rho_new = dot(r0, r);
    if (rho_new == 0.0 || omega == 0.0) break;
    double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
  }
  apply(x, t);
  for (std::size_t i = 0; i < n; ++i) t[i] = b[i] - t[i];
  res.relative_residual = norm2(t) / bnorm;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace nsfd
