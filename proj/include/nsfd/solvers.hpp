#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nsfd {

// y = A x for an n x n operator given matrix-free.
using ApplyFn = std::function<void(const std::vector<double>& x, std::vector<double>& y)>;

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0;  // ||b - Ax|| / ||b||
};

// Conjugate gradients for symmetric positive definite operators.
KrylovResult cg(const ApplyFn& apply, const std::vector<double>& b, std::vector<double>& x,
                double tol, int max_iter);

// BiCGStab for nonsymmetric operators.
KrylovResult bicgstab(const ApplyFn& apply, const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace nsfd
