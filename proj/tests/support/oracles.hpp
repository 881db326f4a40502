#pragma once

// Test-only oracles, deliberately independent of the library's solver path:
// the dense concentration matrix is diagonalized with a hand-rolled cyclic
// Jacobi iteration rather than the tridiagonal route.

#include <cstddef>
#include <vector>

namespace oracle {

// Row-major A(N, W) with A_mn = sin(2 pi W (n-m)) / (pi (n-m)), A_nn = 2W.
std::vector<double> dense_concentration_matrix(std::size_t n, double bandwidth);

struct EigenSystem {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major: vectors[i + n*j] is component i of vector j
};

// Cyclic Jacobi rotations on a symmetric matrix (row-major input).
EigenSystem jacobi_eigensolve(std::vector<double> a, std::size_t n);

// Quadratic form v^T A v for a row-major matrix.
double quadratic_form(const std::vector<double>& a, std::size_t n, const double* v,
                      const double* w);

}  // namespace oracle
