#pragma once

#include <vector>

namespace fraclab {

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by implicit-shift QL sweeps with eigenvector accumulation.
// Input is row-major n*n and is destroyed. Eigenvalues come back ascending;
// eigenvector k occupies vectors[k*n .. k*n+n-1] with unit Euclidean norm.
// Throws NumericalError when a QL eigenvalue fails to converge in 50 sweeps.
void symmetric_eigensolve(std::vector<double>& a, int n,
                          std::vector<double>& values,
                          std::vector<double>& vectors);

} // namespace fraclab
