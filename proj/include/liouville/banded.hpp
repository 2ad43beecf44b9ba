#pragma once

// Direct solvers used by the eigensolver and the time steppers: Thomas
// elimination for tridiagonal systems, its cyclic variant via the
// Sherman-Morrison correction, and a small dense LU with partial pivoting
// for the 2D five-point operator (whose periodic wrap defeats banding).

#include <cstddef>
#include <vector>

namespace liouville {

// Tridiagonal solve: diag[i] u_i + sub[i] u_{i-1} + sup[i] u_{i+1} = rhs_i,
// with sub[0] and sup[n-1] ignored. Requires a well-conditioned
// (e.g. diagonally dominant) system; throws NumericalFailure on a zero pivot.
std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> sup,
                                      std::vector<double> rhs);

// Same system with periodic wrap: sub[0] couples u_0 to u_{n-1} and
// sup[n-1] couples u_{n-1} to u_0.
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs);

class DenseLU {
  public:
    // Row-major n x n matrix; factorization with partial pivoting.
    DenseLU(std::vector<double> matrix, std::size_t n);

    bool singular() const { return singular_; }
    std::vector<double> solve(std::vector<double> rhs) const;

  private:
    std::vector<double> lu_;
    std::vector<int> pivot_;
    std::size_t n_;
    bool singular_ = false;
};

}  // namespace liouville
