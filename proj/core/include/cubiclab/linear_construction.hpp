#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubiclab/forms.hpp"

namespace cubiclab {

/// Z-basis of {x in Z^n : A_i(x) = 0 for all i}, rows in Hermite normal form.
struct IntegerKernelBasis {
  int n = 0;
  int rank = 0;                   // rank of the A-system
  std::vector<BigVec> vectors;    // n - rank vectors
  Integer index = 1;              // gcd of maximal minors; 1 iff the basis spans the full kernel lattice
};

/// Exact integer kernel by unimodular column reduction of the cleared A
/// matrix, followed by row Hermite normalisation of the resulting basis.
IntegerKernelBasis integer_kernel(const std::vector<std::vector<Rational>>& A, int n);

/// gcd of the maximal minors of the rows (0 when they are dependent).
Integer maximal_minor_gcd(const std::vector<BigVec>& rows, int n);

/// Reduced row echelon form (I | Lambda'') of A after moving pivot columns
/// first; diagnostic only.
struct EchelonForm {
  std::vector<int> pivots;
  std::vector<std::vector<Rational>> rows;
};
EchelonForm echelon_form(const std::vector<std::vector<Rational>>& A, int n);

/// lambda'_{i,j} = sum_k lambda_{i,k} z_{j,k}; rational rows stay exact.
struct ReducedSystem {
  int r = 0;
  int m = 0;
  std::vector<LinearForm> rows;
};
ReducedSystem reduce_linear_system(const LinearSystem& L, const IntegerKernelBasis& basis);

struct SolveResult {
  std::optional<IntVec> x;
  std::optional<IntVec> y;      // coordinates in the kernel basis
  IntegerKernelBasis basis;
  ReducedSystem reduced;
  std::int64_t shells_searched = 0;
  // Verification transcript (filled when x is present).
  std::string cubic_value;      // exact C(x)
  std::vector<double> linear_values;
};

/// Searches y with sup-norm shells 0, 1, ..., Y (lexicographic inside a
/// shell) for |L'(y) - tau| < eta and returns x = sum y_j z_j, which lies in
/// the common kernel of the A_i and hence in {C = 0}. Each candidate is
/// confirmed by exact evaluation of C(x) and by evaluating L(x) directly.
SolveResult solve_system(const CubicForm& C, const HDecomposition& D, const LinearSystem& L,
                         const std::vector<double>& tau, double eta, std::int64_t Y, double budget = 1e9);

}  // namespace cubiclab
