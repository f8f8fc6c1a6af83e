#pragma once

// Exact dense linear algebra over the inner field F_q.  Everything is
// Gaussian elimination with a deterministic pivot rule (first nonzero entry
// scanning down the column), so determinants, ranks and null space bases come
// out identical on every run.

#include <optional>
#include <vector>

#include "permpoly/field_tower.hpp"

namespace permpoly {

struct FqMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<fq_t> a;  // row-major

  FqMatrix() = default;
  FqMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

  fq_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  fq_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  bool operator==(const FqMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

FqMatrix identity_matrix(int k);
FqMatrix mat_add(const FieldCtx& F, const FqMatrix& A, const FqMatrix& B);
FqMatrix mat_mul(const FieldCtx& F, const FqMatrix& A, const FqMatrix& B);
FqMatrix mat_scale(const FieldCtx& F, fq_t c, const FqMatrix& A);
FqMatrix transpose(const FqMatrix& A);

fq_t det(const FieldCtx& F, FqMatrix A);   // square only
int rank(const FieldCtx& F, FqMatrix A);

// Reduced row echelon form; pivot column indices appended to *pivots if given.
FqMatrix rref(const FieldCtx& F, FqMatrix A, std::vector<int>* pivots = nullptr);

// Basis of {x : Ax = 0}.  Free variables are set to unit vectors in ascending
// column order, so the basis is canonical for a given matrix.
std::vector<std::vector<fq_t>> null_space(const FieldCtx& F, const FqMatrix& A);

// One particular solution of Ax = b, or nullopt when the system is
// inconsistent.  Free variables are set to zero.
std::optional<std::vector<fq_t>> solve(const FieldCtx& F, const FqMatrix& A,
                                       const std::vector<fq_t>& b);

// Canonical basis (RREF rows) of the span of the given coordinate vectors.
std::vector<std::vector<fq_t>> span_basis(const FieldCtx& F,
                                          const std::vector<std::vector<fq_t>>& vecs,
                                          int dim);

}  // namespace permpoly
