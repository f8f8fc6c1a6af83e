#include "permpoly/fq_linalg.hpp"

#include <stdexcept>

namespace permpoly {

FqMatrix identity_matrix(int k) {
  FqMatrix I(k, k);
  for (int i = 0; i < k; ++i) I.at(i, i) = 1;
  return I;
}

FqMatrix mat_add(const FieldCtx& F, const FqMatrix& A, const FqMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mat_add: shape mismatch");
  FqMatrix R(A.rows, A.cols);
  for (std::size_t i = 0; i < A.a.size(); ++i) R.a[i] = F.fadd(A.a[i], B.a[i]);
  return R;
}

FqMatrix mat_mul(const FieldCtx& F, const FqMatrix& A, const FqMatrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  FqMatrix R(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      fq_t v = A.at(i, k);
      if (!v) continue;
      for (int j = 0; j < B.cols; ++j)
        if (B.at(k, j)) R.at(i, j) = F.fadd(R.at(i, j), F.fmul(v, B.at(k, j)));
    }
  return R;
}

FqMatrix mat_scale(const FieldCtx& F, fq_t c, const FqMatrix& A) {
  FqMatrix R = A;
  for (auto& v : R.a) v = F.fmul(c, v);
  return R;
}

FqMatrix transpose(const FqMatrix& A) {
  FqMatrix R(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) R.at(j, i) = A.at(i, j);
  return R;
}

namespace {

// forward elimination; returns (rank, det_of_leading_part_with_sign)
// pivots: first nonzero entry scanning down the current column
int eliminate(const FieldCtx& F, FqMatrix& A, fq_t* det_out) {
  int r = 0;
  fq_t dsign = 1;
  for (int c = 0; c < A.cols && r < A.rows; ++c) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (A.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
      dsign = F.fneg(dsign);
    }
    fq_t inv = F.finv(A.at(r, c));
    for (int i = r + 1; i < A.rows; ++i) {
      fq_t v = A.at(i, c);
      if (!v) continue;
      fq_t f = F.fmul(v, inv);
      A.at(i, c) = 0;
      for (int j = c + 1; j < A.cols; ++j)
        if (A.at(r, j)) A.at(i, j) = F.fadd(A.at(i, j), F.fneg(F.fmul(f, A.at(r, j))));
    }
    ++r;
  }
  if (det_out) *det_out = dsign;
  return r;
}

}  // namespace

fq_t det(const FieldCtx& F, FqMatrix A) {
  if (A.rows != A.cols) throw std::invalid_argument("det: matrix not square");
  if (A.rows == 0) return 1;
  fq_t sign = 1;
  int r = eliminate(F, A, &sign);
  if (r < A.rows) return 0;
  fq_t d = sign;
  for (int i = 0; i < A.rows; ++i) d = F.fmul(d, A.at(i, i));
  return d;
}

int rank(const FieldCtx& F, FqMatrix A) { return eliminate(F, A, nullptr); }

FqMatrix rref(const FieldCtx& F, FqMatrix A, std::vector<int>* pivots) {
  int r = 0;
  for (int c = 0; c < A.cols && r < A.rows; ++c) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (A.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
    fq_t inv = F.finv(A.at(r, c));
    for (int j = c; j < A.cols; ++j) A.at(r, j) = F.fmul(inv, A.at(r, j));
    for (int i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      fq_t v = A.at(i, c);
      if (!v) continue;
      for (int j = c; j < A.cols; ++j)
        A.at(i, j) = F.fadd(A.at(i, j), F.fneg(F.fmul(v, A.at(r, j))));
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return A;
}

std::vector<std::vector<fq_t>> null_space(const FieldCtx& F, const FqMatrix& A) {
  std::vector<int> pivots;
  FqMatrix R = rref(F, A, &pivots);
  std::vector<bool> is_pivot(A.cols, false);
  for (int c : pivots) is_pivot[c] = true;

  std::vector<std::vector<fq_t>> basis;
  for (int c = 0; c < A.cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<fq_t> v(A.cols, 0);
    v[c] = 1;
    // back-substitute the pivot variables
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) {
      fq_t coeff = R.at(static_cast<int>(pr), c);
      if (coeff) v[pivots[pr]] = F.fneg(coeff);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<fq_t>> solve(const FieldCtx& F, const FqMatrix& A,
                                       const std::vector<fq_t>& b) {
  if (static_cast<int>(b.size()) != A.rows) throw std::invalid_argument("solve: rhs size mismatch");
  FqMatrix aug(A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[i];
  }
  std::vector<int> pivots;
  FqMatrix R = rref(F, aug, &pivots);
  for (int c : pivots)
    if (c == A.cols) return std::nullopt;  // pivot in the rhs column: inconsistent
  std::vector<fq_t> x(A.cols, 0);
  for (std::size_t pr = 0; pr < pivots.size(); ++pr)
    x[pivots[pr]] = R.at(static_cast<int>(pr), A.cols);
  return x;
}

std::vector<std::vector<fq_t>> span_basis(const FieldCtx& F,
                                          const std::vector<std::vector<fq_t>>& vecs,
                                          int dim) {
  FqMatrix M(static_cast<int>(vecs.size()), dim);
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    if (static_cast<int>(vecs[i].size()) != dim)
      throw std::invalid_argument("span_basis: vector length mismatch");
    for (int j = 0; j < dim; ++j) M.at(static_cast<int>(i), j) = vecs[i][j];
  }
  FqMatrix R = rref(F, M);
  std::vector<std::vector<fq_t>> basis;
  for (int i = 0; i < R.rows; ++i) {
    bool nonzero = false;
    for (int j = 0; j < dim; ++j)
      if (R.at(i, j)) {
        nonzero = true;
        break;
      }
    if (!nonzero) break;  // RREF sorts zero rows to the bottom
    std::vector<fq_t> row(dim);
    for (int j = 0; j < dim; ++j) row[j] = R.at(i, j);
    basis.push_back(std::move(row));
  }
  return basis;
}

}  // namespace permpoly
