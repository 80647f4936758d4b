#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "atlfuse/scalar.hpp"

namespace atlf {

/// Dense matrix over Scalar, row-major, column-vector convention.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;

  Mat() = default;
  Mat(int r, int c, const FieldConfig& cfg) : rows(r), cols(c), a(r * c, cfg.zero()) {}
  Scalar& at(int r, int c) { return a[(size_t)r * cols + c]; }
  const Scalar& at(int r, int c) const { return a[(size_t)r * cols + c]; }
  bool operator==(const Mat& o) const;
  bool is_zero() const;
};

Mat mat_identity(int n, const FieldConfig& cfg);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_scale(const Scalar& c, const Mat& x);
Mat mat_pow(const Mat& x, long long e, const FieldConfig& cfg);
std::vector<Scalar> mat_apply(const Mat& x, const std::vector<Scalar>& v);
Scalar mat_trace(const Mat& x, const FieldConfig& cfg);

int mat_rank(Mat x, const FieldConfig& cfg);
/// Basis of the right nullspace {v : Xv = 0}, as columns.
std::vector<std::vector<Scalar>> mat_nullspace(Mat x, const FieldConfig& cfg);
/// Inverse; empty optional when singular.
std::optional<Mat> mat_inverse(Mat x, const FieldConfig& cfg);
/// Solve X v = b; empty when inconsistent (least one solution returned).
std::optional<std::vector<Scalar>> mat_solve(Mat x, std::vector<Scalar> b, const FieldConfig& cfg);

/// Is the scalar matrix c*I? Returns c when so.
std::optional<Scalar> mat_as_scalar(const Mat& x, const FieldConfig& cfg);

/// Sparse row over integer-labelled coordinates, sorted by label.
using SparseRow = std::vector<std::pair<int64_t, Scalar>>;

void row_normalize(SparseRow& r);

/// Incremental Gaussian reducer over an ordered label space. Rows are
/// oriented so the largest label rewrites in terms of smaller ones; the
/// quotient basis is the set of labels never used as a pivot.
class SparseReducer {
 public:
  explicit SparseReducer(const FieldConfig& cfg) : cfg_(&cfg) {}

  /// Fully reduce a row against current pivots (largest label first).
  SparseRow reduce(SparseRow r) const;
  /// Reduce, then install the leading label as a new pivot.
  /// Returns false if the row reduced to zero (no new pivot).
  bool add_relation(SparseRow r);

  bool is_pivot(int64_t label) const { return pivots_.count(label) > 0; }
  size_t pivot_count() const { return pivots_.size(); }
  const std::map<int64_t, SparseRow>& pivots() const { return pivots_; }

 private:
  const FieldConfig* cfg_;
  // pivot label -> row with leading coefficient 1 on that label
  std::map<int64_t, SparseRow> pivots_;
};

}  // namespace atlf
