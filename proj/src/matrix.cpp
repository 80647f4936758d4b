#include "atlfuse/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlf {

bool Mat::operator==(const Mat& o) const {
  if (rows != o.rows || cols != o.cols) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] != o.a[k]) return false;
  return true;
}

bool Mat::is_zero() const {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Mat mat_identity(int n, const FieldConfig& cfg) {
  Mat r(n, n, cfg);
  for (int i = 0; i < n; ++i) r.at(i, i) = cfg.one();
  return r;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  const FieldConfig& cfg = *x.a.at(0).cfg();
  Mat r(x.rows, y.cols, cfg);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const Scalar& xv = x.at(i, k);
      if (xv.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        const Scalar& yv = y.at(k, j);
        if (yv.is_zero()) continue;
        r.at(i, j) = r.at(i, j) + xv * yv;
      }
    }
  }
  return r;
}

Mat mat_add(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_add: shape mismatch");
  Mat r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] + y.a[k];
  return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_sub: shape mismatch");
  Mat r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] - y.a[k];
  return r;
}

Mat mat_scale(const Scalar& c, const Mat& x) {
  Mat r = x;
  for (auto& v : r.a) v = c * v;
  return r;
}

Mat mat_pow(const Mat& x, long long e, const FieldConfig& cfg) {
  if (x.rows != x.cols) throw std::invalid_argument("mat_pow: square only");
  if (e < 0) {
    auto inv = mat_inverse(x, cfg);
    if (!inv) throw std::invalid_argument("mat_pow: singular matrix");
    return mat_pow(*inv, -e, cfg);
  }
  Mat acc = mat_identity(x.rows, cfg), base = x;
  while (e) {
    if (e & 1) acc = mat_mul(acc, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return acc;
}

std::vector<Scalar> mat_apply(const Mat& x, const std::vector<Scalar>& v) {
  if ((int)v.size() != x.cols) throw std::invalid_argument("mat_apply: shape mismatch");
  const FieldConfig& cfg = *x.a.at(0).cfg();
  std::vector<Scalar> r(x.rows, cfg.zero());
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      if (!x.at(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + x.at(i, j) * v[j];
  return r;
}

Scalar mat_trace(const Mat& x, const FieldConfig& cfg) {
  Scalar t = cfg.zero();
  for (int i = 0; i < std::min(x.rows, x.cols); ++i) t = t + x.at(i, i);
  return t;
}

namespace {

// forward elimination; returns pivot columns. x becomes row echelon.
std::vector<int> echelon(Mat& x, const FieldConfig& cfg) {
  (void)cfg;
  std::vector<int> pivcols;
  int r = 0;
  for (int c = 0; c < x.cols && r < x.rows; ++c) {
    int pr = -1;
    for (int i = r; i < x.rows; ++i)
      if (!x.at(i, c).is_zero()) {
        pr = i;
        break;
      }
    if (pr == -1) continue;
    if (pr != r)
      for (int j = 0; j < x.cols; ++j) std::swap(x.at(pr, j), x.at(r, j));
    Scalar inv = x.at(r, c).inv();
    for (int j = c; j < x.cols; ++j) x.at(r, j) = x.at(r, j) * inv;
    for (int i = 0; i < x.rows; ++i) {
      if (i == r || x.at(i, c).is_zero()) continue;
      Scalar f = x.at(i, c);
      for (int j = c; j < x.cols; ++j) x.at(i, j) = x.at(i, j) - f * x.at(r, j);
    }
    pivcols.push_back(c);
    ++r;
  }
  return pivcols;
}

}  // namespace

int mat_rank(Mat x, const FieldConfig& cfg) { return (int)echelon(x, cfg).size(); }

std::vector<std::vector<Scalar>> mat_nullspace(Mat x, const FieldConfig& cfg) {
  std::vector<int> pivcols = echelon(x, cfg);
  std::vector<bool> ispiv(x.cols, false);
  for (int c : pivcols) ispiv[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int fc = 0; fc < x.cols; ++fc) {
    if (ispiv[fc]) continue;
    std::vector<Scalar> v(x.cols, cfg.zero());
    v[fc] = cfg.one();
    for (size_t r = 0; r < pivcols.size(); ++r) v[pivcols[r]] = -x.at((int)r, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Mat> mat_inverse(Mat x, const FieldConfig& cfg) {
  if (x.rows != x.cols) return std::nullopt;
  int n = x.rows;
  Mat aug(n, 2 * n, cfg);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = x.at(i, j);
    aug.at(i, n + i) = cfg.one();
  }
  auto piv = echelon(aug, cfg);
  if ((int)piv.size() != n || piv.back() != n - 1) {
    // pivots must be exactly the first n columns
    for (int k = 0; k < (int)piv.size(); ++k)
      if (piv[k] != k) return std::nullopt;
    if ((int)piv.size() != n) return std::nullopt;
  }
  Mat inv(n, n, cfg);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

std::optional<std::vector<Scalar>> mat_solve(Mat x, std::vector<Scalar> b, const FieldConfig& cfg) {
  if ((int)b.size() != x.rows) throw std::invalid_argument("mat_solve: shape mismatch");
  Mat aug(x.rows, x.cols + 1, cfg);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) aug.at(i, j) = x.at(i, j);
    aug.at(i, x.cols) = b[i];
  }
  auto piv = echelon(aug, cfg);
  if (!piv.empty() && piv.back() == x.cols) return std::nullopt;  // inconsistent
  std::vector<Scalar> v(x.cols, cfg.zero());
  for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = aug.at((int)r, x.cols);
  return v;
}

std::optional<Scalar> mat_as_scalar(const Mat& x, const FieldConfig& cfg) {
  if (x.rows != x.cols || x.rows == 0) return std::nullopt;
  Scalar c = x.at(0, 0);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (i == j && x.at(i, j) != c) return std::nullopt;
      if (i != j && !x.at(i, j).is_zero()) return std::nullopt;
    }
  (void)cfg;
  return c;
}

void row_normalize(SparseRow& r) {
  std::sort(r.begin(), r.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow out;
  for (auto& [l, c] : r) {
    if (!out.empty() && out.back().first == l)
      out.back().second = out.back().second + c;
    else
      out.emplace_back(l, c);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& p) { return p.second.is_zero(); }),
            out.end());
  r = std::move(out);
}

SparseRow SparseReducer::reduce(SparseRow r) const {
  row_normalize(r);
  while (true) {
    // largest label in r that is a pivot; substituting it strictly
    // decreases the label multiset, so this terminates
    size_t found = r.size();
    for (size_t k = r.size(); k-- > 0;) {
      if (pivots_.count(r[k].first)) {
        found = k;
        break;
      }
    }
    if (found == r.size()) return r;
    int64_t lead = r[found].first;
    Scalar f = r[found].second;
    r.erase(r.begin() + (ptrdiff_t)found);
    const SparseRow& prow = pivots_.at(lead);
    for (const auto& [l, c] : prow) {
      if (l == lead) continue;
      r.emplace_back(l, -(f * c));
    }
    row_normalize(r);
  }
}

bool SparseReducer::add_relation(SparseRow r) {
  r = reduce(std::move(r));
  if (r.empty()) return false;
  int64_t lead = r.back().first;
  Scalar inv = r.back().second.inv();
  for (auto& [l, c] : r) c = c * inv;
  pivots_.emplace(lead, std::move(r));
  return true;
}

}  // namespace atlf
