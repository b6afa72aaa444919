#include "diffgal/matrix.hpp"

#include <algorithm>

namespace diffgal {

std::vector<std::vector<Rational>> q_kernel(const std::vector<std::vector<Rational>>& rows,
                                            std::size_t cols) {
  MatrixQ m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DomainError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return kernel_basis(m);
}

namespace {

// Row-reduce `vs` at coordinate `col` over rows [from, end): afterwards only
// row `from` may be nonzero there. Returns false when all are zero.
bool euclid_column(std::vector<std::vector<Integer>>& vs, std::size_t from, std::size_t col) {
  for (;;) {
    std::size_t best = vs.size();
    for (std::size_t i = from; i < vs.size(); ++i) {
      if (sgn(vs[i][col]) == 0) continue;
      if (best == vs.size() || abs(vs[i][col]) < abs(vs[best][col])) best = i;
    }
    if (best == vs.size()) return false;
    std::swap(vs[from], vs[best]);
    bool done = true;
    for (std::size_t i = from + 1; i < vs.size(); ++i) {
      if (sgn(vs[i][col]) == 0) continue;
      Integer q = floor_div(vs[i][col], vs[from][col]);
      for (std::size_t j = 0; j < vs[i].size(); ++j) vs[i][j] -= q * vs[from][j];
      if (sgn(vs[i][col]) != 0) done = false;
    }
    if (done) return true;
  }
}

}  // namespace

std::vector<std::vector<Integer>> hermite_basis(std::vector<std::vector<Integer>> vs) {
  if (vs.empty()) return vs;
  std::size_t n = vs[0].size();
  std::size_t pr = 0;
  for (std::size_t col = n; col-- > 0 && pr < vs.size();) {
    if (!euclid_column(vs, pr, col)) continue;
    if (sgn(vs[pr][col]) < 0)
      for (auto& x : vs[pr]) x = -x;
    for (std::size_t i = 0; i < pr; ++i) {
      Integer q = floor_div(vs[i][col], vs[pr][col]);
      if (sgn(q) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) vs[i][j] -= q * vs[pr][j];
    }
    ++pr;
  }
  vs.resize(pr);
  std::reverse(vs.begin(), vs.end());
  return vs;
}

IntMatrix int_kernel(const IntMatrix& m) {
  std::size_t r = m.rows(), c = m.cols();
  std::vector<std::vector<Integer>> b(c, std::vector<Integer>(r + c, 0));
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < r; ++i) b[j][i] = m(i, j);
    b[j][r + j] = 1;
  }
  std::size_t pr = 0;
  for (std::size_t col = 0; col < r && pr < c; ++col)
    if (euclid_column(b, pr, col)) ++pr;
  std::vector<std::vector<Integer>> kernel;
  for (std::size_t i = pr; i < c; ++i) kernel.emplace_back(b[i].begin() + static_cast<long>(r), b[i].end());
  kernel = hermite_basis(std::move(kernel));
  IntMatrix out(c, kernel.size());
  for (std::size_t k = 0; k < kernel.size(); ++k)
    for (std::size_t i = 0; i < c; ++i) out(i, k) = kernel[k][i];
  return out;
}

std::string to_string(const MatrixRF& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + m(i, j).str();
    s += "]";
  }
  return s + "]";
}

}  // namespace diffgal
