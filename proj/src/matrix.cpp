#include "resamp/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace resamp {

SparseMatrix SparseMatrix::zero(int n) {
  SparseMatrix m;
  m.n = n;
  m.rows.resize(n);
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m = zero(n);
  for (int i = 0; i < n; ++i) m.rows[i].emplace_back(i, Rat(1));
  return m;
}

Rat SparseMatrix::at(int r, int c) const {
  const auto& row = rows[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return 0;
}

void SparseMatrix::set(int r, int c, const Rat& v) {
  auto& row = rows[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    if (v == 0) {
      row.erase(it);
    } else {
      it->second = v;
    }
  } else if (v != 0) {
    row.insert(it, {c, v});
  }
}

void SparseMatrix::normalize() {
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Rat>> out;
    for (auto& e : row) {
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += e.second;
      } else {
        out.push_back(e);
      }
    }
    std::erase_if(out, [](const auto& e) { return e.second == 0; });
    row = std::move(out);
  }
}

Rat SparseMatrix::row_sum(int r) const {
  Rat total = 0;
  for (const auto& [c, v] : rows[r]) total += v;
  return total;
}

int SparseMatrix::nnz() const {
  int total = 0;
  for (const auto& row : rows) total += static_cast<int>(row.size());
  return total;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (n != o.n) return false;
  for (int r = 0; r < n; ++r) {
    if (rows[r].size() != o.rows[r].size()) return false;
    for (size_t k = 0; k < rows[r].size(); ++k) {
      if (rows[r][k].first != o.rows[r][k].first) return false;
      if (rows[r][k].second != o.rows[r][k].second) return false;
    }
  }
  return true;
}

SparseMatrix mat_mul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n != b.n) throw std::invalid_argument("matrix size mismatch");
  SparseMatrix out = SparseMatrix::zero(a.n);
  std::vector<Rat> acc(a.n, Rat(0));
  std::vector<char> seen(a.n, 0);
  std::vector<int> touched;
  for (int r = 0; r < a.n; ++r) {
    if (a.rows[r].empty()) continue;
    touched.clear();
    for (const auto& [k, va] : a.rows[r]) {
      for (const auto& [c, vb] : b.rows[k]) {
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        acc[c] += va * vb;
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& row = out.rows[r];
    for (int c : touched) {
      if (acc[c] != 0) row.emplace_back(c, acc[c]);
      acc[c] = 0;
      seen[c] = 0;
    }
  }
  return out;
}

ExactVec mat_apply(const SparseMatrix& a, const ExactVec& v) {
  ExactVec out(a.n, Rat(0));
  for (int r = 0; r < a.n; ++r) {
    Rat total = 0;
    for (const auto& [c, w] : a.rows[r]) total += w * v[c];
    out[r] = total;
  }
  return out;
}

ExactVec mat_apply_left(const ExactVec& v, const SparseMatrix& a) {
  ExactVec out(a.n, Rat(0));
  for (int r = 0; r < a.n; ++r) {
    if (v[r] == 0) continue;
    for (const auto& [c, w] : a.rows[r]) out[c] += v[r] * w;
  }
  return out;
}

SparseMatrix mat_scale(const SparseMatrix& a, const Rat& c) {
  SparseMatrix out = a;
  for (auto& row : out.rows)
    for (auto& e : row) e.second *= c;
  if (c == 0) out.normalize();
  return out;
}

int max_column_nnz(const SparseMatrix& a) {
  std::vector<int> count(a.n, 0);
  for (const auto& row : a.rows)
    for (const auto& [c, v] : row) ++count[c];
  int best = 0;
  for (int c : count) best = std::max(best, c);
  return best;
}

}  // namespace resamp
