#pragma once

// Dense brute-force reference implementations. They share no code with the
// library beyond the Graph accessors used to read the matrix.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "graphadapt/graph.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Mat dense(const graphadapt::Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  Mat a(n, Vec(n, 0.0));
  for (const auto& e : g.edges()) {
    a[e.u][e.v] = e.weight;
    a[e.v][e.u] = e.weight;
  }
  return a;
}

inline Mat identity(std::size_t n) {
  Mat a(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat power(const Mat& a, int k) {
  Mat r = identity(a.size());
  for (int i = 0; i < k; ++i) r = matmul(r, a);
  return r;
}

inline Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double inf_norm(const Mat& a) {
  double best = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline Vec symmetric_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

inline double spectral_radius(const Mat& a) {
  double r = 0.0;
  for (double e : symmetric_eigenvalues(a)) r = std::max(r, std::abs(e));
  return r;
}

/// Hop distances by BFS on the dense pattern; -1 when unreachable.
inline std::vector<int> hops_from(const Mat& a, int src) {
  std::vector<int> d(a.size(), -1);
  std::deque<int> q{src};
  d[src] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (a[u][v] != 0.0 && d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(static_cast<int>(v));
      }
    }
  }
  return d;
}

inline std::vector<int> neighbors(const Mat& a, int i) {
  std::vector<int> out;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (static_cast<int>(j) != i && a[i][j] != 0.0) out.push_back(static_cast<int>(j));
  return out;
}

inline double max_of(Vec v) {
  if (v.empty()) return 0.0;
  return *std::max_element(v.begin(), v.end());
}

inline double median_of(Vec v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : (v[m / 2 - 1] + v[m / 2]) / 2.0;
}

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// y = sum_k h_k A^k x with explicit matrix powers.
inline Vec convolution(const Mat& a, const Vec& x, const Vec& h) {
  Vec y(x.size(), 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Vec p = matvec(power(a, static_cast<int>(k)), x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h[k] * p[i];
  }
  return y;
}

/// kind: 0 max, 1 median, 2 kernel. Graph-adaptive activation; S^k z by repeated
/// dense products so selected values are bitwise comparable.
inline Vec graph_adaptive(const Mat& a, const Vec& z, double beta, const Vec& h, int kind,
                          double gamma) {
  const std::size_t n = z.size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = beta * relu(z[i]);
  Vec s = z;
  for (std::size_t k = 1; k <= h.size(); ++k) {
    s = matvec(a, s);
    for (std::size_t i = 0; i < n; ++i) {
      const auto nb = neighbors(a, static_cast<int>(i));
      Vec vals;
      for (int j : nb) vals.push_back(s[j]);
      double term = 0.0;
      if (kind == 0) term = max_of(vals);
      if (kind == 1) term = median_of(vals);
      if (kind == 2) {
        double sum = 0.0;
        for (double v : vals) sum += (s[i] - v) * (s[i] - v);
        term = std::exp(-sum / (2.0 * gamma * gamma));
      }
      out[i] += h[k - 1] * term;
    }
  }
  return out;
}

/// Localized baseline over <= k hop balls of raw values. kind: 0 max, 1 median.
inline Vec localized(const Mat& a, const Vec& z, double beta, const Vec& h, int kind) {
  const std::size_t n = z.size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = beta * relu(z[i]);
    const auto d = hops_from(a, static_cast<int>(i));
    for (std::size_t k = 1; k <= h.size(); ++k) {
      Vec vals;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && d[j] >= 1 && d[j] <= static_cast<int>(k)) vals.push_back(z[j]);
      out[i] += h[k - 1] * (kind == 0 ? max_of(vals) : median_of(vals));
    }
  }
  return out;
}

}  // namespace oracle
