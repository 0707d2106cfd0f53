// Copyright 2026 The cfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFL_BD_RATE_H_
#define CFL_BD_RATE_H_

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfl/error.h"

namespace cfl {

struct RdPoint {
  double rate = 0;  // bits
  double quality = 0;
};

// Points sorted by rate; rate strictly increasing, quality non-decreasing.
class RdCurve {
 public:
  RdCurve() = default;
  explicit RdCurve(std::vector<RdPoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) Fail(ErrorCode::kInvalidCurve, "curve needs >= 2 points");
    for (const auto& p : points_) {
      if (!(p.rate > 0) || !std::isfinite(p.rate) || !std::isfinite(p.quality)) {
        Fail(ErrorCode::kInvalidCurve, "rates must be positive and finite");
      }
    }
    std::sort(points_.begin(), points_.end(),
              [](const RdPoint& a, const RdPoint& b) { return a.rate < b.rate; });
    for (size_t i = 1; i < points_.size(); ++i) {
      if (points_[i].rate == points_[i - 1].rate) {
        Fail(ErrorCode::kInvalidCurve, "duplicate rate");
      }
      if (points_[i].quality < points_[i - 1].quality) {
        Fail(ErrorCode::kInvalidCurve, "quality decreases with rate");
      }
    }
  }

  const std::vector<RdPoint>& points() const { return points_; }
  size_t size() const { return points_.size(); }

 private:
  std::vector<RdPoint> points_;
};

enum class BdMethod { kPchip, kCubicFit };

namespace internal {

// Monotone piecewise-cubic Hermite slopes (Fritsch-Carlson, three-point
// one-sided ends).
inline std::vector<double> PchipSlopes(const std::vector<double>& x,
                                       const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> h(n - 1), m(n - 1), d(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    m[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = m[0];
    return d;
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (m[k - 1] == 0 || m[k] == 0 || (m[k - 1] > 0) != (m[k] > 0)) continue;
    const double w1 = 2 * h[k] + h[k - 1];
    const double w2 = h[k] + 2 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
  }
  auto edge = [](double h0, double h1, double m0, double m1) {
    double dd = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    auto sgn = [](double v) { return (v > 0) - (v < 0); };
    if (sgn(dd) != sgn(m0)) {
      dd = 0;
    } else if (sgn(m0) != sgn(m1) && std::abs(dd) > 3 * std::abs(m0)) {
      dd = 3 * m0;
    }
    return dd;
  };
  d[0] = edge(h[0], h[1], m[0], m[1]);
  d[n - 1] = edge(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
  return d;
}

// Integral over [lo, hi] (inside the knot range) of the PCHIP interpolant.
inline double PchipIntegral(const std::vector<double>& x, const std::vector<double>& y,
                            double lo, double hi) {
  const std::vector<double> d = PchipSlopes(x, y);
  double total = 0;
  for (size_t k = 0; k + 1 < x.size(); ++k) {
    const double a = std::max(lo, x[k]);
    const double b = std::min(hi, x[k + 1]);
    if (b <= a) continue;
    const double h = x[k + 1] - x[k];
    const double m = (y[k + 1] - y[k]) / h;
    const double c0 = y[k], c1 = d[k];
    const double c2 = (3 * m - 2 * d[k] - d[k + 1]) / h;
    const double c3 = (d[k] + d[k + 1] - 2 * m) / (h * h);
    auto anti = [&](double t) {
      return t * (c0 + t * (c1 / 2 + t * (c2 / 3 + t * c3 / 4)));
    };
    total += anti(b - x[k]) - anti(a - x[k]);
  }
  return total;
}

// Least-squares polynomial of degree min(3, n - 1), returned low order first,
// in the variable (x - shift).
inline std::vector<double> PolyFit(const std::vector<double>& x, const std::vector<double>& y,
                                   double shift) {
  const int deg = static_cast<int>(std::min<size_t>(3, x.size() - 1));
  const int n = deg + 1;
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1, 0));
  for (size_t i = 0; i < x.size(); ++i) {
    std::vector<long double> pw(2 * n, 1);
    for (int k = 1; k < 2 * n; ++k) pw[k] = pw[k - 1] * (x[i] - shift);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r][c] += pw[r + c];
      a[r][n] += pw[r] * y[i];
    }
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0) Fail(ErrorCode::kInvalidCurve, "singular polynomial fit");
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> coef(n);
  for (int r = 0; r < n; ++r) coef[r] = static_cast<double>(a[r][n] / a[r][r]);
  return coef;
}

inline double PolyIntegral(const std::vector<double>& coef, double shift, double lo,
                           double hi) {
  auto anti = [&](double t) {
    double s = 0;
    for (size_t k = coef.size(); k-- > 0;) s = s * t + coef[k] / (k + 1);
    return s * t;
  };
  return anti(hi - shift) - anti(lo - shift);
}

}  // namespace internal

// Average rate difference (percent) of `test` against `baseline` at equal
// quality; negative means `test` needs fewer bits.
inline double BdRate(const RdCurve& baseline, const RdCurve& test,
                     BdMethod method = BdMethod::kPchip) {
  auto axes = [](const RdCurve& c, std::vector<double>& q, std::vector<double>& lr) {
    for (const auto& p : c.points()) {
      if (!q.empty() && p.quality <= q.back()) {
        Fail(ErrorCode::kInvalidCurve, "BD-rate needs strictly increasing quality");
      }
      q.push_back(p.quality);
      lr.push_back(std::log(p.rate));
    }
  };
  std::vector<double> q1, r1, q2, r2;
  axes(baseline, q1, r1);
  axes(test, q2, r2);
  const double lo = std::max(q1.front(), q2.front());
  const double hi = std::min(q1.back(), q2.back());
  if (!(hi > lo)) Fail(ErrorCode::kNoOverlap, "quality ranges do not overlap");
  double i1, i2;
  if (method == BdMethod::kPchip) {
    i1 = internal::PchipIntegral(q1, r1, lo, hi);
    i2 = internal::PchipIntegral(q2, r2, lo, hi);
  } else {
    const double s1 = q1[q1.size() / 2], s2 = q2[q2.size() / 2];
    i1 = internal::PolyIntegral(internal::PolyFit(q1, r1, s1), s1, lo, hi);
    i2 = internal::PolyIntegral(internal::PolyFit(q2, r2, s2), s2, lo, hi);
  }
  return 100.0 * (std::exp((i2 - i1) / (hi - lo)) - 1.0);
}

}  // namespace cfl

#endif  // CFL_BD_RATE_H_
