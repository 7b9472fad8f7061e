#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cppou::detail {

/// Visits cos(k * dt * p_i) and sin(k * dt * p_i) for k = 0..count-1 and all
/// points p_i, advancing by complex rotation and reseeding from exact sin/cos
/// every `kReseed` nodes to bound rounding drift.
template <class Visit>
void sweep_phases(std::span<const double> points, double dt, std::size_t count, Visit&& visit) {
  constexpr std::size_t kReseed = 64;
  const std::size_t m = points.size();
  std::vector<double> c(m), s(m), rc(m), rs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rc[i] = std::cos(dt * points[i]);
    rs[i] = std::sin(dt * points[i]);
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (k % kReseed == 0) {
      const double t = static_cast<double>(k) * dt;
      for (std::size_t i = 0; i < m; ++i) {
        c[i] = std::cos(t * points[i]);
        s[i] = std::sin(t * points[i]);
      }
    } else {
      double* cp = c.data();
      double* sp = s.data();
      const double* rcp = rc.data();
      const double* rsp = rs.data();
#pragma omp simd
      for (std::size_t i = 0; i < m; ++i) {
        const double cn = cp[i] * rcp[i] - sp[i] * rsp[i];
        const double sn = sp[i] * rcp[i] + cp[i] * rsp[i];
        cp[i] = cn;
        sp[i] = sn;
      }
    }
    visit(k, static_cast<const double*>(c.data()), static_cast<const double*>(s.data()));
  }
}

}  // namespace cppou::detail
