#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmesim {

// Raised when adaptive subdivision hits its panel budget before reaching the
// requested tolerance; carries the tolerance that was actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double value, double achieved_abs_error)
      : std::runtime_error("quadrature did not converge (achieved abs error " +
                           std::to_string(achieved_abs_error) + ")"),
        value_(value),
        achieved_abs_error_(achieved_abs_error) {}
  double value() const { return value_; }
  double achieved_abs_error() const { return achieved_abs_error_; }

 private:
  double value_;
  double achieved_abs_error_;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_panels = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kGkNode[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double kGaussW[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double kKronrodW[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& error) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double g7 = kGaussW[0] * f0;
  double k15 = kKronrodW[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGkNode[i];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kGaussW[i] * fi;
    k15 += kKronrodW[i] * fi;
  }
  value = k15 * half;
  error = std::fabs((k15 - g7) * half);
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]; splits the
// worst-error panel until sum of panel errors meets the tolerance.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b,
                              const QuadOptions& opt = {}) {
  if (!(a < b)) return {0.0, 0.0, 0};
  std::priority_queue<detail::Panel> queue;
  detail::Panel p{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, p.value, p.error);
  double total = p.value;
  double total_err = p.error;
  queue.push(p);
  int panels = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
    if (panels >= opt.max_panels || queue.empty())
      throw QuadratureError(total, total_err);
    detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // interval no longer splittable in double precision; accept its estimate
      if (queue.empty()) break;
      continue;
    }
    detail::Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
    if (!std::isfinite(total))
      throw QuadratureError(total, total_err);
  }
  return {total, total_err, panels};
}

}  // namespace dmesim
