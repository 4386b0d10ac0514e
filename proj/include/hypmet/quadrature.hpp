#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "hypmet/errors.hpp"

namespace hypmet {

struct QuadratureResult {
  double value = 0;
  double error = 0;   // estimated absolute error
  int panels = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_panel(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[j] * fsum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * fsum;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive G7/K15 quadrature of f over [a, b].
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate drops below `tol` (absolute) or to the roundoff level of the
/// integrand. Panels narrower than the resolution of double arithmetic are
/// frozen. Throws NumericalError when `max_panels` is exhausted without
/// meeting the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double tol, int max_panels = 4000) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<detail::Panel> queue;
  std::vector<detail::Panel> frozen;
  auto first = detail::gauss_kronrod_panel(f, a, b);
  double active_error = first.error, frozen_error = 0;
  double magnitude = std::abs(first.value);
  queue.push(first);
  int panels = 1;
  const double eps = std::numeric_limits<double>::epsilon();
  const double min_width = 64 * eps * std::max(std::abs(a), std::abs(b));
  // Error estimates below a few hundred ulps of the summed panel magnitudes
  // are roundoff, not truncation.
  auto unresolved = [&] {
    return active_error + frozen_error > std::max(tol, 256 * eps * magnitude) && active_error > 1e-3 * tol;
  };
  while (!queue.empty() && unresolved()) {
    if (panels >= max_panels) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance " << tol
          << " within " << max_panels << " panels (error estimate " << active_error + frozen_error << ")";
      throw NumericalError(msg.str());
    }
    auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a < min_width || mid <= worst.a || mid >= worst.b) {
      active_error -= worst.error;
      frozen_error += worst.error;
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gauss_kronrod_panel(f, worst.a, mid);
    auto right = detail::gauss_kronrod_panel(f, mid, worst.b);
    active_error += left.error + right.error - worst.error;
    magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Deterministic summation order: sort panels by position.
  std::vector<detail::Panel> all = std::move(frozen);
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error;
  }
  out.panels = panels;
  return out;
}

/// Integrates f over [a, b] split at the sorted interior `knots`.
///
/// Each piece [t0, t1] is mapped by t = t0 + (t1 - t0)(3u² - 2u³). The map
/// has vanishing derivative at both ends, which turns square-root type
/// endpoint behaviour (angles leaving a degeneration locus) into an
/// analytic integrand in u.
template <class F>
QuadratureResult integrate_piecewise(F&& f, double a, double b, std::vector<double> knots, double tol,
                                     int max_panels = 4000) {
  knots.erase(std::remove_if(knots.begin(), knots.end(), [&](double t) { return !(t > a && t < b); }),
              knots.end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> pts;
  pts.push_back(a);
  pts.insert(pts.end(), knots.begin(), knots.end());
  pts.push_back(b);
  QuadratureResult out;
  const double piece_tol = tol / static_cast<double>(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double t0 = pts[i];
    const double width = pts[i + 1] - t0;
    auto g = [&](double u) {
      const double t = t0 + width * u * u * (3 - 2 * u);
      return f(t) * width * 6 * u * (1 - u);
    };
    auto piece = integrate_adaptive(g, 0.0, 1.0, piece_tol, max_panels);
    out.value += piece.value;
    out.error += piece.error;
    out.panels += piece.panels;
  }
  return out;
}

/// Locates sign changes of each component of `indicator(t)` on [a, b] by
/// sampling on `samples` cells followed by bisection to machine precision.
/// `indicator` returns a fixed-size container of doubles.
template <class G>
std::vector<double> locate_sign_changes(G&& indicator, double a, double b, int samples = 32) {
  std::vector<double> roots;
  auto prev = indicator(a);
  double t_prev = a;
  for (int s = 1; s <= samples; ++s) {
    const double t = a + (b - a) * s / samples;
    auto cur = indicator(t);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if ((prev[i] < 0) == (cur[i] < 0)) continue;
      double lo = t_prev, hi = t;
      const bool lo_neg = prev[i] < 0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((indicator(mid)[i] < 0) == lo_neg) lo = mid; else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = std::move(cur);
    t_prev = t;
  }
  return roots;
}

}  // namespace hypmet
