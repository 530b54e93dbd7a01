#pragma once

#include <cmath>

#include "aqs/model.hpp"

namespace aqs {

namespace detail {

template <class F>
double simpson_rec(const F& f, double lo, double hi, double flo, double fmid,
                   double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double flm = f(0.5 * (lo + mid));
  const double frm = f(0.5 * (mid + hi));
  const double h12 = (hi - lo) / 12.0;
  const double left = h12 * (flo + 4.0 * flm + fmid);
  const double right = h12 * (fmid + 4.0 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with Richardson correction. rel_tol is applied
// against a coarse 16-panel magnitude estimate of the integral, so it acts as
// a relative target for integrands that do not change sign.
template <class F>
double adaptive_simpson(const F& f, double lo, double hi, double rel_tol,
                        int max_depth = 48) {
  if (!(lo < hi))
    throw validation_error("lo < hi", "integration interval is empty");
  if (!(rel_tol > 0.0))
    throw validation_error("rel_tol > 0", "tolerance must be positive");

  double coarse = 0.0;
  constexpr int kPanels = 16;
  const double h = (hi - lo) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double a = lo + i * h;
    coarse += (h / 6.0) *
              (std::abs(f(a)) + 4.0 * std::abs(f(a + 0.5 * h)) +
               std::abs(f(a + h)));
  }
  const double tol = rel_tol * std::max(coarse, 1e-300);

  const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return detail::simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

}  // namespace aqs
