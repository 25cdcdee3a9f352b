#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace stochord {

double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;
/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against erfc, accurate to about 1e-15 relative.
double normal_quantile(double p);

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

namespace detail {
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr double kGaussWeights[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                            0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gauss_kronrod_panel(F& f, double a, double b, double tol, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (depth <= 0 || std::abs(kronrod - gauss) <= tol) return kronrod;
  return gauss_kronrod_panel(f, a, center, 0.5 * tol, depth - 1) +
         gauss_kronrod_panel(f, center, b, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a,b]; panels are
/// bisected until |K15 - G7| <= their share of `tol`.
template <class F>
double adaptive_gauss_kronrod(F&& f, double a, double b, double tol, int max_depth = 40) {
  if (b <= a) return 0.0;
  return detail::gauss_kronrod_panel(f, a, b, tol, max_depth);
}

/// Smallest x in [lo,hi] (to within `tol`) with pred(x) true, for a predicate
/// monotone from false to true. pred(hi) is assumed true.
template <class Pred>
double bisect_first_true(Pred&& pred, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // unbiased (n-1) normalisation; 0 for a single value
};
MeanSd mean_sd(std::span<const double> values) noexcept;

}  // namespace stochord
