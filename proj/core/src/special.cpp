#include "qpinem/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpinem/errors.hpp"

namespace qpinem {

double log_factorial(int n) {
  if (n < 0) throw ValidationError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double bessel_j(int order, double x) {
  int n = std::abs(order);
  double sign = 1.0;
  if (order < 0 && (n % 2)) sign = -sign;
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

std::vector<double> scaled_bessel_i_sequence(double x, int k_max) {
  if (x < 0.0 || !std::isfinite(x)) throw ValidationError("scaled_bessel_i_sequence: x must be finite and >= 0");
  if (k_max < 0) throw ValidationError("scaled_bessel_i_sequence: k_max < 0");
  std::vector<double> out(static_cast<size_t>(k_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  // Start well above both k_max and the turning point.
  int start = std::max(k_max, static_cast<int>(x)) + 30 + static_cast<int>(6.0 * std::sqrt(x + 1.0) + 20.0);
  start += start % 2;
  std::vector<double> tmp(static_cast<size_t>(start) + 2, 0.0);
  tmp[start + 1] = 0.0;
  tmp[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    tmp[k - 1] = (2.0 * k / x) * tmp[k] + tmp[k + 1];
    if (tmp[k - 1] > 1e250) {
      for (int j = k - 1; j <= start; ++j) tmp[j] *= 1e-250;
    }
  }
  double total = tmp[0];
  for (int k = 1; k <= start; ++k) total += 2.0 * tmp[k];
  for (int k = 0; k <= k_max; ++k) out[k] = tmp[k] / total;
  return out;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

SeriesResult hyp1f1_negative(double a, double b, double x, int max_terms) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0) throw ValidationError("hyp1f1_negative: need a, b > 0 and x >= 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  SeriesResult r;
  double term = 1.0;
  double sum = 1.0;
  double max_abs = 1.0;
  int k = 0;
  for (; k < max_terms; ++k) {
    double next = term * (a + k) / (b + k) * (-x) / (k + 1.0);
    if (!std::isfinite(next)) {
      throw NumericalError("hyp1f1_negative: term overflow");
    }
    // Terms decrease monotonically once k > a*x/b roughly; stop when tiny.
    bool decreasing = std::abs(next) < std::abs(term);
    term = next;
    sum += term;
    max_abs = std::max(max_abs, std::abs(term));
    if (decreasing && std::abs(term) <= eps * std::abs(sum) * 0.5) {
      ++k;
      break;
    }
  }
  r.value = sum;
  r.terms = k + 1;
  r.error_bound = std::abs(term) + (r.terms + 1.0) * eps * max_abs;
  if (k >= max_terms) r.error_bound = std::numeric_limits<double>::infinity();
  return r;
}

std::vector<double> ladder_amplitudes(int q, int m_max, double x) {
  if (q < 0 || m_max < 0) throw ValidationError("ladder_amplitudes: negative index");
  if (x < 0.0 || !std::isfinite(x)) throw ValidationError("ladder_amplitudes: x must be finite and >= 0");
  std::vector<double> out(static_cast<size_t>(m_max) + 1, 0.0);
  if (x == 0.0) {
    if (q == 0) std::fill(out.begin(), out.end(), 1.0);
    return out;
  }
  double log_start = 0.5 * q * std::log(x) - 0.5 * std::lgamma(q + 1.0) - 0.5 * x;
  // Extended precision: for small x and large m the recurrence oscillates slowly and
  // rounding accumulates roughly like m / sqrt(x / m).
  double log_scale = log_start;
  long double prev = 0.0L;
  long double cur = 1.0L;
  const long double xl = x;
  out[0] = std::exp(log_start);
  for (int k = 0; k < m_max; ++k) {
    long double kk = k;
    long double next = ((2.0L * kk + 1.0L + q - xl) * cur - std::sqrt(kk * (kk + q)) * prev) /
                       std::sqrt((kk + 1.0L) * (kk + 1.0L + q));
    prev = cur;
    cur = next;
    long double mag = std::fabs(cur);
    if (mag > 1e100L || (mag < 1e-100L && std::fabs(prev) < 1e-100L && mag > 0.0L)) {
      long double s = std::log(mag);
      log_scale += static_cast<double>(s);
      long double f = std::exp(-s);
      cur *= f;
      prev *= f;
    }
    out[k + 1] = log_scale > -745.0 ? static_cast<double>(cur * std::exp(static_cast<long double>(log_scale))) : 0.0;
  }
  return out;
}

std::vector<double> log_laguerre_negative(int d, int n_max, double y) {
  if (d < 0 || n_max < 0 || y < 0.0) throw ValidationError("log_laguerre_negative: bad arguments");
  std::vector<double> out(static_cast<size_t>(n_max) + 1, 0.0);
  if (n_max == 0) return out;
  // ratio r_k = L_k / L_{k-1}
  double r = 1.0 + d + y;
  out[1] = std::log(r);
  for (int k = 1; k < n_max; ++k) {
    double kk = k;
    r = ((2.0 * kk + 1.0 + d + y) - (kk + d) / r) / (kk + 1.0);
    out[k + 1] = out[k] + std::log(r);
  }
  return out;
}

}  // namespace qpinem

namespace qpinem {

std::vector<double> bessel_j_sequence(double x, int k_max) {
  if (x < 0.0 || k_max < 0) throw ValidationError("bessel_j_sequence: need x >= 0 and k_max >= 0");
  std::vector<double> out(static_cast<size_t>(k_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  double hi = std::cyl_bessel_j(k_max + 1.0, x);
  double cur = std::cyl_bessel_j(static_cast<double>(k_max), x);
  if (std::abs(cur) < 1e-290 || std::abs(hi) < 1e-290) {
    for (int k = 0; k <= k_max; ++k) out[k] = std::cyl_bessel_j(static_cast<double>(k), x);
    return out;
  }
  out[k_max] = cur;
  double next = hi;
  for (int k = k_max; k >= 1; --k) {
    double prev = (2.0 * k / x) * cur - next;
    out[k - 1] = prev;
    next = cur;
    cur = prev;
  }
  return out;
}

}  // namespace qpinem
