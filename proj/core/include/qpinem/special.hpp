#pragma once

#include <vector>

namespace qpinem {

double log_factorial(int n);

// Bessel J_n(x) for any integer order and real x.
double bessel_j(int order, double x);

// e^{-x} I_k(x) for k = 0..k_max, x >= 0. Backward recurrence normalised by
// sum_k I_k(x) = e^x, so no overflow for large x.
std::vector<double> scaled_bessel_i_sequence(double x, int k_max);

// sin(x)/x with the removable singularity filled in.
double sinc(double x);

struct SeriesResult {
  double value = 0.0;
  double error_bound = 0.0;
  int terms = 0;
};

// 1F1(a; b; -x) for a, b > 0, x >= 0 by direct summation. The bound covers
// the first omitted term plus rounding from cancellation between terms.
SeriesResult hyp1f1_negative(double a, double b, double x, int max_terms = 100000);

// F_m = sqrt(x)^q e^{-x/2} sqrt(m!/(m+q)!) L_m^{(q)}(x) for m = 0..m_max.
// These are the matrix elements <m+q|D|m> of a unit displacement with
// |amplitude|^2 = x, up to phase. Forward three-term recurrence with a
// running scale so neither start value nor intermediate terms underflow.
std::vector<double> ladder_amplitudes(int q, int m_max, double x);

// log L_n^{(d)}(-y) for n = 0..n_max, y >= 0 (all terms positive).
std::vector<double> log_laguerre_negative(int d, int n_max, double y);

}  // namespace qpinem

namespace qpinem {

// J_0(x)..J_{k_max}(x), x >= 0, by downward recurrence from two seeds.
std::vector<double> bessel_j_sequence(double x, int k_max);

}  // namespace qpinem
