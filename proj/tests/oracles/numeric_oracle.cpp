#include <cmath>
#include <stdexcept>

#include "oracles.hpp"

namespace qds::test {

namespace {

long double ln_half_xi(double xi) {
  return std::log(static_cast<long double>(xi) / 2.0L);
}

double residual(long double lhs, long double target) {
  return static_cast<double>(std::fabs(lhs - target) / std::fabs(target));
}

}  // namespace

double chernoff_residual_expected_lower(double delta, double scale,
                                        double xi) {
  long double d = delta;
  long double f = d / (1.0L + d) - std::log1p(d);
  return residual(scale * f, ln_half_xi(xi));
}

double chernoff_residual_expected_upper(double delta, double scale,
                                        double xi) {
  long double d = delta;
  long double f = -d / (1.0L - d) - std::log1p(-d);
  return residual(scale * f, ln_half_xi(xi));
}

double chernoff_residual_real_upper(double delta, double scale, double xi) {
  long double d = delta;
  long double f = d - (1.0L + d) * std::log1p(d);
  return residual(scale * f, ln_half_xi(xi));
}

double chernoff_residual_real_lower(double delta, double scale, double xi) {
  long double d = delta;
  long double f = -d - (1.0L - d) * std::log1p(-d);
  return residual(scale * f, ln_half_xi(xi));
}

long double bessel_i0_integral(long double x, int panels) {
  if (panels < 1) throw std::invalid_argument("bessel_i0_integral: panels");
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double h = pi / panels;
  // Trapezoid rule; the integrand extends to an even 2*pi-periodic
  // function, so the rule converges geometrically.
  long double sum = 0.5L * (std::exp(x) + std::exp(-x));
  for (int k = 1; k < panels; ++k) {
    sum += std::exp(x * std::cos(k * h));
  }
  return sum * h / pi;
}

PhaseIntegrals midpoint_tx_sx(const ChannelParams& ch, const SnsParams& p,
                              int panels) {
  if (panels < 1) throw std::invalid_argument("midpoint_tx_sx: panels");
  const long double eta = ch.efficiency();
  const long double s = 1.0L - ch.p_d;
  const long double twomu = 2.0L * eta * p.mu1;
  const long double delta = p.Delta;
  const long double h = delta / panels;
  long double cos_sum = 0.0L;
  long double sin_sum = 0.0L;
  for (int k = 0; k < panels; ++k) {
    const long double t = -delta / 2.0L + (k + 0.5L) * h;
    const long double c = std::cos(t / 2.0L);
    const long double sn = std::sin(t / 2.0L);
    cos_sum += std::exp(-twomu * c * c);
    sin_sum += std::exp(-twomu * sn * sn);
  }
  const long double floor_term = s * s * std::exp(-twomu);
  PhaseIntegrals out;
  out.t_x = static_cast<double>(s * cos_sum * h / delta - floor_term);
  out.s_x = static_cast<double>(s * sin_sum * h / delta - floor_term +
                                (s * cos_sum * h / delta - floor_term));
  return out;
}

}  // namespace qds::test
