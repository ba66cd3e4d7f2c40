#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace secnoma::math {

inline constexpr double kDefaultAbsTol = 1e-8;

/// Thrown when an adaptive integrator exhausts its subdivision budget
/// before the error estimate drops below the requested tolerance.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// Gauss-Chebyshev rule of the first kind on [-1, 1]:
/// nodes cos((2k-1)pi/(2N)) for k = 1..N with the common weight pi/N.
struct ChebyshevScheme {
  int order = 0;
  std::vector<double> nodes;  // strictly decreasing
  double weight = 0.0;
};

double gamma_fn(double s);

/// Gamma(p, q) = int_q^inf t^(p-1) e^(-t) dt.
double upper_incomplete_gamma(double p, double q);

ChebyshevScheme chebyshev_scheme(int order);

using Integrand = std::function<double(double)>;

/// int_0^inf f(x) dx. The half line is mapped onto [0, 1) and seeded with
/// one panel per decade in x so narrow features near the origin are seen.
double integrate_semi_infinite(const Integrand& f, double abs_tol = kDefaultAbsTol);

/// int_a^b f(x) dx; `breakpoints` inside (a, b) seed the initial partition.
double integrate_finite(const Integrand& f, double a, double b, double abs_tol = kDefaultAbsTol,
                        std::span<const double> breakpoints = {});

/// Breakpoints a + (b - a) * 10^-k for k = 1..decades, ascending. Used for
/// integrands with a sharp feature pinned at the left end.
std::vector<double> geometric_breakpoints(double a, double b, int decades = 12);

/// Heaviside step with U(0) = 1.
constexpr int unit_step(double x) noexcept { return x >= 0.0 ? 1 : 0; }

}  // namespace secnoma::math
