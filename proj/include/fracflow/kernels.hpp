#pragma once

#include <complex>

#include "fracflow/hurst.hpp"

namespace fracflow {

/// S(t) = K(alpha) |t|^(alpha-1). Even in t.
/// Throws UndefinedAtAlphaOne on the logarithmic branch and Singularity at
/// t = 0 when alpha < 1.
double kernel_S(double t, const HurstParams& p);

/// S_t(u) = S(u) - S(t - u); on the logarithmic branch pi^-1 ln|1 - t/u|.
/// Throws Singularity for u in {0, t} (t = 0 is allowed and yields 0).
double kernel_St(double t, double u, const HurstParams& p);

/// T(t) = |t|^(alpha-2) sign(t) / (2 Gamma(alpha-1) cos(pi alpha/2)), the
/// derivative of S away from 0. Odd in t. Throws Singularity at t = 0.
double kernel_T(double t, const HurstParams& p);

/// K(2alpha) (|t|^2H + |s|^2H - |t-s|^2H).
double covariance_closed(double t, double s, const HurstParams& p);

/// (1 - e^{i t xi}) / |xi|^alpha. Throws Singularity at xi = 0.
std::complex<double> st_fourier(double xi, double t, const HurstParams& p);

// Closed-form building blocks used by the quadrature, synthesis and
// inversion code. "Profile" means S on the regular branch and -ln|x|/pi on
// the logarithmic one; the additive constant lost at alpha = 1 cancels in
// every difference the library forms.
namespace kernel_detail {

double profile(double x, const HurstParams& p);

/// profile(x1) - profile(x0) without cancellation near alpha = 1.
/// Requires x0, x1 != 0 unless alpha > 1.
double profile_diff(double x1, double x0, const HurstParams& p);

/// Antiderivative of the profile vanishing at 0.
double profile_antiderivative(double x, const HurstParams& p);

/// Integral of S_t over [u0, u1] (closed form, any position of the cell).
double st_cell_integral(double t, double u0, double u1, const HurstParams& p);

/// Integral of w T(w) over [w0, w1], i.e. k_T [sign(w)|w|^alpha/alpha].
double t_first_moment(double w0, double w1, const HurstParams& p);

/// sign(x)|x|^a / a, the antiderivative of |x|^(a-1).
double signed_power_antiderivative(double x, double a);

}  // namespace kernel_detail

}  // namespace fracflow
