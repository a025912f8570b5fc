#include "fracflow/kernels.hpp"

#include <cmath>
#include <numbers>

#include "fracflow/error.hpp"

namespace fracflow {

HurstParams::HurstParams(double hurst) : hurst_(hurst), alpha_(hurst + 0.5) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Hurst exponent must lie in (0, 1)");
  }
  using std::numbers::pi;
  const double c = std::cos(pi * alpha_ / 2.0);
  if (std::abs(alpha_ - 1.0) >= kLogBranchWidth) {
    k_alpha_ = 1.0 / (2.0 * std::tgamma(alpha_) * c);
    k_T_ = 1.0 / (2.0 * std::tgamma(alpha_ - 1.0) * c);
  } else {
    k_T_ = -1.0 / pi;
  }
  k_2alpha_ = 1.0 / (2.0 * std::tgamma(2.0 * hurst + 1.0) * std::sin(pi * hurst));
}

double kernel_S(double t, const HurstParams& p) {
  if (p.log_branch()) {
    throw Error(ErrorCode::UndefinedAtAlphaOne, "S has a pole in K(alpha) at alpha = 1");
  }
  if (t == 0.0) {
    if (p.alpha() < 1.0) throw Error(ErrorCode::Singularity, "S(0) diverges for alpha < 1");
    return 0.0;
  }
  return *p.k_alpha() * std::pow(std::abs(t), p.alpha() - 1.0);
}

namespace {

// K|x0|^(a-1) expm1((a-1) ln(|x1|/|x0|)) with |x1| - |x0| supplied separately
// so callers that know it exactly avoid the rounding of forming it.
double profile_diff_abs(double abs_x0, double abs_gap, const HurstParams& p) {
  const double log_ratio = std::log1p(abs_gap / abs_x0);
  if (p.log_branch()) return -log_ratio / std::numbers::pi;
  const double a1 = p.alpha() - 1.0;
  return *p.k_alpha() * std::pow(abs_x0, a1) * std::expm1(a1 * log_ratio);
}

}  // namespace

double kernel_St(double t, double u, const HurstParams& p) {
  if (u == 0.0 || u == t) {
    if (t == 0.0 && u != 0.0) return 0.0;
    throw Error(ErrorCode::Singularity, "S_t(u) is singular at u in {0, t}");
  }
  if (t == 0.0) return 0.0;
  const double v = t - u;
  const double au = std::abs(u);
  const double av = std::abs(v);
  // u and u - t on the same side of 0: |u| - |t - u| = sign(u) t exactly.
  const double gap = ((u > 0.0) == (u - t > 0.0)) ? (u > 0.0 ? t : -t) : au - av;
  return profile_diff_abs(av, gap, p);
}

double kernel_T(double t, const HurstParams& p) {
  if (t == 0.0) throw Error(ErrorCode::Singularity, "T is singular at 0");
  const double mag = p.k_T() * std::pow(std::abs(t), p.alpha() - 2.0);
  return t > 0.0 ? mag : -mag;
}

double covariance_closed(double t, double s, const HurstParams& p) {
  const double h2 = 2.0 * p.hurst();
  auto pw = [h2](double x) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), h2); };
  return p.k_2alpha() * (pw(t) + pw(s) - pw(t - s));
}

std::complex<double> st_fourier(double xi, double t, const HurstParams& p) {
  if (xi == 0.0) throw Error(ErrorCode::Singularity, "Fourier transform of S_t is singular at 0");
  // 1 - e^{i theta} = -2i sin(theta/2) e^{i theta/2}
  const double half = 0.5 * t * xi;
  const std::complex<double> one_minus =
      std::complex<double>(0.0, -2.0 * std::sin(half)) * std::polar(1.0, half);
  return one_minus / std::pow(std::abs(xi), p.alpha());
}

namespace kernel_detail {

double profile(double x, const HurstParams& p) {
  if (p.log_branch()) {
    if (x == 0.0) throw Error(ErrorCode::Singularity, "logarithmic profile at 0");
    return -std::log(std::abs(x)) / std::numbers::pi;
  }
  return kernel_S(x, p);
}

double profile_diff(double x1, double x0, const HurstParams& p) {
  if (x0 == 0.0 || x1 == 0.0) {
    if (p.alpha() <= 1.0) throw Error(ErrorCode::Singularity, "profile difference through 0");
    return profile(x1, p) - profile(x0, p);
  }
  const double a1 = std::abs(x1);
  const double a0 = std::abs(x0);
  return profile_diff_abs(a0, a1 - a0, p);
}

double signed_power_antiderivative(double x, double a) {
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), a) / a;
  return x > 0.0 ? m : -m;
}

double profile_antiderivative(double x, const HurstParams& p) {
  if (x == 0.0) return 0.0;
  if (p.log_branch()) {
    return -(x * std::log(std::abs(x)) - x) / std::numbers::pi;
  }
  return *p.k_alpha() * signed_power_antiderivative(x, p.alpha());
}

double st_cell_integral(double t, double u0, double u1, const HurstParams& p) {
  if (t == 0.0) return 0.0;
  // Accumulate in extended precision; far cells subtract nearly equal terms.
  using ld = long double;
  auto prim = [&p](ld x) -> ld {
    if (x == 0.0L) return 0.0L;
    const ld ax = std::fabs(x);
    ld v;
    if (p.log_branch()) {
      v = -(ax * std::log(ax) - ax) / std::numbers::pi_v<ld>;
    } else {
      v = static_cast<ld>(*p.k_alpha()) * std::pow(ax, static_cast<ld>(p.alpha())) /
          static_cast<ld>(p.alpha());
    }
    return x > 0.0L ? v : -v;
  };
  const ld lt = t;
  const ld r = (prim(u1) - prim(u0)) - (prim(u1 - lt) - prim(u0 - lt));
  return static_cast<double>(r);
}

double t_first_moment(double w0, double w1, const HurstParams& p) {
  return p.k_T() * (signed_power_antiderivative(w1, p.alpha()) -
                    signed_power_antiderivative(w0, p.alpha()));
}

}  // namespace kernel_detail

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::UndefinedAtAlphaOne: return "UNDEFINED_AT_ALPHA_ONE";
    case ErrorCode::Singularity: return "SINGULARITY";
    case ErrorCode::Endpoint: return "ENDPOINT";
    case ErrorCode::ExponentGate: return "EXPONENT_GATE";
    case ErrorCode::InsufficientSamples: return "INSUFFICIENT_SAMPLES";
    case ErrorCode::FactorizationFailure: return "FACTORIZATION_FAILURE";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::TruncationTooSmall: return "TRUNCATION_TOO_SMALL";
    case ErrorCode::NonpositiveY: return "NONPOSITIVE_Y";
    case ErrorCode::NonpositiveLambda: return "NONPOSITIVE_LAMBDA";
    case ErrorCode::NodeMismatch: return "NODE_MISMATCH";
    case ErrorCode::MissingSample: return "MISSING_SAMPLE";
    case ErrorCode::NegativeTimeDomain: return "NEGATIVE_TIME_DOMAIN";
    case ErrorCode::Ordering: return "ORDERING";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::DomainTooSmall: return "DOMAIN_TOO_SMALL";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace fracflow
