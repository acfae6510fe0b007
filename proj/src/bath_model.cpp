#include "heomcorr/bath_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

constexpr double kPoleGuard = 1e-9;
constexpr double kResonanceGuard = 1e-12;
constexpr int kTailTerms = 200000;

double matsubara_rate(int k, double beta) { return 2.0 * std::numbers::pi * k / beta; }

double matsubara_amplitude(const BathParameters& p, double rate) {
  return 2.0 * p.eta * p.gamma * rate / (p.beta * (rate * rate - p.gamma * p.gamma));
}

// Tail sum_{k>K} c_k/gamma_k = (2 eta gamma / beta) sum_{k>K} 1/(nu_k^2 - gamma^2).
// Summed explicitly out to kTailTerms, then closed with the 1/nu^2 asymptote.
double matsubara_tail(const BathParameters& p, int cutoff) {
  double acc = 0.0;
  const int last = cutoff + kTailTerms;
  for (int k = last; k > cutoff; --k) {
    const double nu = matsubara_rate(k, p.beta);
    acc += 1.0 / (nu * nu - p.gamma * p.gamma);
  }
  const double scale = p.beta / (2.0 * std::numbers::pi);
  acc += scale * scale / (last + 0.5);
  return 2.0 * p.eta * p.gamma / p.beta * acc;
}

}  // namespace

void BathParameters::validate() const {
  std::ostringstream os;
  if (!(eta >= 0.0)) os << "eta must be >= 0 (got " << eta << ")";
  else if (!(gamma > 0.0)) os << "gamma must be > 0 (got " << gamma << ")";
  else if (!(beta > 0.0)) os << "beta must be > 0 (got " << beta << ")";
  else {
    const double x = 0.5 * beta * gamma;
    const double r = std::remainder(x, std::numbers::pi);
    if (std::abs(r) < kPoleGuard) os << "beta*gamma/2 = " << x << " is a cotangent pole";
  }
  if (!os.str().empty()) throw ParameterError(os.str());
}

double spectral_density(double omega, const BathParameters& params) {
  return omega * params.eta * params.gamma / (omega * omega + params.gamma * params.gamma);
}

BathExpansion matsubara_expansion(const BathParameters& params, int cutoff,
                                  TerminatorForm form) {
  params.validate();
  if (cutoff < 0) throw ParameterError("Matsubara cutoff must be >= 0");

  BathExpansion out;
  out.terms.reserve(static_cast<std::size_t>(cutoff) + 1);
  const double g0 = params.gamma;
  const double c0_re = 0.5 * params.eta * g0 / std::tan(0.5 * params.beta * g0);
  out.terms.push_back({g0, {c0_re, -0.5 * params.eta * g0}});

  for (int k = 1; k <= cutoff; ++k) {
    const double nu = matsubara_rate(k, params.beta);
    if (std::abs(nu - g0) < kResonanceGuard * g0) {
      std::ostringstream os;
      os << "Matsubara rate gamma_" << k << " = " << nu << " coincides with gamma";
      throw ParameterError(os.str());
    }
    out.terms.push_back({nu, {matsubara_amplitude(params, nu), 0.0}});
  }

  if (form == TerminatorForm::Verbatim) {
    std::complex<double> delta{1.0 / (params.beta * g0), -0.5};
    delta *= params.eta;
    for (const auto& term : out.terms) delta -= term.amplitude / term.rate;
    out.terminator = delta;
  } else {
    out.terminator = {matsubara_tail(params, cutoff), 0.0};
  }
  return out;
}

std::complex<double> bath_correlation(double t, const BathExpansion& expansion) {
  std::complex<double> f{0.0, 0.0};
  for (const auto& term : expansion.terms) f += term.amplitude * std::exp(-term.rate * std::abs(t));
  return f;
}

}  // namespace heomcorr
