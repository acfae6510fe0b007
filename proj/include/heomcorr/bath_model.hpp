#pragma once

#include <complex>
#include <vector>

namespace heomcorr {

/// Lorentzian-cutoff bath. All values in units of the energy scale delta.
struct BathParameters {
  double eta = 0.3;    // system-bath coupling strength
  double gamma = 4.0;  // characteristic bath frequency
  double beta = 2.5;   // inverse temperature

  /// Throws ParameterError on negative coupling, nonpositive rates, or when
  /// beta*gamma/2 sits on a pole of the cotangent.
  void validate() const;
};

/// How the double-commutator prefactor is formed.
enum class TerminatorForm {
  /// (1/(beta gamma) - i/2) eta - sum_{k=0}^{K} c_k / gamma_k
  Verbatim,
  /// Explicit summation of the Matsubara tail sum_{k>K} c_k / gamma_k.
  TailSum,
};

struct MatsubaraTerm {
  double rate;  // gamma_k
  std::complex<double> amplitude;  // c_k
};

/// Truncated exponential expansion of the bath correlation function.
struct BathExpansion {
  std::vector<MatsubaraTerm> terms;  // k = 0..K
  std::complex<double> terminator{0.0, 0.0};

  int cutoff() const { return static_cast<int>(terms.size()) - 1; }
};

double spectral_density(double omega, const BathParameters& params);

BathExpansion matsubara_expansion(const BathParameters& params, int cutoff,
                                  TerminatorForm form = TerminatorForm::Verbatim);

/// Sum_k c_k exp(-gamma_k |t|) over the retained terms. Diagnostics only.
std::complex<double> bath_correlation(double t, const BathExpansion& expansion);

}  // namespace heomcorr
