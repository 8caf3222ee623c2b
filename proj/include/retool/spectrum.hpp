#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "retool/errors.hpp"

namespace retool {

enum class Verdict { lyapunov_stable, linearly_stable, spectrally_unstable, inconclusive, unassessed };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::lyapunov_stable: return "lyapunov_stable";
    case Verdict::linearly_stable: return "linearly_stable";
    case Verdict::spectrally_unstable: return "spectrally_unstable";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::unassessed: return "unassessed";
  }
  return "?";
}

inline Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::lyapunov_stable, Verdict::linearly_stable, Verdict::spectrally_unstable,
                    Verdict::inconclusive, Verdict::unassessed})
    if (to_string(v) == s) return v;
  throw DomainError("unknown verdict '" + std::string(s) + "'");
}

inline bool is_stable(Verdict v) { return v == Verdict::lyapunov_stable || v == Verdict::linearly_stable; }

enum class StabilityMethod { reduced_energy_momentum, symplectic_slice };

struct StabilityReport {
  StabilityMethod method = StabilityMethod::reduced_energy_momentum;
  std::vector<double> arnold_eigs;        ///< REM: rigid block
  std::vector<double> vint_eigs;          ///< REM: internal block, printed formula
  std::vector<double> vint_eigs_amended;  ///< REM: internal block of the amended-potential Hessian
  std::vector<double> hessian_eigs;       ///< slice: Hessian of the slice Hamiltonian
  std::vector<std::complex<double>> linearization_spectrum;
  Verdict verdict = Verdict::unassessed;
  bool semisimple = false;
  double max_re_lambda = 0.0;
  double eps_spec = 0.0;
  /// Largest entrywise gap between the printed internal block and the amended-potential
  /// Hessian, relative to the largest entry of the latter.
  double formula_discrepancy = 0.0;
  bool formula_discrepancy_flag = false;
  std::string note;
};

struct SpectrumAnalysis {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by (Re, Im)
  double max_re = 0.0;
  double eps = 0.0;
  bool semisimple = false;
  bool ambiguous = false;  ///< rank test could not decide
};

/// Eigenvalues of a real matrix with the zero-real-part tolerance
/// eps = 1e-8 (1 + spectral radius) and a rank-based semi-simplicity test.
inline SpectrumAnalysis analyze_spectrum(const Eigen::MatrixXd& L) {
  SpectrumAnalysis out;
  const Eigen::Index n = L.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(L, false);
  if (es.info() != Eigen::Success) {
    out.ambiguous = true;
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  double radius = 0.0;
  for (auto z : out.eigenvalues) {
    radius = std::max(radius, std::abs(z));
    out.max_re = std::max(out.max_re, z.real());
  }
  out.eps = 1e-8 * (1.0 + radius);

  const double sigma_max = Eigen::JacobiSVD<Eigen::MatrixXd>(L).singularValues()(0);
  const double tight = 1e-8 * std::max(sigma_max, 1e-300);
  const double loose = 1e-4 * std::max(sigma_max, 1e-300);
  const double cluster_tol = 1e-6 * (1.0 + radius);

  // Greedy clustering of nearly equal eigenvalues.
  std::vector<int> label(out.eigenvalues.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    for (std::size_t j = i + 1; j < out.eigenvalues.size(); ++j)
      if (label[j] < 0 && std::abs(out.eigenvalues[j] - out.eigenvalues[i]) <= cluster_tol) label[j] = clusters;
    ++clusters;
  }
  out.semisimple = true;
  const Eigen::MatrixXcd Lc = L.cast<std::complex<double>>();
  for (int k = 0; k < clusters; ++k) {
    std::complex<double> mean = 0.0;
    int mult = 0;
    for (std::size_t i = 0; i < label.size(); ++i)
      if (label[i] == k) {
        mean += out.eigenvalues[i];
        ++mult;
      }
    mean /= static_cast<double>(mult);
    const Eigen::MatrixXcd shifted = Lc - mean * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(shifted).singularValues();
    int tight_count = 0, loose_count = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      tight_count += sv(i) <= tight;
      loose_count += sv(i) <= loose;
    }
    if (tight_count == mult) continue;
    out.semisimple = false;
    if (loose_count >= mult) out.ambiguous = true;
  }
  return out;
}

inline Verdict spectral_verdict(const SpectrumAnalysis& s) {
  if (s.eigenvalues.empty()) return Verdict::inconclusive;
  if (s.max_re > s.eps) return Verdict::spectrally_unstable;
  if (s.semisimple && !s.ambiguous) return Verdict::linearly_stable;
  return Verdict::inconclusive;
}

template <class Matrix>
std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

}  // namespace retool
