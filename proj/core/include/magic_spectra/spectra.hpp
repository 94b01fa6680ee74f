#pragma once
// Spectral analysis of the replica operator: SRE densities, boundary-overlap
// decomposition, subsystem/mixed/mutual SRE, witness and scaling fits.

#include <optional>
#include <vector>

#include "magic_spectra/pauli_replica.hpp"

namespace msp {

struct ReplicaSpectrum {
  int n = 2;
  EigenPairs pairs;
  std::vector<std::vector<int>> groups;  // degeneracy partition (tol 1e-8)
  std::vector<cplx> mu;                  // one representative per group
  std::vector<double> c;                 // boundary overlaps per group
  bool degenerate_boundary = false;      // c extraction ambiguous (cat point)

  double mu1() const { return std::abs(mu.at(0)); }
  double c1() const { return c.at(0); }
};

// m^(n) = log(mu_1) / (1 - n); >= 0, zero at stabilizer fixed points.
double sre_density(const ReplicaOperator& op, double tol = 1e-10,
                   unsigned seed = 7);

// Top-k eigenpairs with degeneracy grouping and group-projector overlaps
// c_i = (LL| P_i |RR). `k` counts eigenpairs, not groups.
ReplicaSpectrum decompose(const ReplicaOperator& op, int k, const Vec& ll,
                          const Vec& rr, double tol = 1e-10,
                          unsigned seed = 7);

// M^(n)(rho_N) = log (LL| EE^N |RR) / (1-n) by N matrix-free applications
// with per-step rescaling.
double subsystem_sre(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
                     int n_sites);

struct SreExpansion {
  double leading = 0.0;   // N log(mu_1)/(1-n)
  double c1_term = 0.0;   // log(c_1)/(1-n)
  double f_n = 0.0;       // sum_{i>=2} (mu_i/mu_1)^N c_i
};
SreExpansion sre_expansion(const ReplicaSpectrum& spec, int n_sites);

// xi_SRE = -1 / log|mu_2 / mu_1| (+inf at degeneracy).
double sre_correlation_length(const ReplicaSpectrum& spec);

struct MixedSre {
  double m = 0.0;        // M^(n)
  double s = 0.0;        // Renyi block entropy supplied by the caller
  double m_tilde = 0.0;  // M - S
  double density = 0.0;  // m_tilde / N
};
MixedSre mixed_sre(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
                   int n_sites, double s2_block);

// W = M_tilde - 2 S^(n).
double witness(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
               int n_sites, double s2_block);

struct MutualAdjacent {
  double l = 0.0;  // L^(n)(A:B) = 2 M_tilde(ell) - M_tilde(2 ell)
  double w = 0.0;  // 2 M(ell) - M(2 ell)
  double i = 0.0;  // 2 S(ell) - S(2 ell)
};
MutualAdjacent mutual_sre_adjacent(const ReplicaOperator& op, const Vec& ll,
                                   const Vec& rr, int ell, double s2_ell,
                                   double s2_2ell);

struct MutualInfinite {
  double l_inf = 0.0;
  double w_inf = 0.0;
};
// L_inf = log(c_1)/(1-n) - S, with S the block (two-cut) Renyi entropy.
MutualInfinite mutual_sre_infinite(const ReplicaSpectrum& spec,
                                   double s2_block);

// M^(n) of two N-site blocks separated by r sites; the intermediate region
// uses the replicated standard transfer operator.
double separated_subsystem_sre(const ReplicaOperator& op, const Vec& ll,
                               const Vec& rr, int n_sites, int r);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of fit residuals
};
// Least-squares line through (x, y) points; throws on fewer than 3 points.
FitResult fit_w_scaling(const std::vector<std::pair<double, double>>& points);

// Summary used by the CLI.
struct SreReport {
  int n = 2;
  double m_n = 0.0;
  double xi_sre = 0.0;
  double l_inf = 0.0;
  double w_inf = 0.0;
  std::vector<double> c;
  int chi = 0;
  int chi_t = 0;
  bool degenerate = false;
};
SreReport make_report(const ImpsState& state, int n, int chi_t, int k_groups,
                      double tol = 1e-10, unsigned seed = 7);

}  // namespace msp
