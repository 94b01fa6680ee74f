#pragma once
// Exact finite-system ground truth: statevector engine, brute-force
// Pauli-string SRE (pure and mixed), ED of cluster-Ising rings and the
// finite-ring mutual-SRE scaling analysis.

#include <cstdint>
#include <string>
#include <vector>

#include "magic_spectra/imps.hpp"

namespace msp {

// Pauli string over {I=0, X=1, Y=2, Z=3}; site 0 is the most significant
// qubit of the statevector index.
struct PauliHamiltonian {
  int l_sites = 0;
  struct Term {
    double coeff = 0.0;
    std::vector<uint8_t> ops;  // length l_sites
  };
  std::vector<Term> terms;

  Mat to_dense() const;
};

struct Statevector {
  int l_sites = 0;
  Vec amplitudes;
};

// Cluster-Ising ring H = g_zxz sum ZXZ - g_zz sum ZZ - g_x sum X.
PauliHamiltonian cluster_ising(double g_zxz, double g_zz, double g_x, int l);
// The scanned critical line (g_zxz, g_zz, g_x) = (g_c, 2, 2 - g_c).
PauliHamiltonian cluster_ising_line(double g_c, int l);
// The chi=2 skeleton parent Hamiltonian:
// sum (g-1)^2 ZXZ + 2(g^2-1) ZZ - (1+g)^2 X.
PauliHamiltonian skeleton_hamiltonian_chi2(double g, int l);

// Lowest eigenvector; degenerate ground spaces are resolved toward the
// spin-flip-parity-even (cat) state by a -1e-8 * X^{(x)L} tiebreak field.
Statevector ground_state(const PauliHamiltonian& h, bool parity_tiebreak = true);

// <psi| P |psi> by bit-mask string application, O(2^L).
double pauli_expectation(const Statevector& psi, uint64_t xmask,
                         uint64_t zmask);

// M^(n)(psi) = log( sum_P <P>^{2n} / 2^L ) / (1-n). Optional filter
// restricting the enumeration to strings commuting with X^{(x)L}.
double sre_pure(const Statevector& psi, int n, bool z2_filter = false);

struct MixedSreOracle {
  double m = 0.0;        // from Tr(rho P) sums, 2^N normalization
  double s_n = 0.0;      // Renyi entropy of rho
  double m_tilde = 0.0;  // m - s_n
  double witness = 0.0;  // m_tilde - 2 s_n
};
MixedSreOracle sre_mixed(const Mat& rho, int n);

// Reduced density matrix of the first `keep` qubits (contiguous block).
Mat partial_trace_front(const Statevector& psi, int keep);
// Same for sites [start, start+keep) on the ring.
Mat partial_trace_block(const Statevector& psi, int start, int keep);

// Pure-state mutual SRE of adjacent blocks of ell and L - ell sites:
// W^(n)(ell) = M(rho_ell) + M(rho_{L-ell}) - M(psi).
double mutual_sre_ring(const Statevector& psi, int ell, int n);
// Mixed-state mutual SRE L^(n) = M~(A) + M~(B) - M~(AB) (the Renyi mutual
// information subtracted from W); exactly zero on stabilizer states such as
// the GHZ cat.
double mutual_sre_ring_tilde(const Statevector& psi, int ell, int n);

struct Delta4Fit {
  std::vector<double> per_l_slopes;
  double extrapolated = 0.0;  // slope(L) = slope_inf + a/L least squares
  double joint = 0.0;         // single fit over all (L, ell) points
};
// ring_data[i] = list of (ell, W) for Ls[i]; abscissa is the log chord
// length log[(L/pi) sin(pi ell / L)].
Delta4Fit fit_delta4(
    const std::vector<std::vector<std::pair<int, double>>>& ring_data,
    const std::vector<int>& ls);

// ---- iMPS-side brute-force oracles (small windows) ----

// M^(n) of an N-site window of an infinite state from 4^N single-copy
// Pauli expectations contracted with the environments.
double window_sre(const ImpsState& state, int n_sites, int n);
// Two N-site windows separated by r identity sites.
double separated_window_sre(const ImpsState& state, int n_sites, int r,
                            int n);
// Same as window_sre but with a unitary absorbed on selected sites
// (site indices within [0, n_sites)).
double window_sre_perturbed(const ImpsState& state, int n_sites, int n,
                            const Eigen::Matrix2cd& u,
                            const std::vector<int>& sites);

// Per-site energy of translation-invariant Pauli terms (strings start at
// the same site) evaluated on the infinite state.
double energy_density(const ImpsState& state,
                      const std::vector<std::pair<double, std::vector<uint8_t>>>&
                          site_terms);

// psi(sigma) = Tr(A^{sigma_1} ... A^{sigma_L}) on a ring, normalized.
Statevector imps_ring_statevector(const ImpsState& state, int l);

}  // namespace msp
