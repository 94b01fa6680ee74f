#pragma once
// Exact analytic MPS families (chi=2 and chi=4) with closed-form reference
// values, circuit angles, and the Laurent-polynomial encoding of generalized
// cluster Hamiltonians.

#include <string>
#include <vector>

#include "magic_spectra/oracle.hpp"

namespace msp {

struct Chi2Skeleton {
  double g = 0.0;
};

struct Chi4Skeleton {
  double mu = 0.0;
  cplx b1, b2, a1, a2;
};

// A_up = [[0,0],[1,1]], A_dn = [[1,g],[0,0]] (normalized).
ImpsState chi2_tensors(double g);

// chi=4 family parametrized by mu with
//   b1 = -mu(mu+2) / (mu^2 + mu + 1),  b2 = (mu+1) / mu^2,
//   a_k = b_k / (1 + sqrt(1 - b_k^2))   (principal branch).
// Valid domain: mu in (-inf, -1] U [-1/2, 1] plus the cluster points
// (1 +- sqrt5)/2 and the mu = 0 limit (a1 = 0, a2 = -i). Interior points
// with |b1| > 1 are rejected: the tensor family does not contain the
// ground state there.
ImpsState chi4_tensors(double mu);
Chi4Skeleton chi4_parameters(double mu);

enum class Chi2Quantity {
  m2,         // -log[(1 + 14 g^2 + g^4) / (1+|g|)^4]
  xi,         // -1 / log|(1-g)/(1+g)|
  xi_sre,     // -1 / log|(1-g^4)/(1+14g^2+g^4)|
  s2_block,   // two-cut block entropy: 2 log[2(1+g)^2/(1+6g+g^2)] (g>=0),
              // log 4 (g<0)
  c1_printed  // reference-only closed form, never consumed downstream
};
double closed_form_chi2(double g, Chi2Quantity q);
// Squared-polynomial reading of the c1 closed form (matches the numerically
// exact projector overlap for g >= 0; for g < 0 the printed value is 4x it).
double closed_form_chi2_c1_squared(double g);
// Eigenvalues of the normalized standard transfer matrix: {1,(1-g)/(1+g),0,0}
// up to overall normalization by 1+|g|.
std::vector<double> closed_form_chi2_eigs_e(double g);
// The four distinct eigenvalues of the n=2 replica operator with their
// multiplicities (1, 8, 7, 240).
std::vector<std::pair<double, int>> closed_form_chi2_eigs_ee(double g);
// delta M^(2) closed forms.
double closed_form_delta_ryz(double theta);
double closed_form_delta_rx(double theta, double g);

struct CircuitAngles {
  double theta_v = 0.0, theta_w = 0.0;
};
// theta_v = arcsin(sqrt|g| / sqrt(1+|g|)),
// theta_w = arccos(sgn(g) sqrt|g| / sqrt(1+|g|)); limits at g = 0.
CircuitAngles circuit_angles(double g);

// f(z) = scale * z^p * (sum_k s_k z^k)^2; couplings t_alpha from expansion.
struct SkeletonPolynomial {
  int p = 0;
  double scale = 1.0;
  std::vector<double> s;

  // (alpha, t_alpha) pairs, alpha in [p, p + 2 deg].
  std::vector<std::pair<int, double>> couplings() const;
};

SkeletonPolynomial chi2_polynomial(double g);   // -((1+g) + (g-1) z)^2
SkeletonPolynomial chi4_polynomial(double mu);  // (z-mu)^2 (z-mu/(mu+1))^2

// Periodic-ring image of H = (1/2) sum_{n,alpha} t_alpha * string with
// alpha = 0 -> +Z_n, alpha > 0 -> -X_n Z...Z X_{n+alpha},
// alpha < 0 -> -Y_{n+alpha} Z...Z Y_n.
PauliHamiltonian laurent_to_pauli_hamiltonian(const SkeletonPolynomial& poly,
                                              int l);
// The same strings as per-site terms (for infinite-state energies).
std::vector<std::pair<double, std::vector<uint8_t>>> laurent_site_terms(
    const SkeletonPolynomial& poly);

// Ground-state energy density -(1/4 pi) integral |f(e^{ik})| dk.
double free_fermion_energy(const SkeletonPolynomial& poly);

std::vector<std::pair<double, std::string>> special_points_chi4();

}  // namespace msp
