#pragma once
// SRE response to one and two local unitary perturbations, and numerical
// maximization of single-site magic injection.

#include "magic_spectra/spectra.hpp"

namespace msp {

struct SingleQubitUnitary {
  double theta = 0.0, phi = 0.0, lambda = 0.0;
  Eigen::Matrix2cd matrix;

  // U = R_z(phi) R_y(theta) R_z(lambda)
  static SingleQubitUnitary from_angles(double theta, double phi,
                                        double lambda);
  // Validates unitarity within 1e-12.
  static SingleQubitUnitary from_matrix(const Eigen::Matrix2cd& u);
  static SingleQubitUnitary rx(double theta);
  static SingleQubitUnitary ry(double theta);
  static SingleQubitUnitary rz(double theta);
  static SingleQubitUnitary s_gate();
  static SingleQubitUnitary h_gate();
  static SingleQubitUnitary t_gate();
};

// delta M = [log (L1| EE_U |R1) - log mu_1] / (1-n), dominant pair taken
// from `spec` with (L1|R1) = 1.
double delta_m_single(const ReplicaOperator& op, const ReplicaSpectrum& spec,
                      const SingleQubitUnitary& u);

struct DoubleResult {
  double total = 0.0;      // delta M_{U,U}(r)
  double connected = 0.0;  // total - 2 * delta M_U
};
// Exact contraction (L1| EE_U EE^{r-1} EE_U |R1), matrix-free.
DoubleResult delta_m_double(const ReplicaOperator& op,
                            const ReplicaSpectrum& spec,
                            const SingleQubitUnitary& u, int r);

// Connected response for all r in [1, r_max] from one incremental sweep.
std::vector<DoubleResult> delta_m_double_sweep(const ReplicaOperator& op,
                                               const ReplicaSpectrum& spec,
                                               const SingleQubitUnitary& u,
                                               int r_max);

enum class RotationFamily { rx, ry, rz, full };

struct InjectionResult {
  double theta = 0.0, phi = 0.0, lambda = 0.0;
  double delta_m = 0.0;
  bool converged = true;
};
// Deterministic coarse grid (24 per angle) + coordinate descent to 1e-6;
// grid ties broken lexicographically in (theta, phi, lambda).
InjectionResult maximize_injection(const ReplicaOperator& op,
                                   const ReplicaSpectrum& spec,
                                   RotationFamily family);

}  // namespace msp
