#pragma once
// Pauli-basis single-site transfer tensors, bond truncation, and the
// matrix-free 2n-replica SRE transfer operator (with perturbed variants).

#include <array>
#include <optional>

#include "magic_spectra/imps.hpp"

namespace msp {

// e[alpha]_{(ik),(jl)} = sum_{s,s'} (sigma^alpha)_{s s'}
//                        conj(A^s)_{ik} A^{s'}_{jl},  alpha in {I,X,Y,Z}.
// weight is the per-site scalar (1/2 by default) absorbed so an N-site
// replica contraction automatically carries the 1/2^N Pauli normalization.
struct PauliTransferTensor {
  int chi = 0;        // bond dimension of the originating state
  int bond = 0;       // chi^2, or chi_t after truncation
  std::array<Mat, 4> e;
  double weight = 0.5;
};

const std::array<Mat, 4>& pauli_matrices();

// Requires a normalized qubit state (d == 2).
PauliTransferTensor pauli_tensor(const ImpsState& state);

struct PauliMps {
  PauliTransferTensor tensor;       // bond == chi_t
  Mat isometry;                     // chi^2 x chi_t bond compressor W
  std::vector<double> truncation_log;  // discarded weights per SVD
};

// One SVD-based symmetric compression of the bond space to chi_t (no
// iterative re-optimization). chi_t = chi^2 with zero cutoff is exact.
PauliMps truncate_pauli_mps(const PauliTransferTensor& pt, int chi_t,
                            double cutoff = 0.0);
// Convenience: exact (untruncated) wrap.
PauliMps exact_pauli_mps(const ImpsState& state);

// Matrix-free operator of dimension bond^{2n},
//   EE = weight * sum_alpha M_0 x M_1 x ... x M_{2n-1},
// with M_s = e[alpha] on even replica slots and conj(e[alpha]) on odd slots.
struct ReplicaOperator {
  int n = 2;
  int bond = 0;
  long dim = 0;
  double weight = 0.5;
  std::array<Mat, 4> e;

  Vec apply(const Vec& v) const;            // EE v
  Vec apply_transpose(const Vec& v) const;  // EE^T v
  // (E)^{x 2n} with the same conjugation pattern, no Pauli sum, no weight:
  // the replicated *standard* transfer operator.
  Vec apply_identity(const Vec& v) const;

  LinearOperatorHandle handle() const;

  // Operator with the site tensor conjugated by a single-qubit unitary,
  // e_U[alpha] = sum_beta c_{alpha beta} e[beta] with
  // c_{alpha beta} = Tr(sigma^beta U^H sigma^alpha U) / 2.
  ReplicaOperator with_unitary(const Eigen::Matrix2cd& u) const;
};

// Default memory budget: largest allowed operator dimension.
inline constexpr long kReplicaDimBudget = 1L << 21;  // 2,097,152 amplitudes

ReplicaOperator replica_operator(const PauliMps& pm, int n,
                                 long dim_budget = kReplicaDimBudget);

// EE_U built from A_U = U A (u must be unitary within 1e-12).
ReplicaOperator perturbed_operator(const PauliMps& pm, int n,
                                   const Eigen::Matrix2cd& u,
                                   long dim_budget = kReplicaDimBudget);

// Replicated boundary vectors: LL = l (x) conj(l) (x) l (x) ... and
// RR likewise from r, alternating plain/conjugated to match the slots,
// mapped through the truncation isometry when one is present.
std::pair<Vec, Vec> replicated_boundary(const ImpsState& state,
                                        const PauliMps& pm, int n);

}  // namespace msp
