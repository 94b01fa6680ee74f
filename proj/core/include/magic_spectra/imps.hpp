#pragma once
// Translation-invariant infinite MPS: normalization, transfer spectrum,
// correlators and Renyi-2 entropies of embedded blocks.

#include <vector>

#include "magic_spectra/tensor.hpp"

namespace msp {

// One-site iMPS A^sigma (d matrices chi x chi) with its dominant transfer
// environments. The transfer matrix convention is
//   E_{(ik),(jl)} = sum_sigma conj(A^sigma)_{ij} A^sigma_{kl},
// i.e. E = sum_sigma kron(conj(A), A); this matches the Pauli-basis transfer
// tensors (e[I] == E). l and r are the dominant left/right eigenvectors with
// l^T r = 1; after normalize() the dominant eigenvalue has unit modulus.
struct ImpsState {
  int d = 0;
  int chi = 0;
  std::vector<Mat> A;
  Vec l, r;
  cplx lambda1{0.0, 0.0};
  cplx lambda2{0.0, 0.0};
  bool normalized = false;
  // Set when |lambda_2| is within gap_tol of |lambda_1| (e.g. cat states):
  // the state is still processed but correlation lengths report +inf and
  // boundary-overlap extraction is ambiguous.
  bool degenerate = false;

  bool injective() const {
    return !degenerate && std::abs(lambda1.imag()) < 1e-9 &&
           lambda1.real() > 0.0;
  }
};

struct TransferSpectrum {
  EigenPairs eigenpairs;
  double xi = 0.0;
};

ImpsState make_state(std::vector<Mat> site_matrices);

// Rescale by 1/sqrt(|lambda_1|) and recompute binormalized environments.
// Idempotent; throws ValidationError on a zero tensor.
ImpsState normalize(ImpsState state);

Mat transfer_dense(const ImpsState& state);
LinearOperatorHandle transfer_matrix(const ImpsState& state);
TransferSpectrum transfer_spectrum(const ImpsState& state);

// xi = -1 / log|lambda_2 / lambda_1|. Product states (no lambda_2) return 0;
// degenerate states return +inf.
double correlation_length(const ImpsState& state);

// <O_n O_{n+m}> - <O_n><O_{n+m}> via m-1 transfer applications (m >= 1).
cplx connected_correlator(const ImpsState& state, const Mat& op_a,
                          const Mat& op_b, int m);

// Renyi-2 entropy of a contiguous N-site block embedded in the infinite
// chain (two cuts), via the swap-trick transfer operator of dimension chi^4.
double renyi2_block(const ImpsState& state, int n_sites);

// Renyi-2 entropy of a single half-infinite cut: -log sum_i p_i^2 with p_i
// the (trace-normalized) spectrum of the product of the environment matrices.
double renyi2_half_infinite(const ImpsState& state);

// Block k physical sites into one effective site of dimension d^k
// (used before spectral operations for unit cells larger than one site).
ImpsState block_sites(const ImpsState& state, int k);

// Random normalized state, deterministic in the seed.
ImpsState random_state(int d, int chi, unsigned seed);

// Exact reduced density matrix of an N-site block (rows/cols in the
// d^N product basis). Dense oracle for small N.
Mat reduced_density(const ImpsState& state, int n_sites);

}  // namespace msp
