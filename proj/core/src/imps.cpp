#include "magic_spectra/imps.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace msp {

ImpsState make_state(std::vector<Mat> site_matrices) {
  if (site_matrices.empty()) throw ValidationError("make_state: no matrices");
  ImpsState st;
  st.d = static_cast<int>(site_matrices.size());
  st.chi = static_cast<int>(site_matrices.front().rows());
  for (const Mat& a : site_matrices)
    if (a.rows() != st.chi || a.cols() != st.chi)
      throw ValidationError("make_state: site matrices must be square, equal size");
  st.A = std::move(site_matrices);
  return st;
}

Mat transfer_dense(const ImpsState& state) {
  const long D = static_cast<long>(state.chi) * state.chi;
  Mat e = Mat::Zero(D, D);
  for (const Mat& a : state.A)
    e += Eigen::kroneckerProduct(a.conjugate(), a);
  return e;
}

LinearOperatorHandle transfer_matrix(const ImpsState& state) {
  const long chi = state.chi;
  const long D = chi * chi;
  if (D <= 4096) return dense_operator(transfer_dense(state));
  std::vector<Mat> A = state.A;
  LinearOperatorHandle h;
  h.dim = D;
  // v viewed as a chi x chi matrix V (row index = first kron factor):
  // (E v)_{(ik)} = sum_sigma conj(A)_{ij} V_{jl} A^T_{lk}.
  h.apply = [A, chi](const Vec& v) -> Vec {
    Eigen::Map<const Mat> V(v.data(), chi, chi);
    Mat Vt = V.transpose();  // row-major flat -> (i,k) with i slow
    Mat out = Mat::Zero(chi, chi);
    for (const Mat& a : A) out += a.conjugate() * Vt * a.transpose();
    Mat outT = out.transpose();
    return Eigen::Map<Vec>(outT.data(), chi * chi);
  };
  h.apply_transpose = [A, chi](const Vec& v) -> Vec {
    Eigen::Map<const Mat> V(v.data(), chi, chi);
    Mat Vt = V.transpose();
    Mat out = Mat::Zero(chi, chi);
    for (const Mat& a : A) out += a.adjoint() * Vt * a;
    Mat outT = out.transpose();
    return Eigen::Map<Vec>(outT.data(), chi * chi);
  };
  return h;
}

ImpsState normalize(ImpsState state) {
  double frob = 0.0;
  for (const Mat& a : state.A) frob += a.squaredNorm();
  if (frob < 1e-300) throw ValidationError("normalize: zero tensor");

  constexpr double gap_tol = 1e-10;
  // Two passes: find lambda_1, rescale, then re-derive the environments of
  // the normalized tensor.
  for (int pass = 0; pass < 2; ++pass) {
    EigenPairs ep;
    const long D = static_cast<long>(state.chi) * state.chi;
    if (D <= 4096) {
      ep = dense_eigen(transfer_dense(state));
    } else {
      ep = top_k_eigen(transfer_matrix(state), 4);
    }
    state.lambda1 = ep.values(0);
    state.lambda2 = ep.values.size() > 1 ? ep.values(1) : cplx(0.0, 0.0);
    state.degenerate =
        ep.values.size() > 1 &&
        std::abs(std::abs(state.lambda2) - std::abs(state.lambda1)) <
            gap_tol * std::abs(state.lambda1);

    const double mod = std::abs(state.lambda1);
    if (mod < 1e-300) throw ValidationError("normalize: singular transfer matrix");
    if (pass == 0) {
      const double scale = 1.0 / std::sqrt(mod);
      for (Mat& a : state.A) a *= scale;
      continue;
    }
    // pass 1: environments (already binormalized l^T r = 1 by dense_eigen /
    // top_k_eigen). Fix the overall phase so that tr(r-matrix) is real > 0.
    Vec l = ep.left.col(0), r = ep.right.col(0);
    cplx tr_r = 0.0;
    for (int i = 0; i < state.chi; ++i) tr_r += r(i * state.chi + i);
    if (std::abs(tr_r) > 1e-12) {
      const cplx ph = tr_r / std::abs(tr_r);
      r /= ph;
      l *= ph;
    }
    state.l = l;
    state.r = r;
  }
  state.normalized = true;
  return state;
}

TransferSpectrum transfer_spectrum(const ImpsState& state) {
  TransferSpectrum ts;
  const long D = static_cast<long>(state.chi) * state.chi;
  if (D <= 4096)
    ts.eigenpairs = dense_eigen(transfer_dense(state));
  else
    ts.eigenpairs = top_k_eigen(transfer_matrix(state), 6);
  ts.xi = correlation_length(state);
  return ts;
}

double correlation_length(const ImpsState& state) {
  if (!state.normalized)
    throw ValidationError("correlation_length: normalize the state first");
  const double m1 = std::abs(state.lambda1);
  const double m2 = std::abs(state.lambda2);
  if (m2 < 1e-14 * m1) return 0.0;  // product state
  if (state.degenerate) return std::numeric_limits<double>::infinity();
  return -1.0 / std::log(m2 / m1);
}

cplx connected_correlator(const ImpsState& state, const Mat& op_a,
                          const Mat& op_b, int m) {
  if (m < 1) throw ValidationError("connected_correlator: m >= 1");
  if (!state.normalized)
    throw ValidationError("connected_correlator: normalize the state first");
  const long D = static_cast<long>(state.chi) * state.chi;
  Mat E = transfer_dense(state);
  auto dense_op = [&](const Mat& o) {
    Mat eo = Mat::Zero(D, D);
    for (int s = 0; s < state.d; ++s)
      for (int t = 0; t < state.d; ++t)
        if (o(s, t) != cplx(0.0, 0.0))
          eo += o(s, t) * Eigen::kroneckerProduct(
                              state.A[static_cast<size_t>(s)].conjugate(),
                              state.A[static_cast<size_t>(t)]);
    return eo;
  };
  Mat ea = dense_op(op_a), eb = dense_op(op_b);
  const cplx lam = state.lambda1;

  Vec v = eb * state.r;
  for (int step = 0; step < m - 1; ++step) v = (E * v) / lam;
  const cplx two_point =
      (state.l.transpose() * ea * v)(0, 0) / (lam * lam);
  const cplx ev_a = (state.l.transpose() * ea * state.r)(0, 0) / lam;
  const cplx ev_b = (state.l.transpose() * eb * state.r)(0, 0) / lam;
  return two_point - ev_a * ev_b;
}

double renyi2_block(const ImpsState& state, int n_sites) {
  if (n_sites < 1) throw ValidationError("renyi2_block: N >= 1");
  if (!state.normalized)
    throw ValidationError("renyi2_block: normalize the state first");
  const long chi = state.chi;
  const long D4 = chi * chi * chi * chi;
  if (D4 > (1L << 24))
    throw ResourceError("renyi2_block: chi^4 too large");

  // Swap-trick operator T = sum_{s,t} conj(A^s) x A^t x conj(A^t) x A^s.
  // Tr(rho_N^2) = (l x l)^T T^N (r x r) with the slot pairing below.
  Mat T = Mat::Zero(D4, D4);
  for (int s = 0; s < state.d; ++s)
    for (int t = 0; t < state.d; ++t) {
      Mat k1 = Eigen::kroneckerProduct(state.A[static_cast<size_t>(s)].conjugate(),
                                       state.A[static_cast<size_t>(t)]);
      Mat k2 = Eigen::kroneckerProduct(state.A[static_cast<size_t>(t)].conjugate(),
                                       state.A[static_cast<size_t>(s)]);
      T += Eigen::kroneckerProduct(k1, k2);
    }
  Vec LL = Eigen::kroneckerProduct(state.l, state.l);
  Vec RR = Eigen::kroneckerProduct(state.r, state.r);

  double log_scale = 0.0;
  Vec v = RR;
  for (int step = 0; step < n_sites; ++step) {
    v = T * v;
    const double nrm = v.norm();
    if (nrm < 1e-300) throw ConvergenceError("renyi2_block: vanishing contraction");
    v /= nrm;
    log_scale += std::log(nrm);
  }
  const cplx amp = (LL.transpose() * v)(0, 0);
  const double log_purity = log_scale + std::log(std::abs(amp));
  return -log_purity;
}

double renyi2_half_infinite(const ImpsState& state) {
  if (!state.normalized)
    throw ValidationError("renyi2_half_infinite: normalize the state first");
  const int chi = state.chi;
  Eigen::Map<const Mat> lm_t(state.l.data(), chi, chi);
  Eigen::Map<const Mat> rm_t(state.r.data(), chi, chi);
  Mat lm = lm_t.transpose();
  Mat rm = rm_t.transpose();
  Mat prod = lm * rm.transpose();
  Eigen::ComplexEigenSolver<Mat> es(prod);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("renyi2_half_infinite: eigensolver failed");
  Vec p = es.eigenvalues();
  cplx tr = p.sum();
  double s2 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double pi = (p(i) / tr).real();
    s2 += pi * pi;
  }
  return -std::log(s2);
}

ImpsState block_sites(const ImpsState& state, int k) {
  if (k < 1) throw ValidationError("block_sites: k >= 1");
  std::vector<Mat> cur = state.A;
  int d = state.d;
  for (int step = 1; step < k; ++step) {
    std::vector<Mat> next;
    next.reserve(static_cast<size_t>(d) * state.d);
    for (const Mat& a : cur)
      for (const Mat& b : state.A) next.push_back(a * b);
    cur = std::move(next);
    d *= state.d;
  }
  return make_state(std::move(cur));
}

ImpsState random_state(int d, int chi, unsigned seed) {
  if (d < 2 || chi < 1) throw ValidationError("random_state: bad dims");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Mat> as;
  for (int s = 0; s < d; ++s) {
    Mat a(chi, chi);
    for (int i = 0; i < chi; ++i)
      for (int j = 0; j < chi; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
    as.push_back(a);
  }
  return normalize(make_state(std::move(as)));
}

Mat reduced_density(const ImpsState& state, int n_sites) {
  if (n_sites < 1) throw ValidationError("reduced_density: N >= 1");
  if (!state.normalized)
    throw ValidationError("reduced_density: normalize the state first");
  long dim = 1;
  for (int i = 0; i < n_sites; ++i) {
    dim *= state.d;
    if (dim > (1L << 14)) throw ResourceError("reduced_density: window too large");
  }
  const int chi = state.chi;
  Eigen::Map<const Mat> lm_t(state.l.data(), chi, chi);
  Eigen::Map<const Mat> rm_t(state.r.data(), chi, chi);
  Mat lm = lm_t.transpose();  // (i,k)
  Mat rm = rm_t.transpose();  // (j,l)

  // rho_{tau,sigma} = sum_{ijkl} l_{(ik)} [prod conj(A^{sigma})]_{ij}
  //                   [prod A^{tau}]_{kl} r_{(jl)}
  //               = tr( lm^T conj(M_sigma) rm M_tau^T )-style contraction:
  // with lm(i,k), rm(j,l): rho = sum lm(i,k) conj(Ms)(i,j) Mt(k,l) rm(j,l).
  std::vector<Mat> prods(static_cast<size_t>(dim));
  for (long cfg = 0; cfg < dim; ++cfg) {
    Mat m = Mat::Identity(chi, chi);
    long rem = cfg;
    std::vector<int> digits(static_cast<size_t>(n_sites));
    for (int site = n_sites - 1; site >= 0; --site) {
      digits[static_cast<size_t>(site)] = static_cast<int>(rem % state.d);
      rem /= state.d;
    }
    for (int site = 0; site < n_sites; ++site)
      m = m * state.A[static_cast<size_t>(digits[static_cast<size_t>(site)])];
    prods[static_cast<size_t>(cfg)] = m;
  }
  const cplx lam_pow = std::pow(state.lambda1, n_sites);
  Mat rho(dim, dim);
  for (long t = 0; t < dim; ++t)
    for (long s = 0; s < dim; ++s) {
      // sum_{ikjl} lm(i,k) conj(Ms)(i,j) Mt(k,l) rm(j,l)
      Mat tmp = lm.transpose() * prods[static_cast<size_t>(s)].conjugate();  // (k,j)
      cplx val = tmp.cwiseProduct(prods[static_cast<size_t>(t)] * rm.transpose()).sum();
      rho(t, s) = val / lam_pow;
    }
  // Normalize trace exactly to absorb residual phase/rounding.
  rho /= rho.trace();
  return rho;
}

}  // namespace msp
