#include "magic_spectra/pauli_replica.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace msp {

const std::array<Mat, 4>& pauli_matrices() {
  static const std::array<Mat, 4> sigma = [] {
    std::array<Mat, 4> s;
    for (auto& m : s) m = Mat::Zero(2, 2);
    s[0](0, 0) = 1;  s[0](1, 1) = 1;             // I
    s[1](0, 1) = 1;  s[1](1, 0) = 1;             // X
    s[2](0, 1) = cplx(0, -1); s[2](1, 0) = cplx(0, 1);  // Y
    s[3](0, 0) = 1;  s[3](1, 1) = -1;            // Z
    return s;
  }();
  return sigma;
}

PauliTransferTensor pauli_tensor(const ImpsState& state) {
  if (state.d != 2)
    throw ValidationError("pauli_tensor: qubit states only (d == 2)");
  if (!state.normalized)
    throw ValidationError("pauli_tensor: normalize the state first");
  const auto& sigma = pauli_matrices();
  PauliTransferTensor pt;
  pt.chi = state.chi;
  pt.bond = state.chi * state.chi;
  for (int alpha = 0; alpha < 4; ++alpha) {
    Mat e = Mat::Zero(pt.bond, pt.bond);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        if (sigma[static_cast<size_t>(alpha)](s, t) != cplx(0.0, 0.0))
          e += sigma[static_cast<size_t>(alpha)](s, t) *
               Eigen::kroneckerProduct(state.A[static_cast<size_t>(s)].conjugate(),
                                       state.A[static_cast<size_t>(t)]);
    pt.e[static_cast<size_t>(alpha)] = e;
  }
  pt.weight = 0.5;
  return pt;
}

PauliMps truncate_pauli_mps(const PauliTransferTensor& pt, int chi_t,
                            double cutoff) {
  if (chi_t < 1 || chi_t > pt.bond)
    throw ValidationError("truncate_pauli_mps: chi_t in [1, bond]");
  // Stack the four channel matrices and compress the shared column (bond)
  // space with one SVD; W spans the rows of V that carry weight.
  Mat stack(4L * pt.bond, pt.bond);
  for (int a = 0; a < 4; ++a)
    stack.block(static_cast<long>(a) * pt.bond, 0, pt.bond, pt.bond) =
        pt.e[static_cast<size_t>(a)];
  SvdTruncation tr = svd_truncate(stack, chi_t, cutoff);

  PauliMps pm;
  pm.isometry = tr.V;  // bond x chi_kept, orthonormal columns
  pm.truncation_log.push_back(tr.discarded_weight);
  pm.tensor.chi = pt.chi;
  pm.tensor.bond = static_cast<int>(tr.V.cols());
  pm.tensor.weight = pt.weight;
  for (int a = 0; a < 4; ++a)
    pm.tensor.e[static_cast<size_t>(a)] =
        tr.V.adjoint() * pt.e[static_cast<size_t>(a)] * tr.V;
  return pm;
}

PauliMps exact_pauli_mps(const ImpsState& state) {
  PauliTransferTensor pt = pauli_tensor(state);
  PauliMps pm;
  pm.tensor = pt;
  pm.isometry = Mat::Identity(pt.bond, pt.bond);
  pm.truncation_log.push_back(0.0);
  return pm;
}

// ------------------------------------------------------------ replica apply

namespace {

// Apply M to replica slot s of v (dim = bond^{2n}), out += not supported:
// returns the transformed vector. Slot 0 is the slowest index.
void slot_apply(const Mat& m, int slot, int slots, long bond, const Vec& in,
                Vec& out) {
  long outer = 1;
  for (int k = 0; k < slot; ++k) outer *= bond;
  long inner = 1;
  for (int k = slot + 1; k < slots; ++k) inner *= bond;
  using RowMat =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (long o = 0; o < outer; ++o) {
    const long off = o * bond * inner;
    Eigen::Map<const RowMat> blk(in.data() + off, bond, inner);
    Eigen::Map<RowMat> dst(out.data() + off, bond, inner);
    dst.noalias() = m * blk;
  }
}

Vec chain_apply(const std::array<const Mat*, 2>& ms, int n, long bond,
                const Vec& v) {
  // ms[0] on even slots, ms[1] on odd slots.
  const int slots = 2 * n;
  Vec cur = v, nxt(v.size());
  for (int s = 0; s < slots; ++s) {
    slot_apply(*ms[static_cast<size_t>(s % 2)], s, slots, bond, cur, nxt);
    cur.swap(nxt);
  }
  return cur;
}

}  // namespace

Vec ReplicaOperator::apply(const Vec& v) const {
  if (v.size() != dim) throw ValidationError("replica apply: size mismatch");
  Vec out = Vec::Zero(dim);
  for (int a = 0; a < 4; ++a) {
    const Mat& m = e[static_cast<size_t>(a)];
    Mat mc = m.conjugate();
    out += chain_apply({&m, &mc}, n, bond, v);
  }
  return weight * out;
}

Vec ReplicaOperator::apply_transpose(const Vec& v) const {
  if (v.size() != dim) throw ValidationError("replica apply_t: size mismatch");
  Vec out = Vec::Zero(dim);
  for (int a = 0; a < 4; ++a) {
    Mat mt = e[static_cast<size_t>(a)].transpose();
    Mat mh = e[static_cast<size_t>(a)].adjoint();
    out += chain_apply({&mt, &mh}, n, bond, v);
  }
  return weight * out;
}

Vec ReplicaOperator::apply_identity(const Vec& v) const {
  if (v.size() != dim) throw ValidationError("replica identity: size mismatch");
  const Mat& m = e[0];
  Mat mc = m.conjugate();
  Vec out = chain_apply({&m, &mc}, n, bond, v);
  return out;  // no Pauli sum, no per-site weight
}

LinearOperatorHandle ReplicaOperator::handle() const {
  LinearOperatorHandle h;
  h.dim = dim;
  ReplicaOperator self = *this;
  h.apply = [self](const Vec& v) { return self.apply(v); };
  h.apply_transpose = [self](const Vec& v) { return self.apply_transpose(v); };
  h.is_dense_materializable = dim <= 4096;
  if (h.is_dense_materializable) {
    h.materialize = [self]() {
      Mat a(self.dim, self.dim);
      Vec basis = Vec::Zero(self.dim);
      for (long j = 0; j < self.dim; ++j) {
        basis(j) = 1.0;
        a.col(j) = self.apply(basis);
        basis(j) = 0.0;
      }
      return a;
    };
  }
  return h;
}

ReplicaOperator ReplicaOperator::with_unitary(const Eigen::Matrix2cd& u) const {
  Eigen::Matrix2cd check = u.adjoint() * u - Eigen::Matrix2cd::Identity();
  if (check.norm() > 1e-12)
    throw ValidationError("with_unitary: matrix is not unitary");
  const auto& sigma = pauli_matrices();
  // c_{ab} = Tr(sigma^b U^H sigma^a U) / 2, real for unitary U.
  Eigen::Matrix4d c;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cplx tr = (sigma[static_cast<size_t>(b)] * u.adjoint() *
                       sigma[static_cast<size_t>(a)] * u)
                          .trace() *
                      0.5;
      c(a, b) = tr.real();
    }
  ReplicaOperator out = *this;
  for (int a = 0; a < 4; ++a) {
    Mat m = Mat::Zero(bond, bond);
    for (int b = 0; b < 4; ++b)
      if (std::abs(c(a, b)) > 1e-15) m += c(a, b) * e[static_cast<size_t>(b)];
    out.e[static_cast<size_t>(a)] = m;
  }
  return out;
}

ReplicaOperator replica_operator(const PauliMps& pm, int n, long dim_budget) {
  if (n < 2) throw ValidationError("replica_operator: n >= 2");
  ReplicaOperator op;
  op.n = n;
  op.bond = pm.tensor.bond;
  op.weight = pm.tensor.weight;
  op.e = pm.tensor.e;
  long d = 1;
  for (int s = 0; s < 2 * n; ++s) {
    d *= op.bond;
    if (d > dim_budget)
      throw ResourceError("replica operator dimension exceeds budget; "
                          "truncate the bond (chi_t) or lower n");
  }
  op.dim = d;
  return op;
}

ReplicaOperator perturbed_operator(const PauliMps& pm, int n,
                                   const Eigen::Matrix2cd& u,
                                   long dim_budget) {
  return replica_operator(pm, n, dim_budget).with_unitary(u);
}

std::pair<Vec, Vec> replicated_boundary(const ImpsState& state,
                                        const PauliMps& pm, int n) {
  if (!state.normalized)
    throw ValidationError("replicated_boundary: normalize the state first");
  Vec lt = pm.isometry.transpose() * state.l;
  Vec rt = pm.isometry.adjoint() * state.r;
  Vec ltc = lt.conjugate(), rtc = rt.conjugate();
  Vec LL = lt, RR = rt;
  for (int s = 1; s < 2 * n; ++s) {
    const Vec& nl = (s % 2 == 0) ? lt : ltc;
    const Vec& nr = (s % 2 == 0) ? rt : rtc;
    LL = Eigen::kroneckerProduct(LL, nl).eval();
    RR = Eigen::kroneckerProduct(RR, nr).eval();
  }
  return {LL, RR};
}

}  // namespace msp
