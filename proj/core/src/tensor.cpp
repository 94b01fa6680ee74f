#include "magic_spectra/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace msp {

// ---------------------------------------------------------------- tensors

ComplexTensor::ComplexTensor(std::vector<long> shp) : shape(std::move(shp)) {
  long n = 1;
  for (long s : shape) {
    if (s <= 0) throw ValidationError("tensor dimensions must be positive");
    n *= s;
  }
  data.assign(static_cast<size_t>(n), cplx{0.0, 0.0});
}

long ComplexTensor::size() const {
  long n = 1;
  for (long s : shape) n *= s;
  return n;
}

static long flat_index(const std::vector<long>& shape,
                       const std::vector<long>& idx) {
  if (idx.size() != shape.size())
    throw ValidationError("index rank mismatch");
  long off = 0;
  for (size_t k = 0; k < shape.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape[k])
      throw ValidationError("tensor index out of range");
    off = off * shape[k] + idx[k];
  }
  return off;
}

cplx& ComplexTensor::at(const std::vector<long>& idx) {
  return data[static_cast<size_t>(flat_index(shape, idx))];
}
cplx ComplexTensor::at(const std::vector<long>& idx) const {
  return data[static_cast<size_t>(flat_index(shape, idx))];
}

ComplexTensor ComplexTensor::from_matrix(const Mat& m) {
  ComplexTensor t({m.rows(), m.cols()});
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      t.data[static_cast<size_t>(i * m.cols() + j)] = m(i, j);
  return t;
}

Mat ComplexTensor::as_matrix(int row_ndims) const {
  if (row_ndims < 0 || row_ndims > rank())
    throw ValidationError("as_matrix: bad split");
  long rows = 1, cols = 1;
  for (int k = 0; k < row_ndims; ++k) rows *= shape[static_cast<size_t>(k)];
  for (long k = row_ndims; k < rank(); ++k)
    cols *= shape[static_cast<size_t>(k)];
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      m(i, j) = data[static_cast<size_t>(i * cols + j)];
  return m;
}

// Permute `t` so that axes in `back` (in order) come last, then flatten to
// a (rest, prod(back)) matrix. Plain stride walk; fine for oracle-sized work.
static Mat to_matrix_with_back_axes(const ComplexTensor& t,
                                    const std::vector<int>& back) {
  const long r = t.rank();
  std::vector<char> is_back(static_cast<size_t>(r), 0);
  for (int a : back) {
    if (a < 0 || a >= r) throw ValidationError("contract: bad axis");
    if (is_back[static_cast<size_t>(a)])
      throw ValidationError("contract: repeated axis");
    is_back[static_cast<size_t>(a)] = 1;
  }
  std::vector<int> order;
  for (int k = 0; k < r; ++k)
    if (!is_back[static_cast<size_t>(k)]) order.push_back(k);
  for (int a : back) order.push_back(a);

  std::vector<long> strides(static_cast<size_t>(r), 1);
  for (long k = r - 2; k >= 0; --k)
    strides[static_cast<size_t>(k)] =
        strides[static_cast<size_t>(k + 1)] * t.shape[static_cast<size_t>(k + 1)];

  long rows = 1, cols = 1;
  const long nfree = r - static_cast<long>(back.size());
  for (long k = 0; k < nfree; ++k)
    rows *= t.shape[static_cast<size_t>(order[static_cast<size_t>(k)])];
  for (long k = nfree; k < r; ++k)
    cols *= t.shape[static_cast<size_t>(order[static_cast<size_t>(k)])];

  Mat m(rows, cols);
  std::vector<long> idx(static_cast<size_t>(r), 0);
  const long total = t.size();
  for (long flat = 0; flat < total; ++flat) {
    long src = 0;
    long row = 0, col = 0;
    // decode flat index in permuted order
    long rem = flat;
    for (long k = r - 1; k >= 0; --k) {
      const long dim = t.shape[static_cast<size_t>(order[static_cast<size_t>(k)])];
      idx[static_cast<size_t>(k)] = rem % dim;
      rem /= dim;
    }
    for (long k = 0; k < r; ++k)
      src += idx[static_cast<size_t>(k)] *
             strides[static_cast<size_t>(order[static_cast<size_t>(k)])];
    for (long k = 0; k < nfree; ++k)
      row = row * t.shape[static_cast<size_t>(order[static_cast<size_t>(k)])] +
            idx[static_cast<size_t>(k)];
    for (long k = nfree; k < r; ++k)
      col = col * t.shape[static_cast<size_t>(order[static_cast<size_t>(k)])] +
            idx[static_cast<size_t>(k)];
    m(row, col) = t.data[static_cast<size_t>(src)];
  }
  return m;
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> ca, cb;
  for (auto [pa, pb] : pairs) {
    ca.push_back(pa);
    cb.push_back(pb);
    if (pa < 0 || pa >= a.rank() || pb < 0 || pb >= b.rank())
      throw ValidationError("contract: axis out of range");
    if (a.shape[static_cast<size_t>(pa)] != b.shape[static_cast<size_t>(pb)])
      throw ValidationError("contract: dimension mismatch");
  }
  Mat ma = to_matrix_with_back_axes(a, ca);      // (freeA, K)
  Mat mb = to_matrix_with_back_axes(b, cb);      // (freeB, K)
  Mat prod = ma * mb.transpose();                // (freeA, freeB)

  std::vector<long> shp;
  std::vector<char> used_a(static_cast<size_t>(a.rank()), 0),
      used_b(static_cast<size_t>(b.rank()), 0);
  for (int x : ca) used_a[static_cast<size_t>(x)] = 1;
  for (int x : cb) used_b[static_cast<size_t>(x)] = 1;
  for (int k = 0; k < a.rank(); ++k)
    if (!used_a[static_cast<size_t>(k)]) shp.push_back(a.shape[static_cast<size_t>(k)]);
  for (int k = 0; k < b.rank(); ++k)
    if (!used_b[static_cast<size_t>(k)]) shp.push_back(b.shape[static_cast<size_t>(k)]);
  if (shp.empty()) shp.push_back(1);

  ComplexTensor out(shp);
  for (long i = 0; i < prod.rows(); ++i)
    for (long j = 0; j < prod.cols(); ++j)
      out.data[static_cast<size_t>(i * prod.cols() + j)] = prod(i, j);
  return out;
}

// ---------------------------------------------------------------- sorting

bool eigenvalue_less_dominant(const cplx& a, const cplx& b) {
  // "less" in dominance order: a before b when a dominates.
  const double ma = std::abs(a), mb = std::abs(b);
  const double tol = 1e-12 * std::max(1.0, std::max(ma, mb));
  if (std::abs(ma - mb) > tol) return ma > mb;
  if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<int> sort_eigenvalues(const Vec& values) {
  std::vector<int> idx(static_cast<size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return eigenvalue_less_dominant(values(i), values(j));
  });
  return idx;
}

std::vector<std::vector<int>> group_degenerate(const Vec& values, double tol) {
  std::vector<int> idx = sort_eigenvalues(values);
  std::vector<std::vector<int>> groups;
  for (int i : idx) {
    bool placed = false;
    for (auto& g : groups) {
      const cplx rep = values(g.front());
      if (std::abs(values(i) - rep) <=
          tol * std::max(1.0, std::abs(values(i)))) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

// ------------------------------------------------------------- dense eigen

static void biorthogonalize(EigenPairs& ep, double group_tol = 1e-8) {
  const long n = ep.values.size();
  auto groups = group_degenerate(ep.values, group_tol);
  for (const auto& g : groups) {
    if (std::abs(ep.values(g.front())) < 1e-12) continue;  // zero cluster
    const int gs = static_cast<int>(g.size());
    Mat O(gs, gs);
    for (int a = 0; a < gs; ++a)
      for (int b = 0; b < gs; ++b)
        O(a, b) = ep.left.col(g[static_cast<size_t>(a)]).transpose() *
                  ep.right.col(g[static_cast<size_t>(b)]);
    Eigen::FullPivLU<Mat> lu(O);
    if (!lu.isInvertible()) continue;  // defective cluster, leave as-is
    Mat Oi = lu.inverse();
    Mat Lg(ep.left.rows(), gs);
    for (int a = 0; a < gs; ++a) Lg.col(a) = ep.left.col(g[static_cast<size_t>(a)]);
    Mat Lnew = Lg * Oi.transpose();  // L_new^T = O^{-1} L^T
    for (int a = 0; a < gs; ++a) ep.left.col(g[static_cast<size_t>(a)]) = Lnew.col(a);
  }
  (void)n;
}

EigenPairs dense_eigen(const Mat& a) {
  if (a.rows() != a.cols()) throw ValidationError("dense_eigen: not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Mat acopy = a;
  Vec w(n);
  Mat vl(n, n), vr(n, n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', n, acopy.data(),
                                  n, w.data(), vl.data(), n, vr.data(), n);
  if (info != 0) throw ConvergenceError("zgeev failed, info=" + std::to_string(info));

  std::vector<int> order = sort_eigenvalues(w);
  EigenPairs ep;
  ep.values.resize(n);
  ep.right.resize(n, n);
  ep.left.resize(n, n);
  ep.residuals.resize(n);
  for (long k = 0; k < n; ++k) {
    const int i = order[static_cast<size_t>(k)];
    ep.values(k) = w(i);
    ep.right.col(k) = vr.col(i);
    // zgeev left vectors satisfy u^H A = lambda u^H; our convention is
    // l^T A = lambda l^T, so l = conj(u).
    ep.left.col(k) = vl.col(i).conjugate();
  }
  biorthogonalize(ep);
  for (long k = 0; k < n; ++k)
    ep.residuals(k) = (a * ep.right.col(k) - ep.values(k) * ep.right.col(k)).norm();
  return ep;
}

LinearOperatorHandle dense_operator(const Mat& a) {
  if (a.rows() != a.cols()) throw ValidationError("dense_operator: not square");
  LinearOperatorHandle h;
  h.dim = a.rows();
  h.apply = [a](const Vec& v) -> Vec { return a * v; };
  h.apply_transpose = [a](const Vec& v) -> Vec { return a.transpose() * v; };
  h.is_dense_materializable = true;
  h.materialize = [a]() { return a; };
  return h;
}

// ----------------------------------------------------------------- Arnoldi

namespace {

struct RitzSet {
  Vec values;
  Mat vectors;
  Eigen::VectorXd resid;
};

// Explicitly restarted Arnoldi with full reorthogonalization. Returns the
// first k Ritz pairs once their residual estimates pass tol.
RitzSet arnoldi(const std::function<Vec(const Vec&)>& av, long dim, int k,
                double tol, unsigned seed, int m, int max_restarts) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v0(dim);
  for (long i = 0; i < dim; ++i) v0(i) = cplx(gauss(rng), gauss(rng));
  v0.normalize();

  m = static_cast<int>(std::min<long>(m, dim));
  k = std::min(k, m);

  Mat V(dim, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  RitzSet best;

  for (int restart = 0; restart < max_restarts; ++restart) {
    V.col(0) = v0;
    int built = m;
    bool breakdown = false;
    for (int j = 0; j < m; ++j) {
      Vec w = av(V.col(j));
      // modified Gram-Schmidt, twice
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          cplx h = V.col(i).dot(w);  // conjugate dot
          w -= h * V.col(i);
          if (pass == 0)
            H(i, j) = h;
          else
            H(i, j) += h;
        }
      }
      const double nrm = w.norm();
      H(j + 1, j) = nrm;
      if (nrm < 1e-14) {  // invariant subspace
        built = j + 1;
        breakdown = true;
        break;
      }
      V.col(j + 1) = w / nrm;
    }

    const Mat Hm = H.topLeftCorner(built, built);
    Eigen::ComplexEigenSolver<Mat> es(Hm);
    if (es.info() != Eigen::Success)
      throw ConvergenceError("Hessenberg eigensolver failed");
    const Vec theta = es.eigenvalues();
    const Mat y = es.eigenvectors();
    std::vector<int> order = sort_eigenvalues(theta);

    const double hlast = breakdown ? 0.0 : std::abs(H(built, built - 1));
    const int kk = std::min(k, built);
    RitzSet rs;
    rs.values.resize(kk);
    rs.vectors.resize(dim, kk);
    rs.resid.resize(kk);
    for (int i = 0; i < kk; ++i) {
      const int j = order[static_cast<size_t>(i)];
      rs.values(i) = theta(j);
      rs.vectors.col(i) = V.leftCols(built) * y.col(j);
      rs.vectors.col(i).normalize();
      rs.resid(i) = hlast * std::abs(y(built - 1, j));
    }
    best = rs;

    const double scale = std::max(1.0, std::abs(rs.values(0)));
    bool ok = true;
    for (int i = 0; i < kk; ++i)
      if (rs.resid(i) > tol * scale) ok = false;
    if (ok || breakdown) return best;

    // restart from the span of the wanted Ritz vectors
    v0 = rs.vectors.col(0);
    for (int i = 1; i < kk; ++i) v0 += rs.vectors.col(i);
    v0.normalize();
  }
  // Return the best effort but flag the failure.
  throw ConvergenceError("Arnoldi did not converge within restart budget");
}

}  // namespace

EigenPairs top_k_eigen(const LinearOperatorHandle& op, int k, double tol,
                       unsigned seed) {
  if (op.dim <= 0) throw ValidationError("top_k_eigen: empty operator");
  if (k <= 0) throw ValidationError("top_k_eigen: k must be positive");
  k = static_cast<int>(std::min<long>(k, op.dim));

  const bool dense_ok = op.dim <= 4096 &&
                        (op.is_dense_materializable || op.apply);
  if (dense_ok) {
    Mat a;
    if (op.materialize) {
      a = op.materialize();
    } else {
      a.resize(op.dim, op.dim);
      Vec e = Vec::Zero(op.dim);
      for (long j = 0; j < op.dim; ++j) {
        e(j) = 1.0;
        a.col(j) = op.apply(e);
        e(j) = 0.0;
      }
    }
    EigenPairs full = dense_eigen(a);
    EigenPairs ep;
    ep.values = full.values.head(k);
    ep.right = full.right.leftCols(k);
    ep.left = full.left.leftCols(k);
    ep.residuals = full.residuals.head(k);
    return ep;
  }

  if (!op.apply || !op.apply_transpose)
    throw ValidationError("top_k_eigen: matrix-free operator lacks apply");

  const int m = std::max(48, 3 * k + 24);
  RitzSet right = arnoldi(op.apply, op.dim, k, tol, seed, m, 400);
  RitzSet left = arnoldi(op.apply_transpose, op.dim, k, tol, seed, m, 400);

  EigenPairs ep;
  ep.values = right.values;
  ep.right = right.vectors;
  ep.left.resize(op.dim, right.values.size());
  ep.residuals = right.resid;
  // The transpose has the same spectrum; both runs are sorted identically.
  for (int i = 0; i < right.values.size(); ++i) {
    if (std::abs(right.values(i) - left.values(i)) >
        1e-6 * std::max(1.0, std::abs(right.values(i))))
      throw ConvergenceError("left/right Arnoldi spectra disagree");
    ep.left.col(i) = left.vectors.col(i);
  }
  biorthogonalize(ep);
  return ep;
}

// --------------------------------------------------------------------- SVD

SvdTruncation svd_truncate(const Mat& m, int max_rank, double cutoff) {
  if (max_rank <= 0) throw ValidationError("svd_truncate: rank must be >= 1");
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double s0 = s.size() ? s(0) : 0.0;
  int keep = 0;
  for (int i = 0; i < s.size(); ++i)
    if (i < max_rank && s(i) > cutoff * s0 && s(i) > 0.0) ++keep;
  keep = std::max(keep, 1);

  SvdTruncation out;
  out.U = svd.matrixU().leftCols(keep);
  out.S = s.head(keep);
  out.V = svd.matrixV().leftCols(keep);
  double total = 0.0, dropped = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    total += s(i) * s(i);
    if (i >= keep) dropped += s(i) * s(i);
  }
  out.discarded_weight = total > 0.0 ? dropped / total : 0.0;
  return out;
}

}  // namespace msp
