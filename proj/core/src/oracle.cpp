#include "magic_spectra/oracle.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <thread>

#include "magic_spectra/pauli_replica.hpp"
#include "magic_spectra/spectra.hpp"

namespace msp {

namespace {

// Site i occupies bit (L-1-i): site 0 is the most significant bit.
inline uint64_t site_bit(int l, int i) {
  return 1ULL << (l - 1 - i);
}

struct MaskedString {
  uint64_t xmask = 0, zmask = 0;
  cplx phase = 1.0;  // i^{#Y}
};

MaskedString to_masks(int l, const std::vector<uint8_t>& ops) {
  MaskedString m;
  int ny = 0;
  for (int i = 0; i < l; ++i) {
    const uint8_t p = ops[static_cast<size_t>(i)];
    if (p == 1 || p == 2) m.xmask |= site_bit(l, i);
    if (p == 2 || p == 3) m.zmask |= site_bit(l, i);
    if (p == 2) ++ny;
  }
  static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                               cplx(0, -1)};
  m.phase = ipow[ny % 4];
  return m;
}

inline double z_sign(uint64_t b, uint64_t zmask) {
  return (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
}

// Deterministic parallel sum over [0, total) in fixed chunks; partials are
// accumulated in chunk order so the result does not depend on scheduling.
template <typename F>
long double parallel_sum(uint64_t total, const F& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const uint64_t chunk = std::max<uint64_t>(4096, total / (hw * 8) + 1);
  const uint64_t nchunks = (total + chunk - 1) / chunk;
  std::vector<long double> partial(nchunks, 0.0L);
  std::atomic<uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const uint64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      const uint64_t lo = c * chunk;
      const uint64_t hi = std::min(total, lo + chunk);
      long double acc = 0.0L;
      for (uint64_t idx = lo; idx < hi; ++idx) acc += body(idx);
      partial[c] = acc;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < hw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  long double sum = 0.0L;
  for (long double p : partial) sum += p;
  return sum;
}

// Decode a base-4 string index into masks without building the ops vector.
MaskedString decode_string(int l, uint64_t code) {
  MaskedString m;
  int ny = 0;
  for (int i = l - 1; i >= 0; --i) {
    const int p = static_cast<int>(code & 3);
    code >>= 2;
    if (p == 1 || p == 2) m.xmask |= site_bit(l, i);
    if (p == 2 || p == 3) m.zmask |= site_bit(l, i);
    if (p == 2) ++ny;
  }
  static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                               cplx(0, -1)};
  m.phase = ipow[ny % 4];
  return m;
}

}  // namespace

Mat PauliHamiltonian::to_dense() const {
  const long dim = 1L << l_sites;
  Mat h = Mat::Zero(dim, dim);
  for (const Term& t : terms) {
    if (static_cast<int>(t.ops.size()) != l_sites)
      throw ValidationError("to_dense: term length mismatch");
    const MaskedString m = to_masks(l_sites, t.ops);
    for (long b = 0; b < dim; ++b) {
      const cplx amp = t.coeff * m.phase *
                       z_sign(static_cast<uint64_t>(b), m.zmask);
      h(static_cast<long>(b ^ static_cast<long>(m.xmask)), b) += amp;
    }
  }
  return h;
}

PauliHamiltonian cluster_ising(double g_zxz, double g_zz, double g_x, int l) {
  if (l < 3) throw ValidationError("cluster_ising: l >= 3");
  PauliHamiltonian h;
  h.l_sites = l;
  for (int i = 0; i < l; ++i) {
    std::vector<uint8_t> zxz(static_cast<size_t>(l), 0);
    zxz[static_cast<size_t>(i)] = 3;
    zxz[static_cast<size_t>((i + 1) % l)] = 1;
    zxz[static_cast<size_t>((i + 2) % l)] = 3;
    h.terms.push_back({g_zxz, zxz});

    std::vector<uint8_t> zz(static_cast<size_t>(l), 0);
    zz[static_cast<size_t>(i)] = 3;
    zz[static_cast<size_t>((i + 1) % l)] = 3;
    h.terms.push_back({-g_zz, zz});

    std::vector<uint8_t> x(static_cast<size_t>(l), 0);
    x[static_cast<size_t>(i)] = 1;
    h.terms.push_back({-g_x, x});
  }
  return h;
}

PauliHamiltonian cluster_ising_line(double g_c, int l) {
  return cluster_ising(g_c, 2.0, 2.0 - g_c, l);
}

PauliHamiltonian skeleton_hamiltonian_chi2(double g, int l) {
  PauliHamiltonian h = cluster_ising(0.0, 0.0, 0.0, l);
  h.terms.clear();
  const double a = (g - 1.0) * (g - 1.0);
  const double b = 2.0 * (g * g - 1.0);
  const double c = (1.0 + g) * (1.0 + g);
  for (int i = 0; i < l; ++i) {
    std::vector<uint8_t> zxz(static_cast<size_t>(l), 0);
    zxz[static_cast<size_t>(i)] = 3;
    zxz[static_cast<size_t>((i + 1) % l)] = 1;
    zxz[static_cast<size_t>((i + 2) % l)] = 3;
    h.terms.push_back({a, zxz});
    std::vector<uint8_t> zz(static_cast<size_t>(l), 0);
    zz[static_cast<size_t>(i)] = 3;
    zz[static_cast<size_t>((i + 1) % l)] = 3;
    h.terms.push_back({b, zz});
    std::vector<uint8_t> x(static_cast<size_t>(l), 0);
    x[static_cast<size_t>(i)] = 1;
    h.terms.push_back({-c, x});
  }
  return h;
}

Statevector ground_state(const PauliHamiltonian& h, bool parity_tiebreak) {
  if (h.l_sites < 1 || h.l_sites > 14)
    throw ResourceError("ground_state: l outside dense-ED range");
  Mat hd = h.to_dense();
  if (parity_tiebreak) {
    // Split degenerate ground spaces toward the parity-even combination.
    const long dim = 1L << h.l_sites;
    const uint64_t all = static_cast<uint64_t>(dim - 1);
    for (long b = 0; b < dim; ++b)
      hd(static_cast<long>(static_cast<uint64_t>(b) ^ all), b) += -1e-8;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hd);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("ground_state: eigensolver failed");
  Statevector psi;
  psi.l_sites = h.l_sites;
  psi.amplitudes = es.eigenvectors().col(0);
  psi.amplitudes.normalize();
  // Fix the global phase: largest-modulus amplitude real positive.
  long imax = 0;
  double vmax = 0.0;
  for (long i = 0; i < psi.amplitudes.size(); ++i)
    if (std::abs(psi.amplitudes(i)) > vmax) {
      vmax = std::abs(psi.amplitudes(i));
      imax = i;
    }
  psi.amplitudes *= std::abs(psi.amplitudes(imax)) / psi.amplitudes(imax);
  return psi;
}

double pauli_expectation(const Statevector& psi, uint64_t xmask,
                         uint64_t zmask) {
  const uint64_t dim = 1ULL << psi.l_sites;
  const int ny = std::popcount(xmask & zmask);
  static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                               cplx(0, -1)};
  const cplx phase = ipow[ny % 4];
  cplx acc = 0.0;
  for (uint64_t b = 0; b < dim; ++b)
    acc += std::conj(psi.amplitudes(static_cast<long>(b ^ xmask))) *
           z_sign(b, zmask) * psi.amplitudes(static_cast<long>(b));
  return (phase * acc).real();
}

double sre_pure(const Statevector& psi, int n, bool z2_filter) {
  if (n < 2) throw ValidationError("sre_pure: n >= 2");
  const int l = psi.l_sites;
  const uint64_t nstr = 1ULL << (2 * l);
  const uint64_t dim = 1ULL << l;
  const Vec& a = psi.amplitudes;

  const long double total = parallel_sum(nstr, [&](uint64_t code) -> long double {
    const MaskedString m = decode_string(l, code);
    // X^{(x)L} anticommutes with the string when it has an odd number of
    // Y or Z sites (the zmask bits).
    if (z2_filter && (std::popcount(m.zmask) & 1)) return 0.0L;
    cplx acc = 0.0;
    for (uint64_t b = 0; b < dim; ++b)
      acc += std::conj(a(static_cast<long>(b ^ m.xmask))) *
             z_sign(b, m.zmask) * a(static_cast<long>(b));
    const double ev = (m.phase * acc).real();
    long double p = ev * ev;  // <P>^2
    long double out = p;
    for (int k = 1; k < n; ++k) out *= p;
    return out;  // <P>^{2n}
  });
  return std::log(static_cast<double>(total / static_cast<long double>(dim))) /
         (1.0 - n);
}

MixedSreOracle sre_mixed(const Mat& rho, int n) {
  const long dim = rho.rows();
  int l = 0;
  while ((1L << l) < dim) ++l;
  if ((1L << l) != dim) throw ValidationError("sre_mixed: dimension not 2^l");
  const uint64_t nstr = 1ULL << (2 * l);

  const long double total = parallel_sum(nstr, [&](uint64_t code) -> long double {
    const MaskedString m = decode_string(l, code);
    cplx acc = 0.0;
    for (long b = 0; b < dim; ++b)
      acc += z_sign(static_cast<uint64_t>(b), m.zmask) *
             rho(b, static_cast<long>(static_cast<uint64_t>(b) ^ m.xmask));
    const double ev = (m.phase * acc).real();
    long double p = ev * ev;
    long double out = p;
    for (int k = 1; k < n; ++k) out *= p;
    return out;
  });

  MixedSreOracle out;
  out.m = std::log(static_cast<double>(total / static_cast<long double>(dim))) /
          (1.0 - n);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  double trn = 0.0;
  for (long i = 0; i < dim; ++i) {
    const double p = std::max(0.0, es.eigenvalues()(i));
    trn += std::pow(p, n);
  }
  out.s_n = std::log(trn) / (1.0 - n);
  out.m_tilde = out.m - out.s_n;
  out.witness = out.m_tilde - 2.0 * out.s_n;
  return out;
}

Mat partial_trace_front(const Statevector& psi, int keep) {
  if (keep < 1 || keep >= psi.l_sites)
    throw ValidationError("partial_trace_front: bad block size");
  const long rest = 1L << (psi.l_sites - keep);
  const long dim = 1L << keep;
  Mat rho = Mat::Zero(dim, dim);
  for (long a = 0; a < dim; ++a)
    for (long b = 0; b < dim; ++b) {
      cplx acc = 0.0;
      for (long r = 0; r < rest; ++r)
        acc += psi.amplitudes(a * rest + r) *
               std::conj(psi.amplitudes(b * rest + r));
      rho(a, b) = acc;
    }
  return rho;
}

Mat partial_trace_block(const Statevector& psi, int start, int keep) {
  if (keep < 1 || keep >= psi.l_sites || start < 0)
    throw ValidationError("partial_trace_block: bad geometry");
  const int l = psi.l_sites;
  const long dim = 1L << keep;
  const long rest = 1L << (l - keep);
  Mat rho = Mat::Zero(dim, dim);
  // Map (block index a, environment index r) to a full basis index.
  auto assemble = [&](long a, long r) -> long {
    uint64_t full = 0;
    for (int site = 0; site < l; ++site) {
      const int rel = ((site - start) % l + l) % l;
      uint64_t bit;
      if (rel < keep)
        bit = (static_cast<uint64_t>(a) >> (keep - 1 - rel)) & 1;
      else
        bit = (static_cast<uint64_t>(r) >> (l - keep - 1 - (rel - keep))) & 1;
      if (bit) full |= site_bit(l, site);
    }
    return static_cast<long>(full);
  };
  for (long a = 0; a < dim; ++a)
    for (long b = 0; b < dim; ++b) {
      cplx acc = 0.0;
      for (long r = 0; r < rest; ++r)
        acc += psi.amplitudes(assemble(a, r)) *
               std::conj(psi.amplitudes(assemble(b, r)));
      rho(a, b) = acc;
    }
  return rho;
}

double mutual_sre_ring(const Statevector& psi, int ell, int n) {
  if (ell < 1 || ell >= psi.l_sites)
    throw ValidationError("mutual_sre_ring: bad block size");
  const Mat rho_a = partial_trace_front(psi, ell);
  const Mat rho_b = partial_trace_block(psi, ell, psi.l_sites - ell);
  const double m_a = sre_mixed(rho_a, n).m;
  const double m_b = sre_mixed(rho_b, n).m;
  const double m_full = sre_pure(psi, n);
  return m_a + m_b - m_full;
}

double mutual_sre_ring_tilde(const Statevector& psi, int ell, int n) {
  if (ell < 1 || ell >= psi.l_sites)
    throw ValidationError("mutual_sre_ring_tilde: bad block size");
  const MixedSreOracle a = sre_mixed(partial_trace_front(psi, ell), n);
  const MixedSreOracle b =
      sre_mixed(partial_trace_block(psi, ell, psi.l_sites - ell), n);
  // M~ of the pure joint state is just M (its Renyi entropy vanishes).
  return a.m_tilde + b.m_tilde - sre_pure(psi, n);
}

Delta4Fit fit_delta4(
    const std::vector<std::vector<std::pair<int, double>>>& ring_data,
    const std::vector<int>& ls) {
  if (ring_data.size() != ls.size() || ring_data.empty())
    throw ValidationError("fit_delta4: data/L mismatch");
  auto line_fit = [](const std::vector<std::pair<double, double>>& pts) {
    const double np = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double det = np * sxx - sx * sx;
    if (std::abs(det) < 1e-14)
      throw ValidationError("fit_delta4: degenerate fit");
    return (np * sxy - sx * sy) / det;
  };

  Delta4Fit out;
  std::vector<std::pair<double, double>> pooled, vs_inv_l;
  for (size_t k = 0; k < ls.size(); ++k) {
    const int l = ls[k];
    std::vector<std::pair<double, double>> pts;
    for (auto [ell, w] : ring_data[k]) {
      const double chord = (l / M_PI) * std::sin(M_PI * ell / l);
      pts.emplace_back(std::log(chord), w);
      pooled.emplace_back(std::log(chord), w);
    }
    if (pts.size() < 2)
      throw ValidationError("fit_delta4: need >= 2 points per ring");
    const double slope = line_fit(pts);
    out.per_l_slopes.push_back(slope);
    vs_inv_l.emplace_back(1.0 / l, slope);
  }
  out.joint = line_fit(pooled);
  if (vs_inv_l.size() >= 2) {
    const double a = line_fit(vs_inv_l);
    // intercept of slope(L) = s_inf + a / L
    double sx = 0, sy = 0;
    for (auto [x, y] : vs_inv_l) sx += x, sy += y;
    out.extrapolated = (sy - a * sx) / static_cast<double>(vs_inv_l.size());
  } else {
    out.extrapolated = out.per_l_slopes.front();
  }
  return out;
}

// ---------------------------------------------------- iMPS window oracles

namespace {

// Recursive sum over 4^{remaining} Pauli channels: v is the partial right
// contraction; site matrices are supplied per position.
void window_recurse(const std::vector<const std::array<Mat, 4>*>& site_e,
                    size_t pos, const Vec& l, const Vec& v, int n,
                    long double& total) {
  if (pos == site_e.size()) {
    // |.|^2 rather than Re(.)^2: a residual transfer-eigenvalue phase
    // multiplies the raw contraction but drops out of the modulus.
    const double p_raw = std::norm((l.transpose() * v)(0, 0));
    long double p = p_raw;
    long double out = p;
    for (int k = 1; k < n; ++k) out *= p;
    total += out;
    return;
  }
  const auto& es = *site_e[site_e.size() - 1 - pos];  // fill right to left
  for (int alpha = 0; alpha < 4; ++alpha)
    window_recurse(site_e, pos + 1, l, es[static_cast<size_t>(alpha)] * v, n,
                   total);
}

std::array<Mat, 4> unitary_channels(const std::array<Mat, 4>& e,
                                    const Eigen::Matrix2cd& u) {
  const auto& sigma = pauli_matrices();
  std::array<Mat, 4> out;
  for (int a = 0; a < 4; ++a) {
    Mat m = Mat::Zero(e[0].rows(), e[0].cols());
    for (int b = 0; b < 4; ++b) {
      const double c = ((sigma[static_cast<size_t>(b)] * u.adjoint() *
                         sigma[static_cast<size_t>(a)] * u)
                            .trace() *
                        0.5)
                           .real();
      if (std::abs(c) > 1e-15) m += c * e[static_cast<size_t>(b)];
    }
    out[static_cast<size_t>(a)] = m;
  }
  return out;
}

}  // namespace

double window_sre(const ImpsState& state, int n_sites, int n) {
  if (n_sites < 1 || n_sites > 10)
    throw ResourceError("window_sre: window too large for brute force");
  PauliTransferTensor pt = pauli_tensor(state);
  std::vector<const std::array<Mat, 4>*> sites(static_cast<size_t>(n_sites),
                                               &pt.e);
  long double total = 0.0L;
  window_recurse(sites, 0, state.l, state.r, n, total);
  const long double norm = std::pow(2.0L, n_sites);
  return std::log(static_cast<double>(total / norm)) / (1.0 - n);
}

double window_sre_perturbed(const ImpsState& state, int n_sites, int n,
                            const Eigen::Matrix2cd& u,
                            const std::vector<int>& sites_u) {
  if (n_sites < 1 || n_sites > 10)
    throw ResourceError("window_sre_perturbed: window too large");
  PauliTransferTensor pt = pauli_tensor(state);
  const std::array<Mat, 4> eu = unitary_channels(pt.e, u);
  std::vector<const std::array<Mat, 4>*> sites(static_cast<size_t>(n_sites),
                                               &pt.e);
  for (int s : sites_u) {
    if (s < 0 || s >= n_sites)
      throw ValidationError("window_sre_perturbed: site out of window");
    sites[static_cast<size_t>(s)] = &eu;
  }
  long double total = 0.0L;
  window_recurse(sites, 0, state.l, state.r, n, total);
  const long double norm = std::pow(2.0L, n_sites);
  return std::log(static_cast<double>(total / norm)) / (1.0 - n);
}

double separated_window_sre(const ImpsState& state, int n_sites, int r,
                            int n) {
  if (n_sites < 1 || 2 * n_sites > 10)
    throw ResourceError("separated_window_sre: windows too large");
  if (r < 0) throw ValidationError("separated_window_sre: r >= 0");
  PauliTransferTensor pt = pauli_tensor(state);
  Mat egap = Mat::Identity(pt.bond, pt.bond);
  for (int k = 0; k < r; ++k) egap = pt.e[0] * egap;

  // Right window channels enumerated first, then the gap, then the left
  // window; identity on the gap carries no 1/2 weight.
  long double total = 0.0L;
  // Enumerate right-window strings into cached vectors, then recurse left.
  std::vector<Vec> right_partials;
  std::function<void(size_t, const Vec&)> build_right =
      [&](size_t pos, const Vec& v) {
        if (pos == static_cast<size_t>(n_sites)) {
          right_partials.push_back(egap * v);
          return;
        }
        for (int alpha = 0; alpha < 4; ++alpha)
          build_right(pos + 1, pt.e[static_cast<size_t>(alpha)] * v);
      };
  build_right(0, state.r);
  for (const Vec& v : right_partials) {
    std::vector<const std::array<Mat, 4>*> left_sites(
        static_cast<size_t>(n_sites), &pt.e);
    window_recurse(left_sites, 0, state.l, v, n, total);
  }
  const long double norm = std::pow(2.0L, 2 * n_sites);
  return std::log(static_cast<double>(total / norm)) / (1.0 - n);
}

double energy_density(
    const ImpsState& state,
    const std::vector<std::pair<double, std::vector<uint8_t>>>& site_terms) {
  if (!state.normalized)
    throw ValidationError("energy_density: normalize the state first");
  PauliTransferTensor pt = pauli_tensor(state);
  double e = 0.0;
  for (const auto& [coeff, ops] : site_terms) {
    Vec v = state.r;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      v = pt.e[static_cast<size_t>(*it)] * v;
    const cplx lam_pow = std::pow(state.lambda1, static_cast<int>(ops.size()));
    e += coeff * ((state.l.transpose() * v)(0, 0) / lam_pow).real();
  }
  return e;
}

Statevector imps_ring_statevector(const ImpsState& state, int l) {
  if (l < 1 || l > 16) throw ResourceError("imps_ring_statevector: l range");
  if (state.d != 2)
    throw ValidationError("imps_ring_statevector: qubit states only");
  const long dim = 1L << l;
  Statevector psi;
  psi.l_sites = l;
  psi.amplitudes.resize(dim);
  for (long b = 0; b < dim; ++b) {
    Mat m = Mat::Identity(state.chi, state.chi);
    for (int site = 0; site < l; ++site) {
      const int s =
          (static_cast<uint64_t>(b) & site_bit(l, site)) ? 1 : 0;
      m = m * state.A[static_cast<size_t>(s)];
    }
    psi.amplitudes(b) = m.trace();
  }
  const double nrm = psi.amplitudes.norm();
  if (nrm < 1e-300)
    throw ValidationError("imps_ring_statevector: vanishing ring state");
  psi.amplitudes /= nrm;
  return psi;
}

}  // namespace msp
