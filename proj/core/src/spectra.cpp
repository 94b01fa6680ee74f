#include "magic_spectra/spectra.hpp"

#include <cmath>
#include <limits>

#include "magic_spectra/io.hpp"

namespace msp {

double sre_density(const ReplicaOperator& op, double tol, unsigned seed) {
  EigenPairs ep = top_k_eigen(op.handle(), 1, tol, seed);
  const double mu1 = std::abs(ep.values(0));
  if (mu1 <= 0.0) throw ConvergenceError("sre_density: vanishing mu_1");
  return std::log(mu1) / (1.0 - op.n);
}

ReplicaSpectrum decompose(const ReplicaOperator& op, int k, const Vec& ll,
                          const Vec& rr, double tol, unsigned seed) {
  if (ll.size() != op.dim || rr.size() != op.dim)
    throw ValidationError("decompose: boundary size mismatch");
  ReplicaSpectrum spec;
  spec.n = op.n;
  spec.pairs = top_k_eigen(op.handle(), k, tol, seed);
  spec.groups = group_degenerate(spec.pairs.values, 1e-8);
  // Retain only groups fully contained in the computed window: the last
  // group may be cut off by k.
  while (!spec.groups.empty()) {
    const auto& g = spec.groups.back();
    bool complete = true;
    // A trailing group is suspect when its smallest member is the very last
    // computed eigenvalue and more of the spectrum may continue the cluster.
    if (spec.groups.size() > 1) {
      for (int idx : g)
        if (idx == spec.pairs.values.size() - 1) complete = false;
    }
    if (complete || static_cast<long>(spec.pairs.values.size()) >= op.dim) break;
    spec.groups.pop_back();
  }
  if (spec.groups.empty())
    throw ConvergenceError("decompose: no complete eigenvalue group");

  for (const auto& g : spec.groups) {
    spec.mu.push_back(spec.pairs.values(g.front()));
    // Group projector overlap c = sum_i (LL^T r_i)(l_i^T RR); invariant under
    // basis changes inside the group once l,r are binormalized.
    cplx c = 0.0;
    for (int idx : g) {
      const cplx a = (ll.transpose() * spec.pairs.right.col(idx))(0, 0);
      const cplx b = (spec.pairs.left.col(idx).transpose() * rr)(0, 0);
      c += a * b;
    }
    if (std::abs(c.imag()) > 1e-7 * std::max(1.0, std::abs(c)))
      spec.degenerate_boundary = true;
    spec.c.push_back(c.real());
  }
  return spec;
}

double subsystem_sre(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
                     int n_sites) {
  if (n_sites < 1) throw ValidationError("subsystem_sre: N >= 1");
  if (ll.size() != op.dim || rr.size() != op.dim)
    throw ValidationError("subsystem_sre: boundary size mismatch");
  Vec v = rr;
  double log_scale = 0.0;
  for (int s = 0; s < n_sites; ++s) {
    v = op.apply(v);
    const double nrm = v.norm();
    if (nrm < 1e-300)
      throw ConvergenceError("subsystem_sre: vanishing contraction");
    v /= nrm;
    log_scale += std::log(nrm);
  }
  const cplx amp = (ll.transpose() * v)(0, 0);
  if (std::abs(amp) < 1e-300)
    throw ConvergenceError("subsystem_sre: vanishing boundary overlap");
  return (log_scale + std::log(std::abs(amp))) / (1.0 - op.n);
}

SreExpansion sre_expansion(const ReplicaSpectrum& spec, int n_sites) {
  SreExpansion ex;
  const double mu1 = spec.mu1();
  ex.leading = n_sites * std::log(mu1) / (1.0 - spec.n);
  const double c1 = spec.c1();
  if (c1 <= 0.0)
    throw ConvergenceError("sre_expansion: non-positive dominant overlap");
  ex.c1_term = std::log(c1) / (1.0 - spec.n);
  cplx f = 0.0;
  const cplx m1 = spec.mu.at(0);
  for (size_t i = 1; i < spec.mu.size(); ++i)
    f += std::pow(spec.mu[i] / m1, n_sites) * spec.c[i];
  if (std::abs(f.imag()) > 1e-9 * std::max(1.0, std::abs(f)))
    throw ConvergenceError("sre_expansion: non-real subleading sum");
  ex.f_n = f.real();
  return ex;
}

double sre_correlation_length(const ReplicaSpectrum& spec) {
  if (spec.mu.size() < 2) return 0.0;
  const double m1 = std::abs(spec.mu[0]);
  const double m2 = std::abs(spec.mu[1]);
  if (m2 < 1e-14 * m1) return 0.0;
  const double ratio = m2 / m1;
  if (ratio >= 1.0 - 1e-12) return std::numeric_limits<double>::infinity();
  return -1.0 / std::log(ratio);
}

MixedSre mixed_sre(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
                   int n_sites, double s2_block) {
  MixedSre out;
  out.m = subsystem_sre(op, ll, rr, n_sites);
  out.s = s2_block;
  out.m_tilde = out.m - out.s;
  out.density = out.m_tilde / n_sites;
  return out;
}

double witness(const ReplicaOperator& op, const Vec& ll, const Vec& rr,
               int n_sites, double s2_block) {
  MixedSre mx = mixed_sre(op, ll, rr, n_sites, s2_block);
  return mx.m_tilde - 2.0 * s2_block;
}

MutualAdjacent mutual_sre_adjacent(const ReplicaOperator& op, const Vec& ll,
                                   const Vec& rr, int ell, double s2_ell,
                                   double s2_2ell) {
  MutualAdjacent out;
  const double m1 = subsystem_sre(op, ll, rr, ell);
  const double m2 = subsystem_sre(op, ll, rr, 2 * ell);
  out.w = 2.0 * m1 - m2;
  out.i = 2.0 * s2_ell - s2_2ell;
  out.l = out.w - out.i;
  return out;
}

MutualInfinite mutual_sre_infinite(const ReplicaSpectrum& spec,
                                   double s2_block) {
  MutualInfinite out;
  const double c1 = spec.c1();
  if (c1 <= 0.0)
    throw ConvergenceError("mutual_sre_infinite: non-positive c_1");
  out.w_inf = std::log(c1) / (1.0 - spec.n);
  out.l_inf = out.w_inf - s2_block;
  return out;
}

double separated_subsystem_sre(const ReplicaOperator& op, const Vec& ll,
                               const Vec& rr, int n_sites, int r) {
  if (n_sites < 1 || r < 0)
    throw ValidationError("separated_subsystem_sre: bad geometry");
  Vec v = rr;
  double log_scale = 0.0;
  auto step = [&](const Vec& w) {
    const double nrm = w.norm();
    if (nrm < 1e-300)
      throw ConvergenceError("separated_subsystem_sre: vanishing contraction");
    log_scale += std::log(nrm);
    return Vec(w / nrm);
  };
  for (int s = 0; s < n_sites; ++s) v = step(op.apply(v));
  for (int s = 0; s < r; ++s) v = step(op.apply_identity(v));
  for (int s = 0; s < n_sites; ++s) v = step(op.apply(v));
  const cplx amp = (ll.transpose() * v)(0, 0);
  if (std::abs(amp) < 1e-300)
    throw ConvergenceError("separated_subsystem_sre: vanishing overlap");
  return (log_scale + std::log(std::abs(amp))) / (1.0 - op.n);
}

FitResult fit_w_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw ValidationError("fit_w_scaling: need at least 3 points");
  const double np = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = np * sxx - sx * sx;
  if (std::abs(det) < 1e-14)
    throw ValidationError("fit_w_scaling: degenerate abscissae");
  FitResult out;
  out.slope = (np * sxy - sx * sy) / det;
  out.intercept = (sy - out.slope * sx) / np;
  double ss = 0.0;
  for (auto [x, y] : points) {
    const double r = y - (out.slope * x + out.intercept);
    ss += r * r;
  }
  out.residual = std::sqrt(ss / np);
  return out;
}

SreReport make_report(const ImpsState& state, int n, int chi_t, int k_groups,
                      double tol, unsigned seed) {
  ImpsState st = state.normalized ? state : normalize(state);
  PauliTransferTensor pt = pauli_tensor(st);
  PauliMps pm = (chi_t > 0 && chi_t < pt.bond)
                    ? truncate_pauli_mps(pt, chi_t)
                    : exact_pauli_mps(st);
  ReplicaOperator op = replica_operator(pm, n);
  auto [ll, rr] = replicated_boundary(st, pm, n);
  // Ask for a few extra eigenvalues beyond the requested group count so the
  // incomplete-trailing-group trim still leaves k_groups usable groups.
  const int k = std::max(3 * k_groups, 12);
  ReplicaSpectrum spec = decompose(op, k, ll, rr, tol, seed);

  SreReport rep;
  rep.n = n;
  rep.chi = st.chi;
  rep.chi_t = pm.tensor.bond;
  rep.degenerate = st.degenerate || spec.degenerate_boundary;
  rep.m_n = std::log(spec.mu1()) / (1.0 - n);
  rep.xi_sre = sre_correlation_length(spec);
  // Block entropy for the infinite-separation limit: two-cut value, which
  // for large blocks saturates to twice the half-infinite cut entropy.
  const double s2_block = 2.0 * renyi2_half_infinite(st);
  MutualInfinite mi = mutual_sre_infinite(spec, s2_block);
  rep.l_inf = mi.l_inf;
  rep.w_inf = mi.w_inf;
  rep.c = spec.c;
  return rep;
}

}  // namespace msp
