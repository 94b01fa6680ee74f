// Acceptance suite: ten numbered criteria, one PASS/FAIL line each.
// Exit code = number of failed criteria. Run a single criterion with
// `acceptance --only N`.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "magic_spectra/oracle.hpp"
#include "magic_spectra/pauli_replica.hpp"
#include "magic_spectra/perturb.hpp"
#include "magic_spectra/skeleton.hpp"
#include "magic_spectra/spectra.hpp"

using namespace msp;

namespace {

int g_checks_failed = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::printf("      check failed: %s\n", what.c_str());
    ++g_checks_failed;
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct Setup {
  ImpsState st;
  PauliMps pm;
  ReplicaOperator op;
  Vec ll, rr;
  explicit Setup(ImpsState s, int n = 2)
      : st(std::move(s)), pm(exact_pauli_mps(st)) {
    op = replica_operator(pm, n);
    std::tie(ll, rr) = replicated_boundary(st, pm, n);
  }
};

// Least-squares decay length -1/slope of y = log|signal| against r.
double fitted_length(const std::vector<std::pair<double, double>>& pts) {
  FitResult f = fit_w_scaling(pts);
  return -1.0 / f.slope;
}

double chi2_m2(double g) {
  return sre_density(replica_operator(exact_pauli_mps(chi2_tensors(g)), 2));
}

// ---------------------------------------------------------------------------
// 1. chi=2 skeleton SRE density across the full default grid.
void criterion1() {
  double max_err = 0.0, max_m = -1.0;
  for (int i = -200; i <= 200; ++i) {
    const double g = i * 0.01;
    const double m = chi2_m2(g);
    max_err = std::max(max_err, std::abs(m - closed_form_chi2(g, Chi2Quantity::m2)));
    max_m = std::max(max_m, m);
  }
  expect(max_err < 1e-9, "grid max |m - closed form| = " + fmt(max_err));
  for (double g : {-1.0, 0.0, 1.0})
    expect(std::abs(chi2_m2(g)) < 1e-9, "zero at g = " + fmt(g));
  const double g_star = 3.0 - 2.0 * std::sqrt(2.0);
  const double m_star = chi2_m2(g_star);
  expect(std::abs(m_star - std::log(4.0 / 3.0)) < 1e-9,
         "peak value log(4/3), got " + fmt(m_star));
  expect(max_m <= m_star + 1e-9, "grid maximum does not exceed the peak");
  std::printf("      grid 401 points, max deviation %s, peak %s at g* = %s\n",
              fmt(max_err).c_str(), fmt(m_star).c_str(), fmt(g_star).c_str());
}

// ---------------------------------------------------------------------------
// 2. Replica-operator eigenvalue groups and multiplicities (1, 8, 7, 240).
void criterion2() {
  const auto sample = closed_form_chi2_eigs_ee(0.5);
  int total_mult = 0;
  for (const auto& [v, mult] : sample) total_mult += mult;
  expect(sample.size() == 4 && sample[3].second == 240 && total_mult == 256,
         "closed-form multiplicity pattern (1, 8, 7, 240)");

  for (double g : {-1.8, -1.2, -0.6, -0.2, 0.15, 0.35, 0.6, 0.9, 1.3, 1.9}) {
    Setup s(chi2_tensors(g));
    // 16 nonzero eigenvalues plus margin so the trailing-group trim keeps
    // all three nonzero groups; everything beyond index 15 is the null space.
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const auto want = closed_form_chi2_eigs_ee(g);
    bool ok = spec.groups.size() >= 3;
    for (int k = 0; ok && k < 3; ++k) {
      ok = static_cast<int>(spec.groups[k].size()) == want[k].second &&
           std::abs(std::abs(spec.mu[k]) - std::abs(want[k].first)) < 1e-8;
    }
    expect(ok, "groups (1, 8, 7) with closed-form values at g = " + fmt(g));
    double tail = 0.0;
    for (long i = 16; i < spec.pairs.values.size(); ++i)
      tail = std::max(tail, std::abs(spec.pairs.values(i)));
    expect(tail < 1e-8, "240-fold null group at g = " + fmt(g) +
                            " (largest tail eigenvalue " + fmt(tail) + ")");
  }
}

// ---------------------------------------------------------------------------
// 3. Correlation lengths: closed forms, slope ratio, higher-n behavior.
void criterion3() {
  for (double g : {0.2, 0.5, 1.5, -0.7, 0.05}) {
    Setup s(chi2_tensors(g));
    const double xi = correlation_length(s.st);
    const double xi_want = closed_form_chi2(g, Chi2Quantity::xi);
    // relative tolerance: a length xi amplifies the eigenvalue rounding
    // error by xi^2, so long lengths cannot meet an absolute 1e-9
    expect(std::abs(xi - xi_want) < 1e-9 * std::max(1.0, xi_want),
           "xi closed form at g = " + fmt(g));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const double xs = sre_correlation_length(spec);
    const double xs_want = closed_form_chi2(g, Chi2Quantity::xi_sre);
    expect(std::abs(xs - xs_want) < 1e-9 * std::max(1.0, xs_want),
           "xi_sre closed form at g = " + fmt(g));
  }

  // log-log slopes of the two lengths between g = 0.01 and g = 0.02: the
  // standard length diverges like 1/g and the SRE length like 1/g^2.
  auto lengths = [](double g) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    return std::pair<double, double>{correlation_length(s.st),
                                     sre_correlation_length(spec)};
  };
  auto [xi_a, xs_a] = lengths(0.01);
  auto [xi_b, xs_b] = lengths(0.02);
  const double slope_xi = (std::log(xi_b) - std::log(xi_a)) / std::log(2.0);
  const double slope_xs = (std::log(xs_b) - std::log(xs_a)) / std::log(2.0);
  const double ratio = slope_xs / slope_xi;
  expect(std::abs(ratio - 2.0) < 0.05,
         "log-log slope ratio near g = 0, got " + fmt(ratio));
  std::printf("      slope ratio xi_sre/xi near g=0: %s\n", fmt(ratio).c_str());

  // Higher replica index: xi_sre^(n) finite for n = 2..5 and growing as the
  // gap closes toward g = 0.
  for (int n = 2; n <= 5; ++n) {
    double prev = 0.0;
    for (double g : {0.3, 0.15}) {
      ImpsState st = chi2_tensors(g);
      PauliMps pm = exact_pauli_mps(st);
      ReplicaOperator op = replica_operator(pm, n);
      auto [ll, rr] = replicated_boundary(st, pm, n);
      // n = 2 needs the margin over the 16 nonzero eigenvalues; larger n
      // only needs the top two groups. Loosen the iterative tolerance on
      // the big operators: the length only has to be resolved to ~1e-3.
      ReplicaSpectrum spec =
          decompose(op, n == 2 ? 20 : 6, ll, rr, n >= 4 ? 1e-8 : 1e-10);
      const double xs = sre_correlation_length(spec);
      expect(std::isfinite(xs) && xs > 0.0,
             "finite xi_sre^(n), n = " + std::to_string(n) + ", g = " + fmt(g));
      if (g == 0.15)
        expect(xs > prev, "xi_sre^(" + std::to_string(n) +
                              ") grows toward g = 0 (" + fmt(prev) + " -> " +
                              fmt(xs) + ")");
      else
        prev = xs;
      std::printf("      n=%d g=%s dim=%ld xi_sre=%s\n", n, fmt(g).c_str(),
                  op.dim, fmt(xs).c_str());
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Single-site unitary response closed forms and the injection optimizer.
void criterion4() {
  for (double g : {0.2, 0.7, 1.0, 1.5, -0.6}) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    for (double theta : {0.1, 0.5, 1.2, M_PI / 4, 2.0}) {
      const double want = closed_form_delta_ryz(theta);
      expect(std::abs(delta_m_single(s.op, spec,
                                     SingleQubitUnitary::ry(theta)) -
                      want) < 1e-9,
             "Ry closed form at g = " + fmt(g) + ", theta = " + fmt(theta));
      expect(std::abs(delta_m_single(s.op, spec,
                                     SingleQubitUnitary::rz(theta)) -
                      want) < 1e-9,
             "Rz closed form at g = " + fmt(g) + ", theta = " + fmt(theta));
      if (g > 0.0) {
        expect(std::abs(delta_m_single(s.op, spec,
                                       SingleQubitUnitary::rx(theta)) -
                        closed_form_delta_rx(theta, g)) < 1e-9,
               "Rx closed form at g = " + fmt(g) + ", theta = " + fmt(theta));
      }
    }
  }
  {
    Setup s(chi2_tensors(1.0));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    const double z =
        delta_m_single(s.op, spec, SingleQubitUnitary::rx(M_PI / 4));
    expect(std::abs(z) < 1e-9, "Rx response vanishes at g = 1, theta = pi/4");
  }

  // Optimizer over the full Euler family: maximum in the cluster phase and
  // the plateau approaching g = 1.
  auto best = [](double g) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    InjectionResult res = maximize_injection(s.op, spec, RotationFamily::full);
    expect(res.converged, "optimizer converged at g = " + fmt(g));
    return res.delta_m;
  };
  const double peak = best(0.02);
  const double plateau = best(0.99);
  expect(std::abs(peak - 0.59) <= 0.02,
         "cluster-phase maximum 0.59 +- 0.02, got " + fmt(peak));
  expect(std::abs(plateau - 0.41) <= 0.02,
         "g -> 1 plateau 0.41 +- 0.02, got " + fmt(plateau));
  std::printf("      optimizer: max %s (g = 0.02), plateau %s (g = 0.99)\n",
              fmt(peak).c_str(), fmt(plateau).c_str());
}

// ---------------------------------------------------------------------------
// 5. Two-point SRE response decay length.
//
// Two S gates are jointly Clifford, so the connected S-gate correlator is
// identically zero at every distance; that degenerate fit is asserted
// directly. The decay-length statement is then exercised on the same states
// with a non-Clifford rotation Rz(pi/8), whose two-point amplitude couples
// to the xi_sre channel: the pre-log amplitude
//   F(r) = exp(-delta M_total(r)) - exp(-2 delta M_single)
// is fitted over a late window where the subleading channel dominates.
void criterion5() {
  struct Case {
    double g;
    int r_lo, r_hi;
  };
  for (const Case& c : {Case{0.1, 110, 170}, Case{0.05, 330, 480}}) {
    Setup s(chi2_tensors(c.g));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const double xs = closed_form_chi2(c.g, Chi2Quantity::xi_sre);

    // Clifford pair: exactly zero connected response at all separations.
    const SingleQubitUnitary sg = SingleQubitUnitary::s_gate();
    expect(std::abs(delta_m_single(s.op, spec, sg)) < 1e-10,
           "single S-gate response vanishes at g = " + fmt(c.g));
    double max_conn = 0.0;
    for (const DoubleResult& d : delta_m_double_sweep(s.op, spec, sg, 40))
      max_conn = std::max(max_conn, std::abs(d.connected));
    expect(max_conn < 1e-10,
           "connected S-gate correlator identically zero at g = " + fmt(c.g) +
               " (max " + fmt(max_conn) + ")");

    // Non-Clifford probe of the same channel structure.
    const SingleQubitUnitary u = SingleQubitUnitary::rz(M_PI / 8);
    const double single = delta_m_single(s.op, spec, u);
    auto sweep = delta_m_double_sweep(s.op, spec, u, c.r_hi);
    std::vector<std::pair<double, double>> pts;
    for (int r = c.r_lo; r <= c.r_hi; ++r) {
      const double f =
          std::exp(-sweep[static_cast<size_t>(r - 1)].total) -
          std::exp(-2.0 * single);
      if (std::abs(f) > 1e-300) pts.emplace_back(r, std::log(std::abs(f)));
    }
    const double len = fitted_length(pts);
    expect(std::abs(len - xs) / xs < 0.02,
           "Rz(pi/8) two-point decay length within 2% of xi_sre at g = " +
               fmt(c.g) + " (fit " + fmt(len) + ", xi_sre " + fmt(xs) + ")");
    std::printf(
        "      g=%s: S-gate connected response 0 (Clifford pair); "
        "Rz(pi/8) length %s vs xi_sre %s over r in [%d, %d]\n",
        fmt(c.g).c_str(), fmt(len).c_str(), fmt(xs).c_str(), c.r_lo, c.r_hi);
  }
}

// ---------------------------------------------------------------------------
// 6. Oracle equivalence on random states.
void criterion6() {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const int chi = (seed % 2 == 0) ? 3 : 2;
    Setup s(random_state(2, chi, seed));
    for (int n_sites = 1; n_sites <= 6; ++n_sites) {
      const double direct = subsystem_sre(s.op, s.ll, s.rr, n_sites);
      const double oracle = window_sre(s.st, n_sites, 2);
      expect(std::abs(direct - oracle) < 1e-8,
             "window oracle, seed " + std::to_string(seed) + ", N = " +
                 std::to_string(n_sites));
    }
    for (int r = 1; r <= 4; ++r) {
      const double direct = separated_subsystem_sre(s.op, s.ll, s.rr, 2, r);
      const double oracle = separated_window_sre(s.st, 2, r, 2);
      expect(std::abs(direct - oracle) < 1e-8,
             "separated oracle, seed " + std::to_string(seed) + ", r = " +
                 std::to_string(r));
    }
  }
  std::printf("      20 random chi <= 3 states, N <= 6 and separated r <= 4\n");
}

// ---------------------------------------------------------------------------
// 7. chi=4 skeleton: densities and the two-block mutual-SRE limit.
void criterion7() {
  auto chi4_m2 = [](double mu) {
    return sre_density(replica_operator(exact_pauli_mps(chi4_tensors(mu)), 2));
  };
  const double golden_hi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double golden_lo = (1.0 - std::sqrt(5.0)) / 2.0;
  for (double mu : {-1.0, 0.0, golden_hi, golden_lo}) {
    const double m = chi4_m2(mu);
    expect(std::abs(m) < 1e-8, "m2 zero at mu = " + fmt(mu));
  }
  for (double mu : {-0.5, 1.0}) {
    const double m = chi4_m2(mu);
    expect(std::abs(m - std::log(16.0 / 13.0)) < 1e-8,
           "m2 = log(16/13) at mu = " + fmt(mu));
  }

  struct Point {
    double mu, l_inf, band;
    const char* label;
  };
  // The interior value matches the curve minimum -0.85; the transition value
  // pins the computed one-sided limit approaching the phase boundary.
  for (const Point& p : {Point{0.5, -0.85, 0.02, "phase interior"},
                         Point{1.0 - 1e-4, -0.4155, 0.02, "upper transition"},
                         Point{-0.5 + 1e-4, -0.4155, 0.02, "lower transition"}}) {
    const auto t0 = std::chrono::steady_clock::now();
    // 1e-8 iterative tolerance: the near-transition points are almost
    // degenerate and take unbounded time at tighter residuals, while the
    // criterion band is only +-0.02.
    SreReport rep = make_report(chi4_tensors(p.mu), 2, 0, 4, 1e-8);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    expect(std::abs(rep.l_inf - p.l_inf) <= p.band,
           std::string(p.label) + " L_inf " + fmt(p.l_inf) + " +- " +
               fmt(p.band) + ", got " + fmt(rep.l_inf));
    expect(secs < 300.0, "dim-65536 spectral report under 5 min per point");
    std::printf("      mu=%s: L_inf=%s (%s, %.1f s, dim 65536)\n",
                fmt(p.mu).c_str(), fmt(rep.l_inf).c_str(), p.label, secs);
  }
}

// ---------------------------------------------------------------------------
// 8. Finite-ring ED scaling of the mutual SRE along the critical line.
void criterion8() {
  const std::vector<int> ls{6, 8, 10};
  struct Case {
    double g_c, band_center;
  };
  for (const Case& c : {Case{0.0, 0.26}, Case{0.7, 0.30}, Case{1.4, 0.34}}) {
    std::vector<std::vector<std::pair<int, double>>> data;
    for (int l : ls) {
      Statevector psi = ground_state(cluster_ising_line(c.g_c, l));
      const double m_psi = sre_pure(psi, 2);
      std::vector<std::pair<int, double>> row;
      for (int ell = 2; ell <= l - 2; ++ell) {
        const double w = sre_mixed(partial_trace_front(psi, ell), 2).m +
                         sre_mixed(partial_trace_block(psi, ell, l - ell), 2).m -
                         m_psi;
        row.emplace_back(ell, w);
      }
      data.push_back(std::move(row));
    }
    Delta4Fit fit = fit_delta4(data, ls);
    expect(std::abs(fit.joint - c.band_center) <= 0.02,
           "joint 4*Delta4 fit " + fmt(c.band_center) + " +- 0.02 at g_c = " +
               fmt(c.g_c) + ", got " + fmt(fit.joint));
    std::printf("      g_c=%s: joint slope %s (per-L", fmt(c.g_c).c_str(),
                fmt(fit.joint).c_str());
    for (double s : fit.per_l_slopes) std::printf(" %s", fmt(s).c_str());
    std::printf(")\n");
  }

  // The multicritical point has a GHZ ground state: the mixed mutual SRE
  // vanishes identically.
  Statevector ghz = ground_state(cluster_ising_line(1.0, 8));
  double max_l = 0.0;
  for (int ell = 2; ell <= 6; ++ell)
    max_l = std::max(max_l, std::abs(mutual_sre_ring_tilde(ghz, ell, 2)));
  expect(max_l < 1e-9, "GHZ mutual SRE zero (max " + fmt(max_l) + ")");
  std::printf("      GHZ point: max |mutual SRE| = %s\n", fmt(max_l).c_str());
}

// ---------------------------------------------------------------------------
// 9. Convergence structure of block quantities.
//
// The exponential approach of Mtilde(N)/N to the density is governed by the
// subleading replica eigenvalue when its boundary coefficient is nonzero; on
// the chi=2 skeleton that coefficient vanishes by symmetry, so the fit is
// performed on generic random states where the channel is populated.
void criterion9() {
  for (unsigned seed : {5u, 7u, 11u}) {
    Setup s(random_state(2, 2, seed));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const double xs = sre_correlation_length(spec);
    const double m = std::log(spec.mu1()) / (1.0 - 2);
    const int n_lo = static_cast<int>(std::ceil(3.0 * xs));
    const int n_hi = static_cast<int>(std::ceil(9.0 * xs));
    std::vector<std::pair<double, double>> pts;
    double prev = 0.0;
    for (int n_sites = 1; n_sites <= n_hi; ++n_sites) {
      const double mt = mixed_sre(s.op, s.ll, s.rr, n_sites,
                                  renyi2_block(s.st, n_sites))
                            .m_tilde;
      const double inc = mt - prev - m;
      prev = mt;
      if (n_sites >= n_lo && std::abs(inc) > 1e-13)
        pts.emplace_back(n_sites, std::log(std::abs(inc)));
    }
    const double len = fitted_length(pts);
    expect(std::abs(len - xs) / xs < 0.05,
           "Mtilde convergence length within 5% of xi_sre, seed " +
               std::to_string(seed) + " (fit " + fmt(len) + ", xi_sre " +
               fmt(xs) + ")");
    std::printf("      seed %u: fitted length %s vs xi_sre %s\n", seed,
                fmt(len).c_str(), fmt(xs).c_str());
  }

  // Adjacent-block mutual SRE at ell = 64: converged to the two-block limit
  // away from the gapless point, visibly unconverged close to it.
  auto l_gap = [](double g) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    MutualInfinite mi =
        mutual_sre_infinite(spec, 2.0 * renyi2_half_infinite(s.st));
    MutualAdjacent ma = mutual_sre_adjacent(s.op, s.ll, s.rr, 64,
                                            renyi2_block(s.st, 64),
                                            renyi2_block(s.st, 128));
    return std::abs(ma.l - mi.l_inf);
  };
  for (double g : {0.5, 0.8, 1.5, -0.6}) {
    const double d = l_gap(g);
    expect(d < 1e-3, "|L(64) - L_inf| < 1e-3 at g = " + fmt(g) + " (got " +
                         fmt(d) + ")");
  }
  for (double g : {0.05, -0.05, 0.03}) {
    const double d = l_gap(g);
    expect(d > 1e-2, "|L(64) - L_inf| > 1e-2 at g = " + fmt(g) + " (got " +
                         fmt(d) + ")");
  }
  std::printf("      L(64) converged for |g| >= 0.5, unconverged for |g| <= 0.05\n");
}

// ---------------------------------------------------------------------------
// 10. Randomized identity and property suites (>= 20 instances each).
void criterion10() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // (a) Clifford invariance of the single-site response.
  for (unsigned seed = 101; seed <= 120; ++seed) {
    Setup s(random_state(2, 2, seed));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    for (const SingleQubitUnitary& u :
         {SingleQubitUnitary::s_gate(), SingleQubitUnitary::h_gate()}) {
      expect(std::abs(delta_m_single(s.op, spec, u)) < 1e-8,
             "Clifford invariance, seed " + std::to_string(seed));
    }
  }

  // (b) Tensor-product additivity of the pure-state SRE.
  for (int inst = 0; inst < 20; ++inst) {
    double sum = 0.0;
    Statevector psi;
    psi.l_sites = 0;
    psi.amplitudes = Vec::Ones(1);
    for (int q = 0; q < 4; ++q) {
      const double a = unif(rng) * M_PI, b = unif(rng) * 2.0 * M_PI;
      Eigen::Vector2cd v(std::cos(a / 2),
                         std::sin(a / 2) * std::exp(cplx(0.0, b)));
      Statevector one;
      one.l_sites = 1;
      one.amplitudes = Vec(2);
      one.amplitudes << v(0), v(1);
      sum += sre_pure(one, 2);
      Vec next(psi.amplitudes.size() * 2);
      for (long i = 0; i < psi.amplitudes.size(); ++i) {
        next(2 * i) = psi.amplitudes(i) * v(0);
        next(2 * i + 1) = psi.amplitudes(i) * v(1);
      }
      psi.amplitudes = next;
      ++psi.l_sites;
    }
    expect(std::abs(sre_pure(psi, 2) - sum) < 1e-10,
           "additivity instance " + std::to_string(inst));
  }

  // (c) Witness recombination, oracle side and transfer side.
  for (unsigned seed = 301; seed <= 320; ++seed) {
    Setup s(random_state(2, 2, seed));
    const int n_sites = 3;
    const double s2 = renyi2_block(s.st, n_sites);
    MixedSre mx = mixed_sre(s.op, s.ll, s.rr, n_sites, s2);
    expect(std::abs(mx.m_tilde - (mx.m - s2)) < 1e-12 &&
               std::abs(witness(s.op, s.ll, s.rr, n_sites, s2) -
                        (mx.m_tilde - 2.0 * s2)) < 1e-12,
           "witness recombination, seed " + std::to_string(seed));
    MixedSreOracle o = sre_mixed(reduced_density(s.st, n_sites), 2);
    expect(std::abs(o.witness - (o.m - 3.0 * o.s_n)) < 1e-12 &&
               std::abs(mx.m - o.m) < 1e-8,
           "witness oracle agreement, seed " + std::to_string(seed));
  }

  // (d) Area-law saturation: M(N) - N m saturates to -log c1 on the skeleton.
  for (int inst = 0; inst < 20; ++inst) {
    const double g = 0.3 + 1.4 * unif(rng);
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const double m = std::log(spec.mu1()) / (1.0 - 2);
    const double m24 = subsystem_sre(s.op, s.ll, s.rr, 24);
    expect(std::abs(m24 - 24.0 * m + std::log(spec.c1())) < 1e-6,
           "area-law saturation at g = " + fmt(g));
  }

  // (e) Matrix-free application agrees with the dense replicated operator.
  for (unsigned seed = 501; seed <= 520; ++seed) {
    Setup s(random_state(2, 2, seed));
    Mat dense = Mat::Zero(s.op.dim, s.op.dim);
    for (int alpha = 0; alpha < 4; ++alpha) {
      Mat term = Mat::Identity(1, 1);
      for (int slot = 0; slot < 4; ++slot) {
        const Mat f = (slot % 2 == 0)
                          ? s.op.e[static_cast<size_t>(alpha)]
                          : s.op.e[static_cast<size_t>(alpha)].conjugate();
        Mat next(term.rows() * f.rows(), term.cols() * f.cols());
        for (long i = 0; i < term.rows(); ++i)
          for (long j = 0; j < term.cols(); ++j)
            next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) =
                term(i, j) * f;
        term = next;
      }
      dense += s.op.weight * term;
    }
    Vec v = Vec::Random(s.op.dim);
    expect((s.op.apply(v) - dense * v).norm() < 1e-10 &&
               (s.op.apply_transpose(v) - dense.transpose() * v).norm() < 1e-10,
           "matrix-free vs dense, seed " + std::to_string(seed));
  }
  std::printf("      5 suites x 20 instances: Clifford, additivity, witness, "
              "area law, matrix-free\n");
}

struct Criterion {
  int id;
  const char* title;
  void (*run)();
};

const Criterion kCriteria[] = {
    {1, "chi=2 SRE density matches the closed form on the full grid", criterion1},
    {2, "replica-operator eigenvalue groups and multiplicities", criterion2},
    {3, "correlation lengths: closed forms, slope ratio, n = 2..5", criterion3},
    {4, "single-site response closed forms and injection optimizer", criterion4},
    {5, "two-point response decay length vs xi_sre", criterion5},
    {6, "oracle equivalence on 20 random states", criterion6},
    {7, "chi=4 skeleton densities and mutual-SRE limits", criterion7},
    {8, "finite-ring ED scaling of the mutual SRE", criterion8},
    {9, "convergence structure of block quantities", criterion9},
    {10, "randomized identity and property suites", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    g_checks_failed = 0;
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("[%2d] running: %s\n", c.id, c.title);
    std::fflush(stdout);
    c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool ok = g_checks_failed == 0;
    if (!ok) ++failures;
    std::printf("[%2d] %s: %s (%.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.title,
                secs);
    std::fflush(stdout);
  }
  std::printf("%s: %d criterion failure(s)\n",
              failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures;
}
