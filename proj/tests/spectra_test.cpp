#include <doctest.h>

#include <cmath>

#include "magic_spectra/oracle.hpp"
#include "magic_spectra/skeleton.hpp"
#include "magic_spectra/spectra.hpp"

using namespace msp;

namespace {
struct Setup {
  ImpsState st;
  PauliMps pm;
  ReplicaOperator op;
  Vec ll, rr;
  Setup(ImpsState s, int n = 2) : st(std::move(s)), pm(exact_pauli_mps(st)) {
    op = replica_operator(pm, n);
    std::tie(ll, rr) = replicated_boundary(st, pm, n);
  }
};
}  // namespace

TEST_CASE("SRE density matches the closed form on sampled skeleton points") {
  for (double g : {-1.7, -0.8, 0.1, 0.5, 1.0, 1.9}) {
    Setup s(chi2_tensors(g));
    CHECK(std::abs(sre_density(s.op) - closed_form_chi2(g, Chi2Quantity::m2)) <
          1e-10);
  }
}

TEST_CASE("replica spectrum groups carry the closed-form multiplicities") {
  for (double g : {0.35, 0.8, -0.6}) {
    Setup s(chi2_tensors(g));
    // ask for 20 eigenvalues: the 16 nonzero ones plus a margin of zeros so
    // the incomplete-trailing-group trim keeps all three nonzero groups
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    const auto want = closed_form_chi2_eigs_ee(g);
    REQUIRE(spec.groups.size() >= 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(static_cast<int>(spec.groups[k].size()) == want[k].second);
      CHECK(std::abs(std::abs(spec.mu[k]) - std::abs(want[k].first)) < 1e-9);
    }
  }
}

TEST_CASE("dominant overlap c1 matches the squared-form closed expression") {
  for (double g : {0.3, 0.5, 2.0, -0.5, -1.5}) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    CHECK(spec.c1() ==
          doctest::Approx(closed_form_chi2_c1_squared(g)).epsilon(1e-8));
  }
}

TEST_CASE("subsystem SRE equals the brute-force Pauli-window oracle") {
  for (unsigned seed : {41u, 42u, 43u}) {
    Setup s(random_state(2, 2, seed));
    for (int n_sites : {1, 3, 5}) {
      const double direct = subsystem_sre(s.op, s.ll, s.rr, n_sites);
      const double oracle = window_sre(s.st, n_sites, 2);
      CHECK(direct == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("subsystem SRE equals the exact reduced-density mixed-SRE oracle") {
  Setup s(random_state(2, 2, 55));
  for (int n_sites : {2, 4}) {
    Mat rho = reduced_density(s.st, n_sites);
    const double oracle = sre_mixed(rho, 2).m;
    CHECK(subsystem_sre(s.op, s.ll, s.rr, n_sites) ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("three-term spectral expansion reconstructs the exact contraction") {
  Setup s(chi2_tensors(0.5));
  ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
  for (int n_sites : {2, 5, 10, 20}) {
    SreExpansion ex = sre_expansion(spec, n_sites);
    const double exact = subsystem_sre(s.op, s.ll, s.rr, n_sites);
    // M(N) = N log mu1/(1-n) + log(c1 + f)/(1-n); the groups cover the full
    // nonzero spectrum here, so the reconstruction is exact.
    const double rebuilt =
        ex.leading +
        std::log(spec.c1() + ex.f_n) / (1.0 - 2);
    CHECK(rebuilt == doctest::Approx(exact).epsilon(1e-9));
    // first-order form: leading + c1_term + f/(c1 (1-n)) approximates it
    const double x = ex.f_n / spec.c1();
    if (std::abs(x) < 0.5) {
      const double taylor = ex.leading + ex.c1_term - x;
      CHECK(std::abs(taylor - exact) <= x * x + 1e-10);
    }
  }
}

TEST_CASE("SRE correlation length matches the closed form") {
  for (double g : {0.2, 0.5, 1.5, -0.7}) {
    Setup s(chi2_tensors(g));
    ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
    const double want = closed_form_chi2(g, Chi2Quantity::xi_sre);
    CHECK(sre_correlation_length(spec) ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("mixed SRE and witness recombine consistently") {
  Setup s(chi2_tensors(0.45));
  const int n_sites = 6;
  const double s2 = renyi2_block(s.st, n_sites);
  MixedSre mx = mixed_sre(s.op, s.ll, s.rr, n_sites, s2);
  CHECK(mx.m_tilde == doctest::Approx(mx.m - s2).epsilon(1e-12));
  CHECK(witness(s.op, s.ll, s.rr, n_sites, s2) ==
        doctest::Approx(mx.m_tilde - 2.0 * s2).epsilon(1e-12));
  // against the dense mixed oracle
  MixedSreOracle oracle = sre_mixed(reduced_density(s.st, n_sites), 2);
  CHECK(mx.m == doctest::Approx(oracle.m).epsilon(1e-8));
  CHECK(mx.m_tilde == doctest::Approx(oracle.m_tilde).epsilon(1e-7));
}

TEST_CASE("adjacent-block mutual SRE vanishes at stabilizer points") {
  for (double g : {0.0, 1.0}) {
    Setup s(chi2_tensors(g));
    MutualAdjacent ma = mutual_sre_adjacent(s.op, s.ll, s.rr, 4,
                                            renyi2_block(s.st, 4),
                                            renyi2_block(s.st, 8));
    CHECK(std::abs(ma.l) < 1e-9);
  }
}

TEST_CASE("adjacent mutual SRE converges to the boundary-overlap limit") {
  Setup s(chi2_tensors(0.6));
  ReplicaSpectrum spec = decompose(s.op, 16, s.ll, s.rr);
  MutualInfinite mi =
      mutual_sre_infinite(spec, 2.0 * renyi2_half_infinite(s.st));
  MutualAdjacent ma = mutual_sre_adjacent(s.op, s.ll, s.rr, 48,
                                          renyi2_block(s.st, 48),
                                          renyi2_block(s.st, 96));
  CHECK(ma.l == doctest::Approx(mi.l_inf).epsilon(1e-8));
  CHECK(ma.w == doctest::Approx(mi.w_inf).epsilon(1e-8));
}

TEST_CASE("separated subsystem SRE equals the padded Pauli-window oracle") {
  Setup s(random_state(2, 2, 71));
  for (int r : {0, 1, 3}) {
    const double direct = separated_subsystem_sre(s.op, s.ll, s.rr, 2, r);
    const double oracle = separated_window_sre(s.st, 2, r, 2);
    CHECK(direct == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("separated-block connected mutual SRE decays with the standard xi") {
  const double g = 0.5;
  Setup s(chi2_tensors(g));
  const double m1 = subsystem_sre(s.op, s.ll, s.rr, 2);
  const double xi = closed_form_chi2(g, Chi2Quantity::xi);
  // conn(r) = M(two blocks, r) - 2 M(one block); the dominant connected
  // channel carries the subleading transfer eigenvalue in all four replica
  // slots, so the decay length is xi / 4. Beyond r ~ 6 the signal sinks
  // under the 1e-14 rounding floor, so fit the clean short-range window.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int np = 0;
  for (int r = 2; r <= 5; ++r) {
    const double conn =
        std::abs(separated_subsystem_sre(s.op, s.ll, s.rr, 2, r) - 2.0 * m1);
    REQUIRE(conn > 0.0);
    sx += r;
    sy += std::log(conn);
    sxx += double(r) * r;
    sxy += r * std::log(conn);
    ++np;
  }
  const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
  CHECK(-1.0 / slope == doctest::Approx(xi / 4.0).epsilon(0.01));
}

TEST_CASE("fit_w_scaling recovers a synthetic line and rejects short input") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 12; ++i)
    pts.emplace_back(0.3 * i, 1.7 * (0.3 * i) - 0.4);
  FitResult fr = fit_w_scaling(pts);
  CHECK(fr.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fr.intercept == doctest::Approx(-0.4).epsilon(1e-10));
  CHECK(fr.residual < 1e-12);
  CHECK_THROWS_AS(fit_w_scaling({{0, 0}, {1, 1}}), ValidationError);
}

TEST_CASE("make_report summarizes a skeleton point") {
  SreReport rep = make_report(chi2_tensors(0.5), 2, 0, 4);
  CHECK(rep.m_n ==
        doctest::Approx(closed_form_chi2(0.5, Chi2Quantity::m2)).epsilon(1e-9));
  CHECK(rep.xi_sre ==
        doctest::Approx(closed_form_chi2(0.5, Chi2Quantity::xi_sre))
            .epsilon(1e-8));
  CHECK(rep.chi == 2);
  CHECK(rep.chi_t == 4);
  CHECK_FALSE(rep.degenerate);
}
