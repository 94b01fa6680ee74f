#include <doctest.h>

#include <cmath>

#include "magic_spectra/imps.hpp"
#include "magic_spectra/skeleton.hpp"

using namespace msp;

TEST_CASE("normalize fixes the dominant transfer eigenvalue to unit modulus") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    ImpsState st = random_state(2, 3, seed);
    CHECK(std::abs(std::abs(st.lambda1) - 1.0) < 1e-12);
    const cplx overlap = (st.l.transpose() * st.r)(0, 0);
    CHECK(std::abs(overlap - 1.0) < 1e-10);
    // idempotent
    ImpsState st2 = normalize(st);
    CHECK(std::abs(st2.lambda1 - st.lambda1) < 1e-12);
  }
}

TEST_CASE("normalize rejects the zero tensor") {
  Mat z = Mat::Zero(2, 2);
  CHECK_THROWS_AS(normalize(make_state({z, z})), ValidationError);
}

TEST_CASE("environments are fixed points of the transfer matrix") {
  ImpsState st = random_state(2, 4, 9);
  Mat e = transfer_dense(st);
  CHECK((e * st.r - st.lambda1 * st.r).norm() < 1e-9);
  CHECK((st.l.transpose() * e - st.lambda1 * st.l.transpose()).norm() < 1e-9);
}

TEST_CASE("transfer_matrix handle agrees with the dense transfer matrix") {
  ImpsState st = random_state(2, 3, 17);
  Mat e = transfer_dense(st);
  LinearOperatorHandle h = transfer_matrix(st);
  Vec v = Vec::Random(9);
  CHECK((h.apply(v) - e * v).norm() < 1e-12);
  CHECK((h.apply_transpose(v) - e.transpose() * v).norm() < 1e-12);
}

TEST_CASE("skeleton transfer eigenvalues match the closed form") {
  for (double g : {-1.5, -0.3, 0.2, 0.5, 1.7}) {
    ImpsState st = chi2_tensors(g);
    TransferSpectrum ts = transfer_spectrum(st);
    const auto want = closed_form_chi2_eigs_e(g);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(std::abs(ts.eigenpairs.values(i)) - std::abs(want[i])) <
            1e-9);
    }
  }
}

TEST_CASE("correlation length matches the closed form") {
  for (double g : {0.2, 0.5, 0.9, -0.4, 1.5}) {
    ImpsState st = chi2_tensors(g);
    const double want = closed_form_chi2(g, Chi2Quantity::xi);
    CHECK(correlation_length(st) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("a two-block cat MPS is flagged degenerate with infinite xi") {
  Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2);
  a0(0, 0) = 1.0;
  a1(1, 1) = 1.0;
  ImpsState st = normalize(make_state({a0, a1}));
  CHECK(st.degenerate);
  CHECK(std::isinf(correlation_length(st)));
  // g = -1 instead collapses the subleading eigenvalue to zero
  CHECK(correlation_length(chi2_tensors(-1.0)) == 0.0);
}

TEST_CASE("product state has zero correlation length") {
  Mat a0(1, 1), a1(1, 1);
  a0 << 1.0;
  a1 << 1.0;
  ImpsState st = normalize(make_state({a0, a1}));
  CHECK(correlation_length(st) == 0.0);
}

TEST_CASE("Z-Z correlator of the skeleton decays with the closed-form xi") {
  const double g = 0.5;
  ImpsState st = chi2_tensors(g);
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const double xi = closed_form_chi2(g, Chi2Quantity::xi);
  // least-squares slope of log|C(m)| over m in [10, 40]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int np = 0;
  for (int m = 10; m <= 40; ++m) {
    const double c = std::abs(connected_correlator(st, z, z, m));
    REQUIRE(c > 0.0);
    sx += m;
    sy += std::log(c);
    sxx += double(m) * m;
    sxy += m * std::log(c);
    ++np;
  }
  const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
  CHECK(-1.0 / slope == doctest::Approx(xi).epsilon(0.02));
}

TEST_CASE("connected correlator is bounded by its leading decay") {
  ImpsState st = chi2_tensors(0.4);
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const double xi = correlation_length(st);
  const double c1 = std::abs(connected_correlator(st, z, z, 1)) *
                    std::exp(1.0 / xi) * 1.0001;
  for (int m = 2; m <= 30; ++m)
    CHECK(std::abs(connected_correlator(st, z, z, m)) <=
          c1 * std::exp(-m / xi));
}

TEST_CASE("two-cut block entropy saturates to the closed form") {
  for (double g : {0.3, 0.7, -0.5}) {
    ImpsState st = chi2_tensors(g);
    const double want = closed_form_chi2(g, Chi2Quantity::s2_block);
    CHECK(renyi2_block(st, 40) == doctest::Approx(want).epsilon(1e-8));
    CHECK(2.0 * renyi2_half_infinite(st) ==
          doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("renyi2_block matches the dense reduced-density oracle") {
  ImpsState st = chi2_tensors(0.5);
  for (int n_sites : {1, 2, 4}) {
    Mat rho = reduced_density(st, n_sites);
    const double purity = (rho * rho).trace().real();
    CHECK(renyi2_block(st, n_sites) ==
          doctest::Approx(-std::log(purity)).epsilon(1e-9));
  }
  // random state too
  ImpsState rs = random_state(2, 3, 23);
  Mat rho = reduced_density(rs, 3);
  CHECK(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-12);
  CHECK(renyi2_block(rs, 3) ==
        doctest::Approx(-std::log((rho * rho).trace().real())).epsilon(1e-9));
}

TEST_CASE("blocking k sites raises the transfer eigenvalues to the k-th power") {
  ImpsState st = random_state(2, 3, 31);
  ImpsState blocked = normalize(block_sites(st, 2));
  EigenPairs e1 = dense_eigen(transfer_dense(st));
  EigenPairs e2 = dense_eigen(transfer_dense(blocked));
  // compare moduli of the top eigenvalues
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(e2.values(i)) ==
          doctest::Approx(std::pow(std::abs(e1.values(i)), 2)).epsilon(1e-8));
}

TEST_CASE("random_state is deterministic in its seed") {
  ImpsState a = random_state(2, 3, 77);
  ImpsState b = random_state(2, 3, 77);
  for (int s = 0; s < 2; ++s) CHECK((a.A[s] - b.A[s]).norm() == 0.0);
}
