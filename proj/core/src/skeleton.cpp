#include "magic_spectra/skeleton.hpp"

#include <cmath>
#include <limits>

namespace msp {

ImpsState chi2_tensors(double g) {
  Mat up(2, 2), dn(2, 2);
  up << 0, 0, 1, 1;
  dn << 1, g, 0, 0;
  return normalize(make_state({up, dn}));
}

static cplx a_of_b(cplx b) {
  return b / (1.0 + std::sqrt(cplx(1.0, 0.0) - b * b));
}

Chi4Skeleton chi4_parameters(double mu) {
  Chi4Skeleton sk;
  sk.mu = mu;
  if (mu == 0.0) {
    sk.b1 = 0.0;
    sk.b2 = std::numeric_limits<double>::infinity();
    sk.a1 = 0.0;
    sk.a2 = cplx(0.0, -1.0);
    return sk;
  }
  sk.b1 = -mu * (mu + 2.0) / (mu * mu + mu + 1.0);
  sk.b2 = (mu + 1.0) / (mu * mu);
  sk.a1 = a_of_b(sk.b1);
  sk.a2 = a_of_b(sk.b2);
  return sk;
}

ImpsState chi4_tensors(double mu) {
  // Validity: outside (-inf,-1] U [-1/2,1] the elliptic parameter |b1|
  // exceeds 1 and the family no longer contains the ground state, except at
  // the two golden-ratio cluster points where |b2| = 1.
  const bool in_interval = mu <= -1.0 || (mu >= -0.5 && mu <= 1.0);
  const double golden_p = (1.0 + std::sqrt(5.0)) / 2.0;
  const double golden_m = (1.0 - std::sqrt(5.0)) / 2.0;
  const bool golden = std::abs(mu - golden_p) < 1e-9 ||
                      std::abs(mu - golden_m) < 1e-9;
  if (!in_interval && !golden)
    throw ValidationError("chi4_tensors: mu outside the valid domain "
                          "(-inf,-1] U [-1/2,1] or the cluster points");
  Chi4Skeleton sk = chi4_parameters(mu);
  if (!golden && mu != 0.0 && std::abs(sk.b1) > 1.0 + 1e-12)
    throw ValidationError("chi4_tensors: |b1| > 1, tensors invalid here");

  const cplx a1 = sk.a1, a2 = sk.a2;
  Mat up(4, 4), dn(4, 4);
  up << 0, a1, 1, 0,
        a2, 0, 0, -a1 * a2,
        a1, 0, 0, 1,
        0, -a2, a1 * a2, 0;
  dn << a2, 0, 0, -a1 * a2,
        0, a1, 1, 0,
        0, -a2, a1 * a2, 0,
        a1, 0, 0, 1;
  return normalize(make_state({up, dn}));
}

double closed_form_chi2(double g, Chi2Quantity q) {
  const double ag = std::abs(g);
  const double norm4 = std::pow(1.0 + ag, 4);
  const double poly = 1.0 + 14.0 * g * g + std::pow(g, 4);
  switch (q) {
    case Chi2Quantity::m2:
      return -std::log(poly / norm4);
    case Chi2Quantity::xi: {
      // gap ratio of the standard transfer matrix; even in g -> -g
      const double ratio = std::abs((1.0 - ag) / (1.0 + ag));
      if (ratio <= 0.0) return 0.0;
      if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
      return -1.0 / std::log(ratio);
    }
    case Chi2Quantity::xi_sre: {
      const double ratio = std::abs((1.0 - std::pow(g, 4)) / poly);
      if (ratio <= 0.0) return 0.0;
      if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
      return -1.0 / std::log(ratio);
    }
    case Chi2Quantity::s2_block:
      if (g >= 0.0)
        return 2.0 * std::log(2.0 * std::pow(1.0 + g, 2) /
                              (1.0 + 6.0 * g + g * g));
      return std::log(4.0);
    case Chi2Quantity::c1_printed:
      if (g >= 0.0) {
        const double num = 1.0 + g * (4.0 + g * (22.0 + g * (4.0 + g)));
        return std::pow(num, 4) / (4.0 * std::pow(1.0 + g, 4) * poly);
      }
      return std::pow(g - 1.0, 4) / poly;
  }
  throw ValidationError("closed_form_chi2: unknown quantity");
}

double closed_form_chi2_c1_squared(double g) {
  const double poly = 1.0 + 14.0 * g * g + std::pow(g, 4);
  if (g >= 0.0) {
    const double num = 1.0 + g * (4.0 + g * (22.0 + g * (4.0 + g)));
    return std::pow(num, 2) / (4.0 * std::pow(1.0 + g, 4) * poly);
  }
  // For g < 0 the printed expression is four times the projector overlap.
  return std::pow(g - 1.0, 4) / (4.0 * poly);
}

std::vector<double> closed_form_chi2_eigs_e(double g) {
  // Unnormalized transfer eigenvalues {1+g, 1-g, 0, 0}, here divided by the
  // normalization 1+|g| so the dominant one has unit modulus.
  const double s = 1.0 + std::abs(g);
  double v0 = (1.0 + g) / s, v1 = (1.0 - g) / s;
  if (std::abs(v1) > std::abs(v0)) std::swap(v0, v1);  // dominant first
  return {v0, v1, 0.0, 0.0};
}

std::vector<std::pair<double, int>> closed_form_chi2_eigs_ee(double g) {
  const double norm4 = std::pow(1.0 + std::abs(g), 4);
  const double poly = 1.0 + 14.0 * g * g + std::pow(g, 4);
  return {{poly / norm4, 1},
          {(1.0 - std::pow(g, 4)) / norm4, 8},
          {std::pow(g * g - 1.0, 2) / norm4, 7},
          {0.0, 240}};
}

double closed_form_delta_ryz(double theta) {
  return std::log(8.0 / (7.0 + std::cos(4.0 * theta)));
}

double closed_form_delta_rx(double theta, double g) {
  const double poly = 1.0 + 14.0 * g * g + std::pow(g, 4);
  const double g2 = g * g, g3 = g2 * g, g4 = g2 * g2, g5 = g4 * g,
               g6 = g4 * g2, g8 = g4 * g4;
  const double a = 7.0 + 212.0 * g2 + 64.0 * g3 + 1482.0 * g4 + 64.0 * g5 +
                   212.0 * g6 + 7.0 * g8;
  const double b = 1.0 + 12.0 * g2 - 64.0 * g3 + 102.0 * g4 - 64.0 * g5 +
                   12.0 * g6 + g8;
  return std::log(8.0) + 2.0 * std::log(poly) -
         std::log(a + b * std::cos(4.0 * theta));
}

CircuitAngles circuit_angles(double g) {
  CircuitAngles ca;
  const double ag = std::abs(g);
  const double s = std::sqrt(ag) / std::sqrt(1.0 + ag);
  ca.theta_v = std::asin(s);
  const double sgn = (g > 0.0) - (g < 0.0);
  ca.theta_w = std::acos(sgn * s);
  return ca;
}

std::vector<std::pair<int, double>> SkeletonPolynomial::couplings() const {
  const size_t deg = s.size();
  if (deg == 0) return {};
  std::vector<double> sq(2 * deg - 1, 0.0);
  for (size_t i = 0; i < deg; ++i)
    for (size_t j = 0; j < deg; ++j) sq[i + j] += s[i] * s[j];
  std::vector<std::pair<int, double>> out;
  for (size_t k = 0; k < sq.size(); ++k)
    out.emplace_back(p + static_cast<int>(k), scale * sq[k]);
  return out;
}

SkeletonPolynomial chi2_polynomial(double g) {
  SkeletonPolynomial poly;
  poly.p = 0;
  poly.scale = -1.0;
  poly.s = {1.0 + g, g - 1.0};
  return poly;
}

SkeletonPolynomial chi4_polynomial(double mu) {
  if (mu == -1.0)
    throw ValidationError("chi4_polynomial: mu = -1 pole");
  SkeletonPolynomial poly;
  poly.p = 0;
  poly.scale = 1.0;
  // (z - mu)(z - mu/(mu+1)) expanded, squared by couplings().
  const double z2 = mu / (mu + 1.0);
  poly.s = {mu * z2, -(mu + z2), 1.0};
  return poly;
}

static std::vector<uint8_t> string_ops(int alpha) {
  std::vector<uint8_t> ops;
  if (alpha == 0) {
    ops.push_back(3);
  } else if (alpha > 0) {
    ops.push_back(1);
    for (int j = 1; j < alpha; ++j) ops.push_back(3);
    ops.push_back(1);
  } else {
    ops.push_back(2);
    for (int j = 1; j < -alpha; ++j) ops.push_back(3);
    ops.push_back(2);
  }
  return ops;
}

PauliHamiltonian laurent_to_pauli_hamiltonian(const SkeletonPolynomial& poly,
                                              int l) {
  if (l < 2) throw ValidationError("laurent_to_pauli_hamiltonian: l >= 2");
  PauliHamiltonian h;
  h.l_sites = l;
  for (auto [alpha, t] : poly.couplings()) {
    if (std::abs(t) < 1e-15) continue;
    if (std::abs(alpha) >= l)
      throw ValidationError("laurent_to_pauli_hamiltonian: string exceeds ring");
    const std::vector<uint8_t> ops = string_ops(alpha);
    const double sgn = (alpha == 0) ? 1.0 : -1.0;
    const int start_shift = (alpha < 0) ? alpha : 0;
    for (int n = 0; n < l; ++n) {
      std::vector<uint8_t> full(static_cast<size_t>(l), 0);
      for (size_t k = 0; k < ops.size(); ++k) {
        const int site = ((n + start_shift + static_cast<int>(k)) % l + l) % l;
        full[static_cast<size_t>(site)] = ops[k];
      }
      h.terms.push_back({0.5 * t * sgn, full});
    }
  }
  return h;
}

std::vector<std::pair<double, std::vector<uint8_t>>> laurent_site_terms(
    const SkeletonPolynomial& poly) {
  std::vector<std::pair<double, std::vector<uint8_t>>> out;
  for (auto [alpha, t] : poly.couplings()) {
    if (std::abs(t) < 1e-15) continue;
    const double sgn = (alpha == 0) ? 1.0 : -1.0;
    out.emplace_back(0.5 * t * sgn, string_ops(alpha));
  }
  return out;
}

double free_fermion_energy(const SkeletonPolynomial& poly) {
  const auto ts = poly.couplings();
  const int npts = 20000;  // composite trapezoid over one period
  double acc = 0.0;
  for (int i = 0; i <= npts; ++i) {
    const double k = 2.0 * M_PI * i / npts;
    cplx f = 0.0;
    for (auto [alpha, t] : ts) f += t * std::exp(cplx(0.0, k * alpha));
    const double w = (i == 0 || i == npts) ? 0.5 : 1.0;
    acc += w * std::abs(f);
  }
  acc *= 2.0 * M_PI / npts;
  return -acc / (4.0 * M_PI);
}

std::vector<std::pair<double, std::string>> special_points_chi4() {
  const double golden_p = (1.0 + std::sqrt(5.0)) / 2.0;
  const double golden_m = (1.0 - std::sqrt(5.0)) / 2.0;
  return {
      {-1.0, "left edge of the excluded window; M density vanishes"},
      {-0.5, "right edge of the excluded window; M density = log(16/13)"},
      {0.0, "product-like limit (a1 = 0, a2 = -i); M density vanishes"},
      {1.0, "M density = log(16/13)"},
      {golden_m, "cluster point, |b2| = 1; M density vanishes"},
      {golden_p, "cluster point, |b2| = 1; M density vanishes"},
  };
}

}  // namespace msp
