#include "magic_spectra/perturb.hpp"

#include <cmath>
#include <limits>

namespace msp {

static Eigen::Matrix2cd rot_y(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}
static Eigen::Matrix2cd rot_z(double t) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(cplx(0, -t / 2));
  m(1, 1) = std::exp(cplx(0, t / 2));
  return m;
}
static Eigen::Matrix2cd rot_x(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), cplx(0, -std::sin(t / 2)), cplx(0, -std::sin(t / 2)),
      std::cos(t / 2);
  return m;
}

SingleQubitUnitary SingleQubitUnitary::from_angles(double theta, double phi,
                                                   double lambda) {
  SingleQubitUnitary u;
  u.theta = theta;
  u.phi = phi;
  u.lambda = lambda;
  u.matrix = rot_z(phi) * rot_y(theta) * rot_z(lambda);
  return u;
}

SingleQubitUnitary SingleQubitUnitary::from_matrix(const Eigen::Matrix2cd& m) {
  if ((m.adjoint() * m - Eigen::Matrix2cd::Identity()).norm() > 1e-12)
    throw ValidationError("from_matrix: not unitary");
  SingleQubitUnitary u;
  u.matrix = m;
  // Angles recovered up to global phase; only the matrix is consumed.
  u.theta = 2.0 * std::atan2(std::abs(m(1, 0)), std::abs(m(0, 0)));
  return u;
}

SingleQubitUnitary SingleQubitUnitary::rx(double t) {
  SingleQubitUnitary u;
  u.theta = t;
  u.matrix = rot_x(t);
  return u;
}
SingleQubitUnitary SingleQubitUnitary::ry(double t) {
  SingleQubitUnitary u;
  u.theta = t;
  u.matrix = rot_y(t);
  return u;
}
SingleQubitUnitary SingleQubitUnitary::rz(double t) {
  SingleQubitUnitary u;
  u.theta = t;
  u.matrix = rot_z(t);
  return u;
}
SingleQubitUnitary SingleQubitUnitary::s_gate() {
  SingleQubitUnitary u;
  u.matrix = Eigen::Matrix2cd::Identity();
  u.matrix(1, 1) = cplx(0, 1);
  return u;
}
SingleQubitUnitary SingleQubitUnitary::h_gate() {
  SingleQubitUnitary u;
  const double s = 1.0 / std::sqrt(2.0);
  u.matrix << s, s, s, -s;
  return u;
}
SingleQubitUnitary SingleQubitUnitary::t_gate() {
  SingleQubitUnitary u;
  u.matrix = Eigen::Matrix2cd::Identity();
  u.matrix(1, 1) = std::exp(cplx(0, M_PI / 4));
  return u;
}

// (L1| EE_U |R1) with the dominant pair binormalized to (L1|R1) = 1. A
// degenerate dominant group contributes its full trace block.
static double boundary_overlap(const ReplicaOperator& op_u,
                               const ReplicaSpectrum& spec) {
  cplx total = 0.0;
  for (int i : spec.groups.at(0)) {
    Vec w = op_u.apply(spec.pairs.right.col(i));
    total += (spec.pairs.left.col(i).transpose() * w)(0, 0);
  }
  return std::abs(total);
}

double delta_m_single(const ReplicaOperator& op, const ReplicaSpectrum& spec,
                      const SingleQubitUnitary& u) {
  ReplicaOperator op_u = op.with_unitary(u.matrix);
  const double val = boundary_overlap(op_u, spec);
  if (val <= 0.0) throw ConvergenceError("delta_m_single: vanishing overlap");
  return (std::log(val) - std::log(spec.mu1())) / (1.0 - spec.n);
}

DoubleResult delta_m_double(const ReplicaOperator& op,
                            const ReplicaSpectrum& spec,
                            const SingleQubitUnitary& u, int r) {
  if (r < 1) throw ValidationError("delta_m_double: r >= 1");
  ReplicaOperator op_u = op.with_unitary(u.matrix);
  const Vec& l1 = spec.pairs.left.col(spec.groups.at(0).front());
  const Vec& r1 = spec.pairs.right.col(spec.groups.at(0).front());
  const double mu1 = spec.mu1();

  Vec v = op_u.apply(r1);
  for (int s = 0; s < r - 1; ++s) v = op.apply(v) / mu1;
  v = op_u.apply(v);
  const double amp = std::abs((l1.transpose() * v)(0, 0));
  if (amp <= 0.0) throw ConvergenceError("delta_m_double: vanishing overlap");

  DoubleResult out;
  out.total = (std::log(amp) - 2.0 * std::log(mu1)) / (1.0 - spec.n);
  out.connected = out.total - 2.0 * delta_m_single(op, spec, u);
  return out;
}

std::vector<DoubleResult> delta_m_double_sweep(const ReplicaOperator& op,
                                               const ReplicaSpectrum& spec,
                                               const SingleQubitUnitary& u,
                                               int r_max) {
  if (r_max < 1) throw ValidationError("delta_m_double_sweep: r_max >= 1");
  ReplicaOperator op_u = op.with_unitary(u.matrix);
  const Vec& l1 = spec.pairs.left.col(spec.groups.at(0).front());
  const Vec& r1 = spec.pairs.right.col(spec.groups.at(0).front());
  const double mu1 = spec.mu1();
  const double single = delta_m_single(op, spec, u);

  Vec lu = op_u.apply_transpose(l1);  // (L1| EE_U grows from the left
  std::vector<DoubleResult> out;
  Vec v = op_u.apply(r1);  // corresponds to r = 1 when closed immediately
  for (int r = 1; r <= r_max; ++r) {
    const double amp = std::abs((lu.transpose() * v)(0, 0)) /
                       std::pow(mu1, r - 1);
    if (amp <= 0.0)
      throw ConvergenceError("delta_m_double_sweep: vanishing overlap");
    DoubleResult dr;
    dr.total = (std::log(amp) - 2.0 * std::log(mu1)) / (1.0 - spec.n);
    dr.connected = dr.total - 2.0 * single;
    out.push_back(dr);
    if (r < r_max) v = op.apply(v);
  }
  return out;
}

InjectionResult maximize_injection(const ReplicaOperator& op,
                                   const ReplicaSpectrum& spec,
                                   RotationFamily family) {
  auto make = [&](double th, double ph, double la) -> SingleQubitUnitary {
    switch (family) {
      case RotationFamily::rx: return SingleQubitUnitary::rx(th);
      case RotationFamily::ry: return SingleQubitUnitary::ry(th);
      case RotationFamily::rz: return SingleQubitUnitary::rz(th);
      case RotationFamily::full:
        return SingleQubitUnitary::from_angles(th, ph, la);
    }
    throw ValidationError("maximize_injection: unknown family");
  };
  const bool full = family == RotationFamily::full;
  auto eval = [&](double th, double ph, double la) {
    return delta_m_single(op, spec, make(th, ph, la));
  };

  // Coarse deterministic grid.
  const int grid = 24;
  double best = -std::numeric_limits<double>::infinity();
  double bt = 0, bp = 0, bl = 0;
  for (int it = 0; it < grid; ++it) {
    const double th = 2.0 * M_PI * it / grid;
    if (!full) {
      const double v = eval(th, 0, 0);
      if (v > best + 1e-15) best = v, bt = th;
      continue;
    }
    for (int ip = 0; ip < grid; ++ip)
      for (int il = 0; il < grid; ++il) {
        const double ph = 2.0 * M_PI * ip / grid;
        const double la = 2.0 * M_PI * il / grid;
        const double v = eval(th, ph, la);
        if (v > best + 1e-15) best = v, bt = th, bp = ph, bl = la;
      }
  }

  // Coordinate descent with interval halving.
  double step = 2.0 * M_PI / grid;
  InjectionResult res;
  res.converged = true;
  int guard = 0;
  while (step > 1e-6) {
    bool improved = false;
    const int ncoord = full ? 3 : 1;
    for (int c = 0; c < ncoord; ++c) {
      for (double sgn : {+1.0, -1.0}) {
        double th = bt + (c == 0 ? sgn * step : 0.0);
        double ph = bp + (c == 1 ? sgn * step : 0.0);
        double la = bl + (c == 2 ? sgn * step : 0.0);
        const double v = eval(th, ph, la);
        if (v > best + 1e-14) {
          best = v;
          bt = th;
          bp = ph;
          bl = la;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (++guard > 100000) {
      res.converged = false;
      break;
    }
  }
  res.theta = bt;
  res.phi = bp;
  res.lambda = bl;
  res.delta_m = best;
  return res;
}

}  // namespace msp
