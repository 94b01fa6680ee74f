// magic-spectra: SRE spectral structure of infinite MPS from the command line.

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "magic_spectra/io.hpp"
#include "magic_spectra/oracle.hpp"
#include "magic_spectra/perturb.hpp"
#include "magic_spectra/skeleton.hpp"
#include "magic_spectra/spectra.hpp"

namespace {

using namespace msp;

ImpsState state_for(const RunConfig& cfg, double x) {
  switch (cfg.source) {
    case StateSource::skeleton_chi2: return chi2_tensors(x);
    case StateSource::skeleton_chi4: return chi4_tensors(x);
    case StateSource::file: return normalize(read_mps_file(cfg.file_path));
  }
  throw ValidationError("unknown state source");
}

PauliMps pauli_mps_for(const ImpsState& st, const RunConfig& cfg) {
  PauliTransferTensor pt = pauli_tensor(st);
  if (cfg.chi_t > 0 && cfg.chi_t < pt.bond)
    return truncate_pauli_mps(pt, cfg.chi_t, cfg.cutoff);
  return exact_pauli_mps(st);
}

// Map grid indices through a worker pool; rows come back in grid order.
template <typename F>
std::vector<std::vector<std::string>> pooled_rows(const RunConfig& cfg,
                                                  size_t npoints,
                                                  const F& point_rows) {
  const int nthreads = effective_threads(cfg.threads);
  std::vector<std::vector<std::vector<std::string>>> results(npoints);
  std::vector<std::string> errors(npoints);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= npoints) return;
      try {
        results[i] = point_rows(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < npoints; ++i)
    if (!errors[i].empty())
      throw ConvergenceError("grid point " + std::to_string(i) +
                             " failed: " + errors[i]);
  std::vector<std::vector<std::string>> rows;
  for (auto& r : results)
    for (auto& row : r) rows.push_back(std::move(row));
  return rows;
}

void emit(const RunConfig& cfg, const std::vector<std::string>& cols,
          const std::vector<std::vector<std::string>>& rows) {
  if (cfg.out.empty()) {
    write_csv(std::cout, cfg, cols, rows);
    return;
  }
  std::ofstream os(cfg.out);
  if (!os) throw ValidationError("cannot open output file " + cfg.out);
  write_csv(os, cfg, cols, rows);
}

std::string fd(double v) { return format_double(v); }

int cmd_sre_density(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid();
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    ReplicaOperator op = replica_operator(pauli_mps_for(st, cfg), cfg.n);
    const double m = sre_density(op, cfg.tol, cfg.seed);
    const double mu1 = std::exp((1.0 - cfg.n) * m);
    return std::vector<std::vector<std::string>>{
        {fd(grid[i]), fd(m), fd(mu1), "1"}};
  });
  emit(cfg, {"x", "m_n", "mu1", "converged"}, rows);
  return 0;
}

int cmd_subsystem(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid();
  std::vector<int> ns = cfg.n_sites;
  if (ns.empty()) ns = {1, 2, 4, 8, 16, 32};
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    PauliMps pm = pauli_mps_for(st, cfg);
    ReplicaOperator op = replica_operator(pm, cfg.n);
    auto [ll, rr] = replicated_boundary(st, pm, cfg.n);
    std::vector<std::vector<std::string>> out;
    for (int nn : ns) {
      const double m = subsystem_sre(op, ll, rr, nn);
      const double s = renyi2_block(st, nn);
      out.push_back({fd(grid[i]), std::to_string(nn), fd(m), fd(s),
                     fd((m - s) / nn)});
    }
    return out;
  });
  emit(cfg, {"x", "N", "M", "S2", "m_tilde_per_site"}, rows);
  return 0;
}

int cmd_mutual(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid();
  std::vector<int> ells = cfg.n_sites;
  if (ells.empty()) ells = {1, 2, 4, 8, 16, 32, 64};
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    PauliMps pm = pauli_mps_for(st, cfg);
    ReplicaOperator op = replica_operator(pm, cfg.n);
    auto [ll, rr] = replicated_boundary(st, pm, cfg.n);
    ReplicaSpectrum spec =
        decompose(op, std::max(8, 2 * cfg.k_groups), ll, rr, cfg.tol, cfg.seed);
    const double s2_block = 2.0 * renyi2_half_infinite(st);
    MutualInfinite mi = mutual_sre_infinite(spec, s2_block);
    std::vector<std::vector<std::string>> out;
    for (int ell : ells) {
      MutualAdjacent ma = mutual_sre_adjacent(op, ll, rr, ell,
                                              renyi2_block(st, ell),
                                              renyi2_block(st, 2 * ell));
      out.push_back({fd(grid[i]), std::to_string(ell), fd(ma.l), fd(ma.w),
                     fd(ma.i), fd(mi.l_inf), fd(mi.w_inf)});
    }
    return out;
  });
  emit(cfg, {"x", "ell", "L", "W", "I", "L_inf", "W_inf"}, rows);
  return 0;
}

int cmd_xi(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid();
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    const double xi = correlation_length(st);
    PauliMps pm = pauli_mps_for(st, cfg);
    ReplicaOperator op = replica_operator(pm, cfg.n);
    auto [ll, rr] = replicated_boundary(st, pm, cfg.n);
    // Margin over the requested group count so the incomplete-trailing-group
    // trim cannot drop the subleading group that defines xi_sre.
    ReplicaSpectrum spec = decompose(op, std::max(12, 3 * cfg.k_groups), ll,
                                     rr, cfg.tol, cfg.seed);
    return std::vector<std::vector<std::string>>{
        {fd(grid[i]), fd(xi), fd(sre_correlation_length(spec))}};
  });
  emit(cfg, {"x", "xi", "xi_sre"}, rows);
  return 0;
}

int cmd_perturb(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid();
  const int ntheta = 48;
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    PauliMps pm = pauli_mps_for(st, cfg);
    ReplicaOperator op = replica_operator(pm, cfg.n);
    auto [ll, rr] = replicated_boundary(st, pm, cfg.n);
    ReplicaSpectrum spec = decompose(op, 8, ll, rr, cfg.tol, cfg.seed);
    std::vector<std::vector<std::string>> out;
    for (int t = 0; t <= ntheta; ++t) {
      const double theta = M_PI * t / ntheta;
      SingleQubitUnitary u =
          cfg.family == "rx"   ? SingleQubitUnitary::rx(theta)
          : cfg.family == "ry" ? SingleQubitUnitary::ry(theta)
          : cfg.family == "rz" ? SingleQubitUnitary::rz(theta)
                               : SingleQubitUnitary::from_angles(theta, 0, 0);
      out.push_back({fd(grid[i]), fd(theta),
                     fd(delta_m_single(op, spec, u))});
    }
    return out;
  });
  emit(cfg, {"x", "theta", "delta_m"}, rows);
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  std::vector<double> gcs = cfg.g_c;
  if (gcs.empty()) gcs = {0.0, 0.7, 1.4};
  std::vector<int> ls = cfg.l_ring;
  if (ls.empty()) ls = {6, 8, 10};
  std::vector<std::vector<std::string>> rows;
  for (double gc : gcs) {
    std::vector<std::vector<std::pair<int, double>>> ring_data;
    for (int l : ls) {
      Statevector psi = ground_state(cluster_ising_line(gc, l));
      std::vector<std::pair<int, double>> pts;
      for (int ell = 2; ell <= l - 2; ++ell)
        pts.emplace_back(ell, mutual_sre_ring(psi, ell, cfg.n));
      ring_data.push_back(pts);
    }
    Delta4Fit fit = fit_delta4(ring_data, ls);
    for (size_t k = 0; k < ls.size(); ++k) {
      for (auto [ell, w] : ring_data[k]) {
        const double chord = (ls[k] / M_PI) * std::sin(M_PI * ell / ls[k]);
        rows.push_back({std::to_string(ls[k]), fd(gc), std::to_string(ell),
                        fd(w), fd(std::log(chord)),
                        fd(fit.per_l_slopes[k])});
      }
    }
    rows.push_back({"-1", fd(gc), "-1", fd(fit.joint), "-1",
                    fd(fit.extrapolated)});
  }
  emit(cfg, {"L", "g_c", "ell", "W2_or_joint", "log_chord",
             "slope_or_extrap"}, rows);
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  // W_inf versus log xi_SRE across the grid, with the least-squares line.
  const std::vector<double> grid = cfg.grid();
  std::vector<std::pair<double, double>> pts(grid.size());
  auto rows = pooled_rows(cfg, grid.size(), [&](size_t i) {
    ImpsState st = state_for(cfg, grid[i]);
    PauliMps pm = pauli_mps_for(st, cfg);
    ReplicaOperator op = replica_operator(pm, cfg.n);
    auto [ll, rr] = replicated_boundary(st, pm, cfg.n);
    ReplicaSpectrum spec = decompose(op, std::max(12, 3 * cfg.k_groups), ll,
                                     rr, cfg.tol, cfg.seed);
    const double s2 = 2.0 * renyi2_half_infinite(st);
    MutualInfinite mi = mutual_sre_infinite(spec, s2);
    const double xs = sre_correlation_length(spec);
    pts[i] = {std::log(xs), mi.w_inf};
    return std::vector<std::vector<std::string>>{
        {fd(grid[i]), fd(xs), fd(mi.w_inf), fd(mi.l_inf)}};
  });
  FitResult fr = fit_w_scaling(pts);
  rows.push_back({"# slope", fd(fr.slope), fd(fr.intercept), fd(fr.residual)});
  emit(cfg, {"x", "xi_sre", "W_inf", "L_inf"}, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilizer Renyi entropy spectra of infinite MPS"};
  app.require_subcommand(1);

  msp::RunConfig cfg;
  std::string config_path, source = "chi2", file_path, family = "full",
              out_path;
  std::vector<double> g, mu, gc;
  std::vector<int> nsites, rsep, lring;
  int n = 2, chi_t = 0, threads = 0;
  unsigned seed = 7;
  double tol = 1e-10, cutoff = 0.0;

  const std::vector<std::string> commands = {
      "sre-density", "subsystem", "mutual", "xi", "perturb", "oracle", "fit"};
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* s = app.add_subcommand(c);
    s->add_option("--config", config_path);
    s->add_option("--source", source)
        ->check(CLI::IsMember({"chi2", "chi4", "file"}));
    s->add_option("--file", file_path);
    s->add_option("--g", g)->delimiter(',');
    s->add_option("--mu", mu)->delimiter(',');
    s->add_option("--n", n);
    s->add_option("--chi-t", chi_t);
    s->add_option("--cutoff", cutoff);
    s->add_option("--N", nsites)->delimiter(',');
    s->add_option("--r", rsep)->delimiter(',');
    s->add_option("--L", lring)->delimiter(',');
    s->add_option("--g-c", gc)->delimiter(',');
    s->add_option("--family", family)
        ->check(CLI::IsMember({"rx", "ry", "rz", "full"}));
    s->add_option("--tol", tol);
    s->add_option("--seed", seed);
    s->add_option("--out", out_path);
    s->add_option("--threads", threads);
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    if (!config_path.empty()) cfg = msp::load_config(config_path, cfg);
    cfg.command = sub->get_name();
    // Flags win over file values.
    auto set_if = [&](const char* flag, auto&& fn) {
      if (sub->count(flag)) fn();
    };
    set_if("--source", [&] {
      cfg.source = source == "chi2"   ? msp::StateSource::skeleton_chi2
                   : source == "chi4" ? msp::StateSource::skeleton_chi4
                                      : msp::StateSource::file;
    });
    set_if("--file", [&] {
      cfg.file_path = file_path;
      cfg.source = msp::StateSource::file;
    });
    set_if("--g", [&] { cfg.g = g; });
    set_if("--mu", [&] {
      cfg.mu = mu;
      if (!sub->count("--source") && !sub->count("--file"))
        cfg.source = msp::StateSource::skeleton_chi4;
    });
    set_if("--n", [&] { cfg.n = n; });
    set_if("--chi-t", [&] { cfg.chi_t = chi_t; });
    set_if("--cutoff", [&] { cfg.cutoff = cutoff; });
    set_if("--N", [&] { cfg.n_sites = nsites; });
    set_if("--r", [&] { cfg.r = rsep; });
    set_if("--L", [&] { cfg.l_ring = lring; });
    set_if("--g-c", [&] { cfg.g_c = gc; });
    set_if("--family", [&] { cfg.family = family; });
    set_if("--tol", [&] { cfg.tol = tol; });
    set_if("--seed", [&] { cfg.seed = seed; });
    set_if("--out", [&] { cfg.out = out_path; });
    set_if("--threads", [&] { cfg.threads = threads; });

    if (cfg.n < 2) throw msp::ValidationError("--n must be >= 2");
    if (cfg.source == msp::StateSource::file && cfg.file_path.empty())
      throw msp::ValidationError("file source requires --file");

    if (cfg.command == "sre-density") return cmd_sre_density(cfg);
    if (cfg.command == "subsystem") return cmd_subsystem(cfg);
    if (cfg.command == "mutual") return cmd_mutual(cfg);
    if (cfg.command == "xi") return cmd_xi(cfg);
    if (cfg.command == "perturb") return cmd_perturb(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    if (cfg.command == "fit") return cmd_fit(cfg);
    throw msp::ValidationError("unknown command " + cfg.command);
  } catch (const msp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const msp::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const msp::ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
