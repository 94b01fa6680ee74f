#pragma once
// File formats and run configuration shared by the CLI and tests.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "magic_spectra/imps.hpp"

namespace msp {

inline constexpr const char* kVersion = "0.1.0";

// JSON tensor container:
// {"format_version":1, "d":int, "unit_cell":int,
//  "tensors":[{"shape":[d,chi,chi], "re":[...], "im":[...]}]}
struct MpsFile {
  int format_version = 1;
  int d = 2;
  int unit_cell = 1;
  std::vector<ImpsState> cells;  // raw (unnormalized) site tensors
};

void write_mps_file(const std::string& path, const ImpsState& state,
                    int unit_cell = 1);
// Reads and (after blocking any unit cell) returns the raw state.
ImpsState read_mps_file(const std::string& path);

enum class StateSource { skeleton_chi2, skeleton_chi4, file };

struct RunConfig {
  std::string command = "sre-density";
  StateSource source = StateSource::skeleton_chi2;
  std::string file_path;
  std::vector<double> g{};    // empty => default grid
  std::vector<double> mu{};
  int n = 2;
  int chi_t = 0;              // 0 => exact (chi^2)
  double cutoff = 0.0;
  std::vector<int> n_sites{}; // --N
  std::vector<int> r{};
  std::vector<int> l_ring{};  // --L
  std::vector<double> g_c{};
  std::string family = "full";
  double tol = 1e-10;
  unsigned seed = 7;
  int k_groups = 6;
  std::string out;            // empty => stdout
  int threads = 0;            // 0 => default pool size

  // Fully defaulted config: the g-sweep of the chi=2 family, g in [-2, 2]
  // step 0.01.
  std::vector<double> grid() const;
  std::string canonical() const;   // stable serialization for hashing
  uint64_t hash() const;           // FNV-1a over canonical()
};

// Flat key=value file; '#' starts a comment. Unknown keys are errors.
RunConfig load_config(const std::string& path, RunConfig base = {});

// CSV emission with deterministic formatting (17 significant digits) and a
// header carrying tool version, config hash and solver tolerances.
std::string format_double(double v);
void write_csv(std::ostream& os, const RunConfig& cfg,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

// Worker-pool map over grid indices; results land in input order. Pool size
// = cfg.threads, capped by MAGIC_SPECTRA_THREADS, default logical cores.
int effective_threads(int requested);

}  // namespace msp
