#include "magic_spectra/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace msp {

using nlohmann::json;

static json tensor_to_json(const ImpsState& st) {
  json t;
  t["shape"] = {st.d, st.chi, st.chi};
  std::vector<double> re, im;
  for (const Mat& a : st.A)
    for (int i = 0; i < st.chi; ++i)
      for (int j = 0; j < st.chi; ++j) {
        re.push_back(a(i, j).real());
        im.push_back(a(i, j).imag());
      }
  t["re"] = re;
  t["im"] = im;
  return t;
}

void write_mps_file(const std::string& path, const ImpsState& state,
                    int unit_cell) {
  if (unit_cell != 1)
    throw ValidationError("write_mps_file: only single-site cells supported");
  json j;
  j["format_version"] = 1;
  j["d"] = state.d;
  j["unit_cell"] = unit_cell;
  j["tensors"] = json::array({tensor_to_json(state)});
  std::ofstream os(path);
  if (!os) throw ValidationError("write_mps_file: cannot open " + path);
  os << j.dump(2) << "\n";
}

ImpsState read_mps_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("read_mps_file: cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("read_mps_file: bad JSON: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
    throw ValidationError("read_mps_file: unsupported format_version");
  const int d = j.at("d").get<int>();
  const int cells = j.value("unit_cell", 1);
  const auto& tensors = j.at("tensors");
  if (!tensors.is_array() || static_cast<int>(tensors.size()) != cells)
    throw ValidationError("read_mps_file: tensor count != unit_cell");

  std::vector<std::vector<Mat>> site_tensors;
  int chi = -1;
  for (const auto& t : tensors) {
    const auto shape = t.at("shape").get<std::vector<int>>();
    if (shape.size() != 3 || shape[0] != d || shape[1] != shape[2])
      throw ValidationError("read_mps_file: bad tensor shape");
    if (chi < 0) chi = shape[1];
    if (shape[1] != chi)
      throw ValidationError("read_mps_file: inconsistent bond dimensions");
    const auto re = t.at("re").get<std::vector<double>>();
    const auto im = t.at("im").get<std::vector<double>>();
    const size_t want = static_cast<size_t>(d) * chi * chi;
    if (re.size() != want || im.size() != want)
      throw ValidationError("read_mps_file: data length mismatch");
    std::vector<Mat> as;
    size_t k = 0;
    for (int s = 0; s < d; ++s) {
      Mat a(chi, chi);
      for (int i = 0; i < chi; ++i)
        for (int jj = 0; jj < chi; ++jj, ++k) a(i, jj) = cplx(re[k], im[k]);
      as.push_back(a);
    }
    site_tensors.push_back(std::move(as));
  }
  // Block a multi-site unit cell into one effective site.
  std::vector<Mat> blocked = site_tensors.front();
  int deff = d;
  for (size_t c = 1; c < site_tensors.size(); ++c) {
    std::vector<Mat> next;
    for (const Mat& a : blocked)
      for (const Mat& b : site_tensors[c]) next.push_back(a * b);
    blocked = std::move(next);
    deff *= d;
  }
  return make_state(std::move(blocked));
}

std::vector<double> RunConfig::grid() const {
  if (source == StateSource::file) return {0.0};  // one point, the file state
  if (source == StateSource::skeleton_chi4) {
    if (!mu.empty()) return mu;
    throw ValidationError("config: chi4 source requires --mu values");
  }
  if (!g.empty()) return g;
  std::vector<double> out;
  for (int i = -200; i <= 200; ++i) out.push_back(i * 0.01);
  return out;
}

static void put(std::ostringstream& os, const char* key,
                const std::string& val) {
  os << key << '=' << val << ';';
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  put(os, "version", kVersion);
  put(os, "command", command);
  switch (source) {
    case StateSource::skeleton_chi2: put(os, "source", "chi2"); break;
    case StateSource::skeleton_chi4: put(os, "source", "chi4"); break;
    case StateSource::file: put(os, "source", "file:" + file_path); break;
  }
  auto vec_d = [&](const char* key, const std::vector<double>& v) {
    std::ostringstream s;
    for (double x : v) s << format_double(x) << ',';
    put(os, key, s.str());
  };
  auto vec_i = [&](const char* key, const std::vector<int>& v) {
    std::ostringstream s;
    for (int x : v) s << x << ',';
    put(os, key, s.str());
  };
  vec_d("g", g);
  vec_d("mu", mu);
  put(os, "n", std::to_string(n));
  put(os, "chi_t", std::to_string(chi_t));
  put(os, "cutoff", format_double(cutoff));
  vec_i("N", n_sites);
  vec_i("r", r);
  vec_i("L", l_ring);
  vec_d("g_c", g_c);
  put(os, "family", family);
  put(os, "tol", format_double(tol));
  put(os, "seed", std::to_string(seed));
  put(os, "k_groups", std::to_string(k_groups));
  return os.str();
}

uint64_t RunConfig::hash() const {
  const std::string s = canonical();
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream is(path);
  if (!is) throw ValidationError("load_config: cannot open " + path);
  RunConfig cfg = base;
  std::string line;
  int lineno = 0;
  auto parse_doubles = [](const std::string& v) {
    std::vector<double> out;
    std::istringstream s(v);
    std::string tok;
    while (std::getline(s, tok, ',')) {
      if (tok.empty()) continue;
      try {
        size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("load_config: bad number '" + tok + "'");
      }
    }
    return out;
  };
  auto parse_ints = [&](const std::string& v) {
    std::vector<int> out;
    for (double x : parse_doubles(v)) {
      if (x != static_cast<int>(x))
        throw ValidationError("load_config: expected integer, got " +
                              std::to_string(x));
      out.push_back(static_cast<int>(x));
    }
    return out;
  };
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hashpos = line.find('#');
    if (hashpos != std::string::npos) line.erase(hashpos);
    // trim
    const size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("load_config: line " + std::to_string(lineno) +
                            ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string s) {
      const size_t b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const size_t e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    key = trim(key);
    val = trim(val);

    if (key == "command") cfg.command = val;
    else if (key == "source") {
      if (val == "chi2") cfg.source = StateSource::skeleton_chi2;
      else if (val == "chi4") cfg.source = StateSource::skeleton_chi4;
      else if (val == "file") cfg.source = StateSource::file;
      else throw ValidationError("load_config: unknown source '" + val + "'");
    } else if (key == "file") { cfg.file_path = val; cfg.source = StateSource::file; }
    else if (key == "g") cfg.g = parse_doubles(val);
    else if (key == "mu") cfg.mu = parse_doubles(val);
    else if (key == "n") cfg.n = parse_ints(val).at(0);
    else if (key == "chi_t") cfg.chi_t = parse_ints(val).at(0);
    else if (key == "cutoff") cfg.cutoff = parse_doubles(val).at(0);
    else if (key == "N") cfg.n_sites = parse_ints(val);
    else if (key == "r") cfg.r = parse_ints(val);
    else if (key == "L") cfg.l_ring = parse_ints(val);
    else if (key == "g_c") cfg.g_c = parse_doubles(val);
    else if (key == "family") cfg.family = val;
    else if (key == "tol") cfg.tol = parse_doubles(val).at(0);
    else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_ints(val).at(0));
    else if (key == "k_groups") cfg.k_groups = parse_ints(val).at(0);
    else if (key == "out") cfg.out = val;
    else if (key == "threads") cfg.threads = parse_ints(val).at(0);
    else
      throw ValidationError("load_config: unknown key '" + key + "' (line " +
                            std::to_string(lineno) + ")");
  }
  return cfg;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_csv(std::ostream& os, const RunConfig& cfg,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  os << "# magic-spectra " << kVersion << " config=" << std::hex
     << cfg.hash() << std::dec << " tol=" << format_double(cfg.tol)
     << " seed=" << cfg.seed << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("write_csv: row width mismatch");
    for (size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

int effective_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int cap = hw;
  if (const char* env = std::getenv("MAGIC_SPECTRA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  if (requested > 0) return std::min(requested, cap);
  return cap;
}

}  // namespace msp
