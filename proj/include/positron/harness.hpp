#pragma once

// Benchmark matrix runner and CSV I/O.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "positron/kernels.hpp"

namespace positron {

struct benchmark_result {
  kernel_id kernel = kernel_id::gemm;
  dataset size = dataset::mini;
  arith_mode mode = arith_mode::reference;
  std::optional<std::size_t> tile;  // gemm_tiled rows only
  high_prec mse = 0;
  high_prec max_abs_e = 0;
  op_counters counters;
  std::size_t nar_count = 0;
  double wall_s = 0;
  std::string error;  // set on a failed configuration; metrics are then NaN

  bool failed() const { return !error.empty(); }
};

inline auto sort_key(const benchmark_result& r) {
  return std::make_tuple(static_cast<int>(r.kernel), static_cast<int>(r.size), static_cast<int>(r.mode),
                         r.tile.has_value(), r.tile.value_or(0));
}

struct run_config {
  std::vector<kernel_id> kernels;
  std::vector<dataset> sizes;
  std::vector<arith_mode> modes;
  std::vector<std::size_t> tiles;  // extra gemm_tiled rows for gemm
  unit_options units;
  unsigned jobs = 1;
};

struct matrix_report {
  std::vector<benchmark_result> results;  // sorted
  std::size_t reference_runs = 0;
};

namespace detail {

/// Runs job(i) for i in [0, count) on up to `jobs` threads.
template <class Job>
void parallel_for(std::size_t count, unsigned jobs, Job job) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline benchmark_result failed_result(benchmark_result r, const std::string& what) {
  r.error = what;
  r.mse = std::numeric_limits<high_prec>::quiet_NaN();
  r.max_abs_e = std::numeric_limits<high_prec>::quiet_NaN();
  return r;
}

}  // namespace detail

inline matrix_report run_matrix(const run_config& cfg) {
  struct task {
    kernel_id kernel;
    dataset size;
    arith_mode mode;
    std::optional<std::size_t> tile;
  };
  std::vector<std::pair<kernel_id, dataset>> ref_keys;
  std::vector<task> tasks;
  for (auto k : cfg.kernels)
    for (auto s : cfg.sizes) {
      ref_keys.emplace_back(k, s);
      for (auto m : cfg.modes) tasks.push_back({k, s, m, std::nullopt});
      if (k == kernel_id::gemm)
        for (auto nt : cfg.tiles) tasks.push_back({k, s, arith_mode::posit64_quire, nt});
    }

  matrix_report report;
  std::vector<std::optional<kernel_output>> refs(ref_keys.size());
  std::vector<std::string> ref_errors(ref_keys.size());
  std::atomic<std::size_t> ref_runs{0};
  detail::parallel_for(ref_keys.size(), cfg.jobs, [&](std::size_t i) {
    try {
      refs[i] = run_kernel(ref_keys[i].first, ref_keys[i].second, arith_mode::reference);
      ++ref_runs;
    } catch (const std::exception& e) {
      ref_errors[i] = std::string("reference run failed: ") + e.what();
    }
  });
  report.reference_runs = ref_runs;

  auto ref_index = [&](kernel_id k, dataset s) {
    return static_cast<std::size_t>(std::find(ref_keys.begin(), ref_keys.end(), std::make_pair(k, s)) - ref_keys.begin());
  };

  report.results.resize(tasks.size());
  detail::parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const task& t = tasks[i];
    benchmark_result r;
    r.kernel = t.kernel;
    r.size = t.size;
    r.mode = t.mode;
    r.tile = t.tile;
    const std::size_t ri = ref_index(t.kernel, t.size);
    if (!refs[ri]) {
      report.results[i] = detail::failed_result(r, ref_errors[ri]);
      return;
    }
    try {
      const auto start = std::chrono::steady_clock::now();
      kernel_output out;
      if (t.tile) out = run_gemm_tiled(t.size, *t.tile, cfg.units);
      else if (t.mode == arith_mode::reference) out = *refs[ri];
      else out = run_kernel(t.kernel, t.size, t.mode, cfg.units);
      r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const auto m = compute_metrics(out, *refs[ri]);
      r.mse = m.mse;
      r.max_abs_e = m.max_abs_e;
      r.counters = out.counters;
      r.nar_count = m.excluded;
      report.results[i] = r;
    } catch (const std::exception& e) {
      report.results[i] = detail::failed_result(r, e.what());
    }
  });
  std::sort(report.results.begin(), report.results.end(),
            [](const benchmark_result& a, const benchmark_result& b) { return sort_key(a) < sort_key(b); });
  return report;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr std::string_view csv_header = "kernel,size,mode,tile,mse,max_abs_e,muls,adds,qmadds,qrounds,nar_count,wall_s";

/// 17 significant digits, scientific.
inline std::string format_sci(const high_prec& v) {
  if (isnan(v)) return "nan";
  return v.str(16, std::ios_base::scientific);
}
inline std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string format_csv(std::vector<benchmark_result> results, bool timing = true) {
  std::sort(results.begin(), results.end(),
            [](const benchmark_result& a, const benchmark_result& b) { return sort_key(a) < sort_key(b); });
  std::ostringstream os;
  os << csv_header << '\n';
  for (const auto& r : results) {
    os << kernel_name(r.kernel) << ',' << dataset_name(r.size) << ',' << mode_name(r.mode) << ','
       << (r.tile ? std::to_string(*r.tile) : std::string()) << ',' << format_sci(r.mse) << ',' << format_sci(r.max_abs_e)
       << ',' << r.counters.muls << ',' << r.counters.adds << ',' << r.counters.qmadds << ',' << r.counters.qrounds << ','
       << r.nar_count << ',' << (timing ? format_sci(r.wall_s) : std::string()) << '\n';
  }
  return os.str();
}

inline void emit_csv(const std::vector<benchmark_result>& results, const std::string& path, bool timing = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << format_csv(results, timing);
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::uint64_t parse_u64(const std::string& s, const char* field) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument(std::string("bad ") + field + ": " + s);
  return v;
}

}  // namespace detail

/// Inverse of format_csv. Throws std::invalid_argument on malformed input.
inline std::vector<benchmark_result> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != csv_header) throw std::invalid_argument("missing or unexpected CSV header");
  std::vector<benchmark_result> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 12) throw std::invalid_argument("expected 12 fields: " + line);
    benchmark_result r;
    const auto k = parse_kernel(f[0]);
    const auto s = parse_dataset(f[1]);
    const auto m = parse_mode(f[2]);
    if (!k || !s || !m) throw std::invalid_argument("unknown kernel/size/mode: " + line);
    r.kernel = *k;
    r.size = *s;
    r.mode = *m;
    if (!f[3].empty()) r.tile = detail::parse_u64(f[3], "tile");
    r.mse = f[4] == "nan" ? std::numeric_limits<high_prec>::quiet_NaN() : high_prec(f[4]);
    r.max_abs_e = f[5] == "nan" ? std::numeric_limits<high_prec>::quiet_NaN() : high_prec(f[5]);
    r.counters.muls = detail::parse_u64(f[6], "muls");
    r.counters.adds = detail::parse_u64(f[7], "adds");
    r.counters.qmadds = detail::parse_u64(f[8], "qmadds");
    r.counters.qrounds = detail::parse_u64(f[9], "qrounds");
    r.nar_count = detail::parse_u64(f[10], "nar_count");
    r.wall_s = f[11].empty() ? 0.0 : std::stod(f[11]);
    out.push_back(r);
  }
  return out;
}

/// "5..25,30..40:2" -> 5, 6, ..., 25, 30, 32, ..., 40 (sorted, unique).
inline std::vector<std::size_t> parse_range_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : detail::split(text, ',')) {
    if (part.empty()) throw std::invalid_argument("empty item in range list: " + text);
    std::size_t step = 1;
    std::string body = part;
    if (const auto colon = body.find(':'); colon != std::string::npos) {
      step = detail::parse_u64(body.substr(colon + 1), "step");
      body = body.substr(0, colon);
      if (step == 0) throw std::invalid_argument("step must be positive: " + part);
    }
    std::size_t lo, hi;
    if (const auto dots = body.find(".."); dots != std::string::npos) {
      lo = detail::parse_u64(body.substr(0, dots), "range start");
      hi = detail::parse_u64(body.substr(dots + 2), "range end");
    } else {
      lo = hi = detail::parse_u64(body, "value");
    }
    if (lo == 0 || lo > hi) throw std::invalid_argument("bad range: " + part);
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Tile sizes 5..25 and 30..40 in steps of 2.
inline std::vector<std::size_t> default_tile_sweep() { return parse_range_list("5..25,30..40:2"); }

}  // namespace positron
