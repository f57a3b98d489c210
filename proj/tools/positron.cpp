// positron: benchmark runner, tile sweep, Xposit assembler and oracle checks.
//
//   positron bench --kernel gemm --size mini --mode posit64-quire --csv out.csv
//   positron sweep-tiles --sizes 5..25,30..40:2
//   positron asm prog.s | positron dis
//   positron verify --exhaustive-width 8
//
// Exit codes: 0 success, 1 configuration error, 2 kernel failure or
// verification mismatch.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "positron/harness.hpp"
#include "positron/verify.hpp"
#include "xposit_io.hpp"

namespace {

using namespace positron;

constexpr int exit_config = 1;
constexpr int exit_failure = 2;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<kernel_id> parse_kernels(const std::vector<std::string>& names) {
  std::vector<kernel_id> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.assign(all_kernels.begin(), all_kernels.end());
      continue;
    }
    const auto k = parse_kernel(n);
    if (!k) throw config_error("unknown kernel '" + n + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
  }
  return out;
}

std::vector<dataset> parse_sizes(const std::vector<std::string>& names, bool allow_large) {
  std::vector<dataset> out;
  for (const auto& n : names) {
    const auto d = parse_dataset(n);
    if (!d) throw config_error("unknown size '" + n + "' (mini, small, medium, large)");
    if ((*d == dataset::medium || *d == dataset::large) && !allow_large) {
      throw config_error("size '" + n + "' needs --allow-large");
    }
    if (std::find(out.begin(), out.end(), *d) == out.end()) out.push_back(*d);
  }
  return out;
}

std::vector<arith_mode> parse_modes(const std::vector<std::string>& names) {
  std::vector<arith_mode> out;
  for (const auto& n : names) {
    if (n == "all") {
      out = {arith_mode::double_fma, arith_mode::posit64_quire, arith_mode::posit64_no_quire, arith_mode::reference};
      continue;
    }
    const auto m = parse_mode(n);
    if (!m) throw config_error("unknown mode '" + n + "' (double-fma, posit64-quire, posit64-no-quire, reference)");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  return out;
}

std::vector<std::size_t> parse_tiles(const std::string& text) {
  try {
    return parse_range_list(text);
  } catch (const std::exception& e) {
    throw config_error(std::string("bad tile list: ") + e.what());
  }
}

int write_report(const matrix_report& rep, const std::string& csv, bool timing) {
  const std::string text = format_csv(rep.results, timing);
  if (csv == "-") {
    std::cout << text;
  } else {
    try {
      emit_csv(rep.results, csv, timing);
    } catch (const std::exception& e) {
      std::cerr << "positron: " << e.what() << '\n';
      return exit_config;
    }
  }
  int status = 0;
  for (const auto& r : rep.results) {
    if (r.failed()) {
      std::cerr << "positron: " << kernel_name(r.kernel) << '/' << dataset_name(r.size) << '/' << mode_name(r.mode)
                << " failed: " << r.error << '\n';
      status = exit_failure;
    }
  }
  return status;
}

int open_and_run(const std::string& path, int (*fn)(std::istream&, const std::string&, std::ostream&, std::ostream&)) {
  if (path == "-") return fn(std::cin, "<stdin>", std::cout, std::cerr);
  std::ifstream in(path);
  if (!in) {
    std::cerr << "positron: cannot open " << path << '\n';
    return exit_config;
  }
  return fn(in, path, std::cout, std::cerr);
}

int report_verify(const std::vector<verify_stats>& stats) {
  int status = 0;
  for (const auto& s : stats) {
    std::cout << s.op << " posit" << s.width << ": " << s.cases << " cases, " << s.mismatches << " mismatches";
    if (s.first_failure) {
      const auto& v = *s.first_failure;
      std::cout << " (first: " << std::hex << "0x" << v.in1 << " 0x" << v.in2 << " expected 0x" << v.expected
                << " got 0x" << evaluate(v) << std::dec << ')';
      status = exit_failure;
    }
    std::cout << '\n';
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posit arithmetic, quire and Xposit toolkit"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "Run kernels and report MSE / MaxAbsE against the reference");
  std::vector<std::string> kernels{"all"}, sizes{"mini"}, modes{"double-fma", "posit64-quire", "posit64-no-quire"};
  std::string csv = "-", tiles, div_sqrt = "exact", mul_unit = "exact";
  unsigned jobs = 1;
  bool no_timing = false, allow_large = false;
  bench->add_option("--kernel", kernels, "Kernels (comma separated or 'all')")->delimiter(',')->capture_default_str();
  bench->add_option("--size", sizes, "Dataset sizes: mini, small, medium, large")->delimiter(',')->capture_default_str();
  bench->add_option("--mode", modes, "Modes: double-fma, posit64-quire, posit64-no-quire, reference, all")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--tiles", tiles, "Extra gemm_tiled rows, e.g. 5..25,30..40:2");
  bench->add_option("--csv", csv, "Output CSV path, '-' for stdout")->capture_default_str();
  bench->add_option("--div-sqrt", div_sqrt, "Posit divide/sqrt unit")->check(CLI::IsMember({"exact", "approx"}))->capture_default_str();
  bench->add_option("--mul", mul_unit, "Posit multiply unit")->check(CLI::IsMember({"exact", "approx"}))->capture_default_str();
  bench->add_option("--jobs", jobs, "Configurations run in parallel")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--no-timing", no_timing, "Leave wall_s empty so reruns are byte-identical");
  bench->add_flag("--allow-large", allow_large, "Permit medium and large datasets");

  // sweep-tiles
  auto* sweep = app.add_subcommand("sweep-tiles", "Tiled GEMM accuracy over a tile-size range");
  std::string sweep_sizes = "5..25,30..40:2", sweep_csv = "-";
  std::vector<std::string> sweep_datasets{"mini", "small"};
  unsigned sweep_jobs = 1;
  bool sweep_no_timing = false, sweep_allow_large = false;
  sweep->add_option("--sizes", sweep_sizes, "Tile sizes")->capture_default_str();
  sweep->add_option("--dataset", sweep_datasets, "GEMM dataset sizes")->delimiter(',')->capture_default_str();
  sweep->add_option("--csv", sweep_csv, "Output CSV path, '-' for stdout")->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "Configurations run in parallel")->check(CLI::PositiveNumber);
  sweep->add_flag("--no-timing", sweep_no_timing, "Leave wall_s empty");
  sweep->add_flag("--allow-large", sweep_allow_large, "Permit medium and large datasets");

  // asm / dis
  auto* asm_cmd = app.add_subcommand("asm", "Assemble Xposit instructions to hex words");
  std::string asm_input = "-";
  asm_cmd->add_option("input", asm_input, "Assembly file, '-' for stdin");
  auto* dis_cmd = app.add_subcommand("dis", "Disassemble hex words to Xposit instructions");
  std::string dis_input = "-";
  dis_cmd->add_option("input", dis_input, "File of hex words, '-' for stdin");

  // verify
  auto* verify = app.add_subcommand("verify", "Check posit operations against the exact oracle");
  std::optional<int> exhaustive_width, sample_width;
  std::uint64_t samples = 100000, seed = 1, count = 1000;
  std::string vectors_in, vectors_out, vec_op = "add";
  int vec_width = 16;
  verify->add_option("--exhaustive-width", exhaustive_width, "Every operand pair at this width")->check(CLI::IsMember({8}));
  verify->add_option("--sample-width", sample_width, "Random operand pairs at this width")->check(CLI::IsMember({8, 16, 32, 64}));
  verify->add_option("--samples", samples, "Pairs per op for --sample-width")->capture_default_str();
  verify->add_option("--seed", seed, "Random seed")->capture_default_str();
  verify->add_option("--vectors", vectors_in, "Check a test-vector file")->check(CLI::ExistingFile);
  verify->add_option("--emit-vectors", vectors_out, "Write oracle-labelled vectors to a file");
  verify->add_option("--op", vec_op, "Op for --emit-vectors")->check(CLI::IsMember({"add", "sub", "mul", "div", "sqrt", "min", "max", "eq", "lt", "le"}))->capture_default_str();
  verify->add_option("--width", vec_width, "Width for --emit-vectors")->check(CLI::IsMember({8, 16, 32, 64}))->capture_default_str();
  verify->add_option("--count", count, "Vectors for --emit-vectors")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (bench->parsed()) {
      run_config cfg;
      cfg.kernels = parse_kernels(kernels);
      cfg.sizes = parse_sizes(sizes, allow_large);
      cfg.modes = parse_modes(modes);
      if (!tiles.empty()) cfg.tiles = parse_tiles(tiles);
      cfg.units = {mul_unit == "approx", div_sqrt == "approx"};
      cfg.jobs = jobs;
      return write_report(run_matrix(cfg), csv, !no_timing);
    }
    if (sweep->parsed()) {
      run_config cfg;
      cfg.kernels = {kernel_id::gemm};
      cfg.sizes = parse_sizes(sweep_datasets, sweep_allow_large);
      cfg.modes = {arith_mode::posit64_quire, arith_mode::posit64_no_quire};
      cfg.tiles = parse_tiles(sweep_sizes);
      cfg.jobs = sweep_jobs;
      return write_report(run_matrix(cfg), sweep_csv, !sweep_no_timing);
    }
    if (asm_cmd->parsed()) return open_and_run(asm_input, tools::assemble_stream);
    if (dis_cmd->parsed()) return open_and_run(dis_input, tools::disassemble_stream);
    if (verify->parsed()) {
      if (!exhaustive_width && !sample_width && vectors_in.empty() && vectors_out.empty()) {
        throw config_error("verify: choose --exhaustive-width, --sample-width, --vectors or --emit-vectors");
      }
      int status = 0;
      if (exhaustive_width) status = std::max(status, report_verify(verify_exhaustive<8>()));
      if (sample_width) {
        switch (*sample_width) {
          case 8: status = std::max(status, report_verify(verify_sampled<8>(samples, seed))); break;
          case 16: status = std::max(status, report_verify(verify_sampled<16>(samples, seed))); break;
          case 32: status = std::max(status, report_verify(verify_sampled<32>(samples, seed))); break;
          default: status = std::max(status, report_verify(verify_sampled<64>(samples, seed))); break;
        }
      }
      if (!vectors_in.empty()) {
        std::ifstream in(vectors_in);
        const auto vs = read_vectors(in);
        std::uint64_t bad = 0;
        for (const auto& v : vs) {
          if (evaluate(v) != v.expected) {
            if (bad++ < 10) std::cout << "mismatch: " << v.op << ' ' << v.width << std::hex << " 0x" << v.in1 << " 0x" << v.in2
                                      << " expected 0x" << v.expected << " got 0x" << evaluate(v) << std::dec << '\n';
          }
        }
        std::cout << vectors_in << ": " << vs.size() << " vectors, " << bad << " mismatches\n";
        if (bad) status = exit_failure;
      }
      if (!vectors_out.empty()) {
        std::vector<test_vector> vs;
        switch (vec_width) {
          case 8: vs = generate_vectors<8>(vec_op, count, seed); break;
          case 16: vs = generate_vectors<16>(vec_op, count, seed); break;
          case 32: vs = generate_vectors<32>(vec_op, count, seed); break;
          default: vs = generate_vectors<64>(vec_op, count, seed); break;
        }
        std::ofstream out(vectors_out);
        if (!out) throw config_error("cannot open " + vectors_out + " for writing");
        write_vectors(out, vs);
      }
      return status;
    }
  } catch (const config_error& e) {
    std::cerr << "positron: " << e.what() << '\n';
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "positron: " << e.what() << '\n';
    return exit_config;
  }
  return 0;
}
