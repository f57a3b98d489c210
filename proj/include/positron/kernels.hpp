#pragma once

// PolyBench 4.2 kernels ported over the arithmetic policies in arith.hpp.
//
// Initial data is the exact rational each PolyBench init formula denotes,
// rounded once into the mode's format. Inner accumulation loops go through
// the policy accumulator, so the quire mode uses the quire for:
//   covariance  column sums and every covariance dot product
//   gemm        the k loop (gemm_quire)
//   3mm         all three matrix products
//   cholesky    both update loops
//   durbin      the sum loop, 1 - alpha^2 and the z update
//   ludcmp      all four elimination / substitution loops
// fdtd-2d and seidel-2d have no accumulation loops; they run plain
// mul/add/sub in every mode, so the two posit modes coincide there.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "positron/arith.hpp"

namespace positron {

enum class kernel_id { covariance, gemm, three_mm, cholesky, durbin, ludcmp, fdtd2d, seidel2d };
enum class dataset { mini, small, medium, large };

inline constexpr std::array<kernel_id, 8> all_kernels{kernel_id::covariance, kernel_id::gemm,   kernel_id::three_mm,
                                                      kernel_id::cholesky,   kernel_id::durbin, kernel_id::ludcmp,
                                                      kernel_id::fdtd2d,     kernel_id::seidel2d};

inline constexpr std::string_view kernel_name(kernel_id k) {
  constexpr std::array<std::string_view, 8> names{"covariance", "gemm", "3mm", "cholesky", "durbin", "ludcmp", "fdtd-2d", "seidel-2d"};
  return names[static_cast<std::size_t>(k)];
}

inline constexpr std::string_view dataset_name(dataset d) {
  constexpr std::array<std::string_view, 4> names{"mini", "small", "medium", "large"};
  return names[static_cast<std::size_t>(d)];
}

inline std::optional<kernel_id> parse_kernel(std::string_view s) {
  if (s == "fdtd2d") return kernel_id::fdtd2d;
  if (s == "seidel2d") return kernel_id::seidel2d;
  if (s == "three_mm") return kernel_id::three_mm;
  for (auto k : all_kernels) {
    if (kernel_name(k) == s) return k;
  }
  return std::nullopt;
}

inline std::optional<dataset> parse_dataset(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (int i = 0; i < 4; ++i) {
    if (dataset_name(static_cast<dataset>(i)) == lower) return static_cast<dataset>(i);
  }
  return std::nullopt;
}

inline std::optional<arith_mode> parse_mode(std::string_view s) {
  for (auto m : {arith_mode::double_fma, arith_mode::posit64_quire, arith_mode::posit64_no_quire, arith_mode::reference}) {
    if (mode_name(m) == s) return m;
  }
  return std::nullopt;
}

/// Row-major dense matrix.
template <class T>
class matrix {
 public:
  matrix() = default;
  matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// ---- problem sizes --------------------------------------------------------

struct covariance_dims { int m, n; };
struct gemm_dims { int ni, nj, nk; };
struct three_mm_dims { int ni, nj, nk, nl, nm; };
struct stencil_dims { int tmax, nx, ny; };
struct seidel_dims { int tsteps, n; };

inline covariance_dims covariance_size(dataset d) {
  constexpr covariance_dims t[] = {{28, 32}, {80, 100}, {240, 260}, {1200, 1400}};
  return t[static_cast<int>(d)];
}
inline gemm_dims gemm_size(dataset d) {
  constexpr gemm_dims t[] = {{20, 25, 30}, {60, 70, 80}, {200, 220, 240}, {1000, 1100, 1200}};
  return t[static_cast<int>(d)];
}
inline three_mm_dims three_mm_size(dataset d) {
  constexpr three_mm_dims t[] = {{16, 18, 20, 22, 24}, {40, 50, 60, 70, 80}, {180, 190, 200, 210, 220}, {800, 900, 1000, 1100, 1200}};
  return t[static_cast<int>(d)];
}
/// cholesky, durbin and ludcmp share one size table.
inline int linear_size(dataset d) {
  constexpr int t[] = {40, 120, 400, 2000};
  return t[static_cast<int>(d)];
}
inline stencil_dims fdtd_size(dataset d) {
  constexpr stencil_dims t[] = {{20, 20, 30}, {40, 60, 80}, {100, 200, 240}, {500, 1000, 1200}};
  return t[static_cast<int>(d)];
}
inline seidel_dims seidel_size(dataset d) {
  constexpr seidel_dims t[] = {{20, 40}, {40, 120}, {100, 400}, {500, 2000}};
  return t[static_cast<int>(d)];
}

// ---- GEMM family ----------------------------------------------------------

template <class Arith>
struct gemm_problem {
  using value_type = typename Arith::value_type;
  value_type alpha, beta;
  matrix<value_type> a, b, c;
};

template <class Arith>
gemm_problem<Arith> gemm_init(const Arith& ar, gemm_dims d) {
  gemm_problem<Arith> p;
  p.alpha = ar.from_rational(3, 2);
  p.beta = ar.from_rational(6, 5);
  p.c = matrix<typename Arith::value_type>(d.ni, d.nj);
  p.a = matrix<typename Arith::value_type>(d.ni, d.nk);
  p.b = matrix<typename Arith::value_type>(d.nk, d.nj);
  for (int i = 0; i < d.ni; ++i)
    for (int j = 0; j < d.nj; ++j) p.c(i, j) = ar.from_rational((i * j + 1) % d.ni, d.ni);
  for (int i = 0; i < d.ni; ++i)
    for (int j = 0; j < d.nk; ++j) p.a(i, j) = ar.from_rational((i * (j + 1)) % d.nk, d.nk);
  for (int i = 0; i < d.nk; ++i)
    for (int j = 0; j < d.nj; ++j) p.b(i, j) = ar.from_rational((i * (j + 2)) % d.nj, d.nj);
  return p;
}

/// i, scale row of C, k, j order; C += (alpha*A)*B with the mode's MAC.
template <class Arith, class T = typename Arith::value_type>
void gemm_interchange(Arith& ar, const matrix<T>& a, const matrix<T>& b, matrix<T>& c, const T& alpha, const T& beta) {
  const std::size_t ni = c.rows(), nj = c.cols(), nk = a.cols();
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) c(i, j) = ar.mul(c(i, j), beta);
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t j = 0; j < nj; ++j) c(i, j) = ar.mac(c(i, j), ar.mul(alpha, a(i, k)), b(k, j));
  }
}

/// i, j, k dot products: accumulator = round(beta*C), += round(alpha*A)*B, one final rounding.
template <class Arith, class T = typename Arith::value_type>
void gemm_quire(Arith& ar, const matrix<T>& a, const matrix<T>& b, matrix<T>& c, const T& alpha, const T& beta) {
  const std::size_t ni = c.rows(), nj = c.cols(), nk = a.cols();
  auto acc = ar.make_accumulator();
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < nj; ++j) {
      acc.init(ar.mul(beta, c(i, j)));
      for (std::size_t k = 0; k < nk; ++k) acc.madd(ar.mul(alpha, a(i, k)), b(k, j));
      c(i, j) = acc.result();
    }
}

/// Tiled form: one accumulator init and rounding per element per k tile.
template <class Arith, class T = typename Arith::value_type>
void gemm_tiled(Arith& ar, const matrix<T>& a, const matrix<T>& b, matrix<T>& c, const T& alpha, const T& beta, std::size_t nt) {
  if (nt == 0) throw std::invalid_argument("gemm_tiled: tile size must be at least 1");
  const std::size_t ni = c.rows(), nj = c.cols(), nk = a.cols();
  auto acc = ar.make_accumulator();
  for (std::size_t ii = 0; ii < ni; ii += nt)
    for (std::size_t jj = 0; jj < nj; jj += nt) {
      const std::size_t i_end = std::min(ii + nt, ni), j_end = std::min(jj + nt, nj);
      for (std::size_t i = ii; i < i_end; ++i)
        for (std::size_t j = jj; j < j_end; ++j) c(i, j) = ar.mul(beta, c(i, j));
      for (std::size_t kk = 0; kk < nk; kk += nt) {
        const std::size_t k_end = std::min(kk + nt, nk);
        for (std::size_t i = ii; i < i_end; ++i)
          for (std::size_t j = jj; j < j_end; ++j) {
            acc.init(c(i, j));
            for (std::size_t k = kk; k < k_end; ++k) acc.madd(ar.mul(alpha, a(i, k)), b(k, j));
            c(i, j) = acc.result();
          }
      }
    }
}

// ---- the eight kernels ----------------------------------------------------
//
// Each returns its flattened output array.

template <class Arith, class T = typename Arith::value_type>
std::vector<T> covariance(Arith& ar, covariance_dims d) {
  const int m = d.m, n = d.n;
  matrix<T> data(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) data(i, j) = ar.from_rational(std::int64_t(i) * j, m);
  const T float_n = ar.from_rational(n, 1);
  const T one = ar.from_rational(1, 1);
  std::vector<T> mean(m);
  auto acc = ar.make_accumulator();
  for (int j = 0; j < m; ++j) {
    acc.init(ar.from_rational(0, 1));
    for (int i = 0; i < n; ++i) acc.madd(data(i, j), one);
    mean[j] = ar.div(acc.result(), float_n);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) data(i, j) = ar.sub(data(i, j), mean[j]);
  matrix<T> cov(m, m);
  const T n_minus_one = ar.sub(float_n, one);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      acc.init(ar.from_rational(0, 1));
      for (int k = 0; k < n; ++k) acc.madd(data(k, i), data(k, j));
      cov(i, j) = ar.div(acc.result(), n_minus_one);
      cov(j, i) = cov(i, j);
    }
  return cov.data();
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> gemm(Arith& ar, gemm_dims d, bool use_quire_form) {
  auto p = gemm_init(ar, d);
  if (use_quire_form) gemm_quire(ar, p.a, p.b, p.c, p.alpha, p.beta);
  else gemm_interchange(ar, p.a, p.b, p.c, p.alpha, p.beta);
  return p.c.data();
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> three_mm(Arith& ar, three_mm_dims d) {
  matrix<T> a(d.ni, d.nk), b(d.nk, d.nj), c(d.nj, d.nm), dd(d.nm, d.nl);
  for (int i = 0; i < d.ni; ++i)
    for (int j = 0; j < d.nk; ++j) a(i, j) = ar.from_rational((i * j + 1) % d.ni, 5 * d.ni);
  for (int i = 0; i < d.nk; ++i)
    for (int j = 0; j < d.nj; ++j) b(i, j) = ar.from_rational((i * (j + 1) + 2) % d.nj, 5 * d.nj);
  for (int i = 0; i < d.nj; ++i)
    for (int j = 0; j < d.nm; ++j) c(i, j) = ar.from_rational((i * (j + 3)) % d.nl, 5 * d.nl);
  for (int i = 0; i < d.nm; ++i)
    for (int j = 0; j < d.nl; ++j) dd(i, j) = ar.from_rational((i * (j + 2) + 2) % d.nk, 5 * d.nk);

  auto acc = ar.make_accumulator();
  const T zero = ar.from_rational(0, 1);
  auto product = [&](const matrix<T>& x, const matrix<T>& y) {
    matrix<T> out(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < y.cols(); ++j) {
        acc.init(zero);
        for (std::size_t k = 0; k < x.cols(); ++k) acc.madd(x(i, k), y(k, j));
        out(i, j) = acc.result();
      }
    return out;
  };
  const matrix<T> e = product(a, b);
  const matrix<T> f = product(c, dd);
  return product(e, f).data();
}

/// Exact numerators of the symmetric positive definite matrix shared by
/// cholesky and ludcmp; the value of entry (r, s) is num(r, s) / n^2.
inline matrix<std::int64_t> spd_numerators(int n) {
  matrix<std::int64_t> low(n, n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) low(i, j) = n - j;
    low(i, i) = n;
  }
  matrix<std::int64_t> out(n, n, 0);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      std::int64_t sum = 0;
      for (int t = 0; t < n; ++t) sum += low(r, t) * low(s, t);
      out(r, s) = sum;
    }
  return out;
}

template <class Arith, class T = typename Arith::value_type>
matrix<T> spd_init(const Arith& ar, int n) {
  const auto num = spd_numerators(n);
  matrix<T> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = ar.from_rational(num(i, j), std::int64_t(n) * n);
  return a;
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> cholesky(Arith& ar, int n) {
  matrix<T> a = spd_init(ar, n);
  auto acc = ar.make_accumulator();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      acc.init(a(i, j));
      for (int k = 0; k < j; ++k) acc.msub(a(i, k), a(j, k));
      a(i, j) = ar.div(acc.result(), a(j, j));
    }
    acc.init(a(i, i));
    for (int k = 0; k < i; ++k) acc.msub(a(i, k), a(i, k));
    a(i, i) = ar.sqrt(acc.result());
  }
  std::vector<T> out;
  out.reserve(std::size_t(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.push_back(a(i, j));
  return out;
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> durbin(Arith& ar, int n) {
  std::vector<T> r(n), y(n), z(n);
  for (int i = 0; i < n; ++i) r[i] = ar.from_rational(n + 1 - i, 1);
  const T one = ar.from_rational(1, 1);
  const T zero = ar.from_rational(0, 1);
  y[0] = ar.neg(r[0]);
  T beta = one;
  T alpha = ar.neg(r[0]);
  auto acc = ar.make_accumulator();
  for (int k = 1; k < n; ++k) {
    acc.init(one);
    acc.msub(alpha, alpha);
    beta = ar.mul(acc.result(), beta);
    acc.init(zero);
    for (int i = 0; i < k; ++i) acc.madd(r[k - i - 1], y[i]);
    const T sum = acc.result();
    alpha = ar.neg(ar.div(ar.add(r[k], sum), beta));
    for (int i = 0; i < k; ++i) z[i] = ar.mac(y[i], alpha, y[k - i - 1]);
    for (int i = 0; i < k; ++i) y[i] = z[i];
    y[k] = alpha;
  }
  return y;
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> ludcmp(Arith& ar, int n) {
  matrix<T> a = spd_init(ar, n);
  std::vector<T> b(n), x(n), y(n);
  for (int i = 0; i < n; ++i) b[i] = ar.from_rational(i + 1 + 8 * std::int64_t(n), 2 * std::int64_t(n));
  auto acc = ar.make_accumulator();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      acc.init(a(i, j));
      for (int k = 0; k < j; ++k) acc.msub(a(i, k), a(k, j));
      a(i, j) = ar.div(acc.result(), a(j, j));
    }
    for (int j = i; j < n; ++j) {
      acc.init(a(i, j));
      for (int k = 0; k < i; ++k) acc.msub(a(i, k), a(k, j));
      a(i, j) = acc.result();
    }
  }
  for (int i = 0; i < n; ++i) {
    acc.init(b[i]);
    for (int j = 0; j < i; ++j) acc.msub(a(i, j), y[j]);
    y[i] = acc.result();
  }
  for (int i = n - 1; i >= 0; --i) {
    acc.init(y[i]);
    for (int j = i + 1; j < n; ++j) acc.msub(a(i, j), x[j]);
    x[i] = ar.div(acc.result(), a(i, i));
  }
  return x;
}

/// Output is ex, ey, hz concatenated.
template <class Arith, class T = typename Arith::value_type>
std::vector<T> fdtd2d(Arith& ar, stencil_dims d) {
  const int nx = d.nx, ny = d.ny;
  matrix<T> ex(nx, ny), ey(nx, ny), hz(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      ex(i, j) = ar.from_rational(std::int64_t(i) * (j + 1), nx);
      ey(i, j) = ar.from_rational(std::int64_t(i) * (j + 2), ny);
      hz(i, j) = ar.from_rational(std::int64_t(i) * (j + 3), nx);
    }
  const T half = ar.from_rational(1, 2);
  const T c07 = ar.from_rational(7, 10);
  for (int t = 0; t < d.tmax; ++t) {
    const T fict = ar.from_rational(t, 1);
    for (int j = 0; j < ny; ++j) ey(0, j) = fict;
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j) ey(i, j) = ar.sub(ey(i, j), ar.mul(half, ar.sub(hz(i, j), hz(i - 1, j))));
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < ny; ++j) ex(i, j) = ar.sub(ex(i, j), ar.mul(half, ar.sub(hz(i, j), hz(i, j - 1))));
    for (int i = 0; i < nx - 1; ++i)
      for (int j = 0; j < ny - 1; ++j) {
        const T curl = ar.sub(ar.add(ar.sub(ex(i, j + 1), ex(i, j)), ey(i + 1, j)), ey(i, j));
        hz(i, j) = ar.sub(hz(i, j), ar.mul(c07, curl));
      }
  }
  std::vector<T> out = ex.data();
  out.insert(out.end(), ey.data().begin(), ey.data().end());
  out.insert(out.end(), hz.data().begin(), hz.data().end());
  return out;
}

template <class Arith, class T = typename Arith::value_type>
std::vector<T> seidel2d(Arith& ar, seidel_dims d) {
  const int n = d.n;
  matrix<T> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = ar.from_rational(std::int64_t(i) * (j + 2) + 2, n);
  const T nine = ar.from_rational(9, 1);
  for (int t = 0; t < d.tsteps; ++t)
    for (int i = 1; i <= n - 2; ++i)
      for (int j = 1; j <= n - 2; ++j) {
        T s = ar.add(a(i - 1, j - 1), a(i - 1, j));
        s = ar.add(s, a(i - 1, j + 1));
        s = ar.add(s, a(i, j - 1));
        s = ar.add(s, a(i, j));
        s = ar.add(s, a(i, j + 1));
        s = ar.add(s, a(i + 1, j - 1));
        s = ar.add(s, a(i + 1, j));
        s = ar.add(s, a(i + 1, j + 1));
        a(i, j) = ar.div(s, nine);
      }
  return a.data();
}

// ---- dispatch and metrics -------------------------------------------------

struct kernel_output {
  kernel_id kernel = kernel_id::gemm;
  dataset size = dataset::mini;
  arith_mode mode = arith_mode::reference;
  std::vector<high_prec> values;     // exact view of each element (0 where invalid)
  std::vector<bool> invalid;         // NaR or NaN/inf
  std::vector<std::uint64_t> raw;    // native bit patterns; 0 for the reference
  op_counters counters;

  std::size_t invalid_count() const { return static_cast<std::size_t>(std::count(invalid.begin(), invalid.end(), true)); }
};

template <class Arith>
void collect(kernel_output& out, const Arith& ar, const std::vector<typename Arith::value_type>& v) {
  out.values.clear();
  out.invalid.clear();
  out.raw.clear();
  out.values.reserve(v.size());
  for (const auto& x : v) {
    const bool bad = Arith::invalid(x);
    out.invalid.push_back(bad);
    out.values.push_back(bad ? high_prec(0) : Arith::to_high(x));
    out.raw.push_back(Arith::raw(x));
  }
  out.counters = ar.counters;
}

/// Runs one kernel with an explicit policy. `quire_form` selects gemm_quire
/// over gemm_interchange for gemm.
template <class Arith>
std::vector<typename Arith::value_type> run_kernel_with(Arith& ar, kernel_id k, dataset size, bool quire_form) {
  switch (k) {
    case kernel_id::covariance: return covariance(ar, covariance_size(size));
    case kernel_id::gemm: return gemm(ar, gemm_size(size), quire_form);
    case kernel_id::three_mm: return three_mm(ar, three_mm_size(size));
    case kernel_id::cholesky: return cholesky(ar, linear_size(size));
    case kernel_id::durbin: return durbin(ar, linear_size(size));
    case kernel_id::ludcmp: return ludcmp(ar, linear_size(size));
    case kernel_id::fdtd2d: return fdtd2d(ar, fdtd_size(size));
    case kernel_id::seidel2d: return seidel2d(ar, seidel_size(size));
  }
  throw std::invalid_argument("unknown kernel");
}

inline kernel_output run_kernel(kernel_id k, dataset size, arith_mode mode, unit_options units = {}) {
  kernel_output out;
  out.kernel = k;
  out.size = size;
  out.mode = mode;
  switch (mode) {
    case arith_mode::double_fma: {
      double_arith ar;
      collect(out, ar, run_kernel_with(ar, k, size, false));
      break;
    }
    case arith_mode::posit64_quire: {
      posit64_quire_arith ar(units);
      collect(out, ar, run_kernel_with(ar, k, size, true));
      break;
    }
    case arith_mode::posit64_no_quire: {
      posit64_plain_arith ar(units);
      collect(out, ar, run_kernel_with(ar, k, size, false));
      break;
    }
    case arith_mode::reference: {
      reference_arith<high_prec> ar;
      collect(out, ar, run_kernel_with(ar, k, size, false));
      break;
    }
  }
  return out;
}

/// Reference run at a chosen precision; used for convergence checks.
template <class Float>
kernel_output run_reference(kernel_id k, dataset size) {
  kernel_output out;
  out.kernel = k;
  out.size = size;
  out.mode = arith_mode::reference;
  reference_arith<Float> ar;
  collect(out, ar, run_kernel_with(ar, k, size, false));
  return out;
}

/// gemm through gemm_tiled with the quire policy; mode is reported as posit64-quire.
inline kernel_output run_gemm_tiled(dataset size, std::size_t nt, unit_options units = {}) {
  kernel_output out;
  out.kernel = kernel_id::gemm;
  out.size = size;
  out.mode = arith_mode::posit64_quire;
  posit64_quire_arith ar(units);
  auto p = gemm_init(ar, gemm_size(size));
  gemm_tiled(ar, p.a, p.b, p.c, p.alpha, p.beta, nt);
  collect(out, ar, p.c.data());
  return out;
}

struct error_metrics {
  high_prec mse = 0;
  high_prec max_abs_e = 0;
  std::size_t compared = 0;
  std::size_t excluded = 0;  // invalid in either array
};

inline error_metrics compute_metrics(const std::vector<high_prec>& values, const std::vector<bool>& invalid,
                                     const std::vector<high_prec>& ref, const std::vector<bool>& ref_invalid) {
  if (values.size() != ref.size() || invalid.size() != values.size() || ref_invalid.size() != ref.size()) {
    throw std::invalid_argument("compute_metrics: shape mismatch");
  }
  error_metrics m;
  high_prec sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (invalid[i] || ref_invalid[i]) {
      ++m.excluded;
      continue;
    }
    const high_prec diff = abs(values[i] - ref[i]);
    sum += diff * diff;
    if (diff > m.max_abs_e) m.max_abs_e = diff;
    ++m.compared;
  }
  if (m.compared > 0) m.mse = sum / m.compared;
  return m;
}

inline error_metrics compute_metrics(const kernel_output& out, const kernel_output& ref) {
  return compute_metrics(out.values, out.invalid, ref.values, ref.invalid);
}

}  // namespace positron
