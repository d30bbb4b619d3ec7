#pragma once

// Uniform periodic grid on [-L, L)^d truncating R^d, with rectangle-rule
// quadrature, radix-2 FFT, spectral kinetic flow and pointwise potential flow.
//
// Conventions:
//   - quadrature weight dx^d (rectangle rule == trapezoid on a periodic grid)
//   - inner product <f,g> = sum conj(f) g dx^d, conjugate-linear in f
//   - DFT forward unnormalized, inverse carries 1/n per dimension
//   - wavenumbers xi = pi*m/L, m in [-n/2, n/2)

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "qsync/errors.hpp"

namespace qsync {

using Complex = std::complex<double>;

// Mass floor: below this L2 norm, normalization-dependent quantities abort
// instead of dividing (a vanishing mass is one branch of the blow-up
// alternative for the normalized model).
inline constexpr double kEpsMass = 1e-8;

struct GridSpec {
  int dim = 1;               // 1 or 2
  int points_per_dim = 256;  // power of two, >= 16
  double half_width = 20.0;  // box is [-L, L)^dim

  double spacing() const { return 2.0 * half_width / points_per_dim; }

  std::size_t total_points() const {
    std::size_t n = static_cast<std::size_t>(points_per_dim);
    return dim == 1 ? n : n * n;
  }

  double coord(int i) const { return -half_width + i * spacing(); }

  bool operator==(const GridSpec&) const = default;

  static GridSpec create(int dim, int points_per_dim, double half_width) {
    if (dim != 1 && dim != 2)
      throw DomainError("grid: dim must be 1 or 2, got " + std::to_string(dim));
    if (points_per_dim < 16 || (points_per_dim & (points_per_dim - 1)) != 0)
      throw DomainError("grid: points_per_dim must be a power of two >= 16, got " +
                        std::to_string(points_per_dim));
    if (!(half_width > 0.0))
      throw DomainError("grid: half_width must be positive");
    return GridSpec{dim, points_per_dim, half_width};
  }
};

struct WaveField {
  GridSpec grid;
  std::vector<Complex> values;

  static WaveField zero(const GridSpec& g) {
    return WaveField{g, std::vector<Complex>(g.total_points())};
  }
};

inline void require_same_grid(const WaveField& f, const WaveField& g) {
  if (!(f.grid == g.grid) || f.values.size() != g.values.size())
    throw GridMismatchError("fields live on different grids");
}

inline bool field_finite(const WaveField& f) {
  for (const Complex& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Potentials

struct PotentialSpec {
  enum class Kind { Zero, Harmonic, Tabulated };
  Kind kind = Kind::Zero;
  double omega = 0.0;           // Harmonic: V = omega^2 |x|^2 / 2
  std::vector<double> samples;  // Tabulated: V on the grid, row-major

  static PotentialSpec zero() { return PotentialSpec{}; }

  static PotentialSpec harmonic(double omega) {
    if (!(omega > 0.0)) throw DomainError("harmonic potential: omega must be positive");
    return PotentialSpec{Kind::Harmonic, omega, {}};
  }

  static PotentialSpec tabulated(std::vector<double> samples) {
    for (double v : samples)
      if (!std::isfinite(v)) throw DomainError("tabulated potential: non-finite sample");
    return PotentialSpec{Kind::Tabulated, 0.0, std::move(samples)};
  }

  double value_at(const GridSpec& g, std::size_t flat) const {
    switch (kind) {
      case Kind::Zero:
        return 0.0;
      case Kind::Harmonic: {
        if (g.dim == 1) {
          double x = g.coord(static_cast<int>(flat));
          return 0.5 * omega * omega * x * x;
        }
        int n = g.points_per_dim;
        double x0 = g.coord(static_cast<int>(flat) / n);
        double x1 = g.coord(static_cast<int>(flat) % n);
        return 0.5 * omega * omega * (x0 * x0 + x1 * x1);
      }
      case Kind::Tabulated:
        if (samples.size() != g.total_points())
          throw GridMismatchError("tabulated potential does not match grid");
        return samples[flat];
    }
    return 0.0;
  }
};

// ---------------------------------------------------------------------------
// Quadrature

inline Complex inner_product(const WaveField& f, const WaveField& g) {
  require_same_grid(f, g);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    acc += std::conj(f.values[i]) * g.values[i];
  double w = std::pow(f.grid.spacing(), f.grid.dim);
  return acc * w;
}

inline double norm(const WaveField& f) {
  double acc = 0.0;
  for (const Complex& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * std::pow(f.grid.spacing(), f.grid.dim));
}

inline std::vector<double> center_of_mass(const WaveField& f) {
  const GridSpec& g = f.grid;
  double mass2 = 0.0;
  std::vector<double> first(g.dim, 0.0);
  int n = g.points_per_dim;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double p = std::norm(f.values[i]);
    mass2 += p;
    if (g.dim == 1) {
      first[0] += g.coord(static_cast<int>(i)) * p;
    } else {
      first[0] += g.coord(static_cast<int>(i) / n) * p;
      first[1] += g.coord(static_cast<int>(i) % n) * p;
    }
  }
  double w = std::pow(g.spacing(), g.dim);
  mass2 *= w;
  if (std::sqrt(mass2) < kEpsMass)
    throw VanishingMassError("center of mass undefined: field mass " +
                             std::to_string(std::sqrt(mass2)) + " below floor");
  for (double& c : first) c = c * w / mass2;
  return first;
}

// ---------------------------------------------------------------------------
// FFT (iterative radix-2, power-of-two sizes only)

namespace detail {

inline const std::vector<Complex>& twiddles(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Complex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& t = cache[n];
  if (t.empty()) {
    t.resize(n / 2);
    for (int k = 0; k < n / 2; ++k)
      t[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
  }
  return t;
}

// In-place transform; inverse applies the 1/n normalization.
inline void fft1d(Complex* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::vector<Complex>& w = twiddles(n);
  for (int len = 2; len <= n; len <<= 1) {
    int half = len >> 1;
    int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int h = 0; h < half; ++h) {
        Complex tw = w[static_cast<std::size_t>(h) * stride];
        if (inverse) tw = std::conj(tw);
        Complex u = a[i + h];
        Complex v = a[i + h + half] * tw;
        a[i + h] = u + v;
        a[i + h + half] = u - v;
      }
    }
  }
  if (inverse) {
    double s = 1.0 / n;
    for (int i = 0; i < n; ++i) a[i] *= s;
  }
}

inline void fft_grid(std::vector<Complex>& v, const GridSpec& g, bool inverse) {
  int n = g.points_per_dim;
  if (g.dim == 1) {
    fft1d(v.data(), n, inverse);
    return;
  }
  for (int r = 0; r < n; ++r) fft1d(v.data() + static_cast<std::size_t>(r) * n, n, inverse);
  std::vector<Complex> col(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) col[r] = v[static_cast<std::size_t>(r) * n + c];
    fft1d(col.data(), n, inverse);
    for (int r = 0; r < n; ++r) v[static_cast<std::size_t>(r) * n + c] = col[r];
  }
}

inline double wavenumber(int bin, int n, double half_width) {
  int m = bin < n / 2 ? bin : bin - n;
  return std::numbers::pi * m / half_width;
}

}  // namespace detail

inline WaveField dft(const WaveField& f) {
  WaveField out = f;
  detail::fft_grid(out.values, out.grid, false);
  return out;
}

inline WaveField idft(const WaveField& f) {
  WaveField out = f;
  detail::fft_grid(out.values, out.grid, true);
  return out;
}

// Exact flow of -(1/2) Laplacian over time dt, applied spectrally.
inline WaveField kinetic_phase(const WaveField& f, double dt) {
  const GridSpec& g = f.grid;
  int n = g.points_per_dim;
  WaveField out = f;
  detail::fft_grid(out.values, g, false);
  if (g.dim == 1) {
    for (int k = 0; k < n; ++k) {
      double xi = detail::wavenumber(k, n, g.half_width);
      out.values[k] *= std::polar(1.0, -0.5 * xi * xi * dt);
    }
  } else {
    for (int k0 = 0; k0 < n; ++k0) {
      double xi0 = detail::wavenumber(k0, n, g.half_width);
      for (int k1 = 0; k1 < n; ++k1) {
        double xi1 = detail::wavenumber(k1, n, g.half_width);
        out.values[static_cast<std::size_t>(k0) * n + k1] *=
            std::polar(1.0, -0.5 * (xi0 * xi0 + xi1 * xi1) * dt);
      }
    }
  }
  detail::fft_grid(out.values, g, true);
  return out;
}

// Exact pointwise flow of V(x) + Omega over time dt.
inline WaveField potential_phase(const WaveField& f, const PotentialSpec& pot,
                                 double omega_shift, double dt) {
  WaveField out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double v = pot.value_at(f.grid, i) + omega_shift;
    out.values[i] *= std::polar(1.0, -v * dt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field construction

// A exp(-|x-c|^2 / (2 w^2)) exp(i (p.(x-c) + phase))
inline WaveField gaussian_packet(const GridSpec& g, const std::vector<double>& center,
                                 const std::vector<double>& momentum, double width,
                                 double amplitude, double phase) {
  if (static_cast<int>(center.size()) != g.dim ||
      static_cast<int>(momentum.size()) != g.dim)
    throw DomainError("gaussian packet: center/momentum must have length dim");
  if (!(width > 0.0)) throw DomainError("gaussian packet: width must be positive");
  WaveField f = WaveField::zero(g);
  int n = g.points_per_dim;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double r2 = 0.0, px = 0.0;
    if (g.dim == 1) {
      double d = g.coord(static_cast<int>(i)) - center[0];
      r2 = d * d;
      px = momentum[0] * d;
    } else {
      double d0 = g.coord(static_cast<int>(i) / n) - center[0];
      double d1 = g.coord(static_cast<int>(i) % n) - center[1];
      r2 = d0 * d0 + d1 * d1;
      px = momentum[0] * d0 + momentum[1] * d1;
    }
    f.values[i] = std::polar(amplitude * std::exp(-r2 / (2.0 * width * width)), px + phase);
  }
  return f;
}

// Rescale to a target L2 norm.
inline WaveField normalized_to(const WaveField& f, double target_mass) {
  double m = norm(f);
  if (m < kEpsMass) throw VanishingMassError("cannot normalize: field mass below floor");
  WaveField out = f;
  double s = target_mass / m;
  for (Complex& v : out.values) v *= s;
  return out;
}

// Largest |psi| on the outermost grid layer; the periodic truncation of R^d is
// adequate only while this stays below ~1e-8.
inline double boundary_amplitude(const WaveField& f) {
  const GridSpec& g = f.grid;
  int n = g.points_per_dim;
  double best = 0.0;
  if (g.dim == 1) {
    best = std::max(std::abs(f.values.front()), std::abs(f.values[n - 1]));
  } else {
    for (int i = 0; i < n; ++i) {
      best = std::max(best, std::abs(f.values[static_cast<std::size_t>(0) * n + i]));
      best = std::max(best, std::abs(f.values[static_cast<std::size_t>(n - 1) * n + i]));
      best = std::max(best, std::abs(f.values[static_cast<std::size_t>(i) * n + 0]));
      best = std::max(best, std::abs(f.values[static_cast<std::size_t>(i) * n + (n - 1)]));
    }
  }
  return best;
}

}  // namespace qsync
