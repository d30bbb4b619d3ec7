#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qsync/grid.hpp"

namespace testutil {

// Uniform double in [0,1) from raw mt19937_64 bits; avoids the
// implementation-defined std distributions so tests are reproducible anywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Smooth random field: a few Gaussian bumps with random phases, so spectral
// operations stay accurate while the samples look generic.
inline qsync::WaveField random_smooth_field(const qsync::GridSpec& g, std::mt19937_64& rng,
                                            int bumps = 4) {
  qsync::WaveField f = qsync::WaveField::zero(g);
  for (int b = 0; b < bumps; ++b) {
    std::vector<double> c(g.dim), p(g.dim);
    for (int d = 0; d < g.dim; ++d) {
      c[d] = uniform(rng, -3.0, 3.0);
      p[d] = uniform(rng, -2.0, 2.0);
    }
    double w = uniform(rng, 0.7, 1.6);
    double a = uniform(rng, 0.2, 1.0);
    double ph = uniform(rng, 0.0, 6.283185307179586);
    qsync::WaveField bump = qsync::gaussian_packet(g, c, p, w, a, ph);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += bump.values[i];
  }
  return f;
}

struct Packet {
  double center = 0.0;
  double momentum = 0.0;
  double width = 1.0;
  double phase = 0.0;
  double mass = 1.0;  // target L2 norm
};

inline qsync::WaveField packet_field(const qsync::GridSpec& g, const Packet& p) {
  qsync::WaveField f =
      qsync::gaussian_packet(g, {p.center}, {p.momentum}, p.width, 1.0, p.phase);
  return qsync::normalized_to(f, p.mass);
}

}  // namespace testutil
