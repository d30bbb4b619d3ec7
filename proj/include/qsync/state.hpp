#pragma once

// Shared state types for the coupled systems: the ensemble of wave functions
// psi_1..psi_N, the intrinsic parameters theta_1..theta_N and the model
// parameters. Each oscillator decomposes as psi_j = lambda_j phi_j with
// lambda_j = ||psi_j||_2 and phi_j the unit-norm direction.

#include <cmath>
#include <string>
#include <vector>

#include "qsync/cucker_smale.hpp"
#include "qsync/errors.hpp"
#include "qsync/grid.hpp"

namespace qsync {

enum class ModelKind {
  StandardSL,  // uniform coupling, mass of every oscillator conserved
  Model1,      // theta-steered coupling with per-oscillator normalization
  Model2,      // theta-steered coupling without normalization
};

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::StandardSL:
      return "standard_sl";
    case ModelKind::Model1:
      return "model1";
    case ModelKind::Model2:
      return "model2";
  }
  return "?";
}

struct ModelParams {
  ModelKind kind = ModelKind::Model1;
  double k = 1.0;               // coupling strength, > 0
  double mu = 1.0;              // consensus strength, >= 0
  std::vector<double> omegas;   // natural frequencies; empty means all zero
  KernelSpec kernel;            // communication kernel h(r)
  PotentialSpec potential;      // V in H = -(1/2) Laplacian + V
  double dt = 1e-3;
  double t_final = 1.0;

  double omega(std::size_t j) const { return omegas.empty() ? 0.0 : omegas[j]; }
};

struct EnsembleState {
  std::vector<WaveField> fields;
  ThetaState theta;
  double time = 0.0;

  std::size_t size() const { return fields.size(); }
  const GridSpec& grid() const { return fields.front().grid; }
};

inline void validate_params(const ModelParams& p, std::size_t n) {
  if (!(p.k > 0.0)) throw ConfigError("model: coupling k must be positive");
  if (p.mu < 0.0) throw ConfigError("model: mu must be nonnegative");
  if (!(p.dt > 0.0)) throw ConfigError("model: dt must be positive");
  if (!(p.t_final >= p.dt)) throw ConfigError("model: t_final must be at least dt");
  if (!p.omegas.empty() && p.omegas.size() != n)
    throw ConfigError("model: omegas length must match the oscillator count");
}

inline void validate_state(const EnsembleState& s, const ModelParams& p) {
  if (s.fields.empty()) throw ConfigError("state: at least one oscillator required");
  if (s.theta.values.size() != s.fields.size())
    throw ConfigError("state: theta length must match the oscillator count");
  for (const WaveField& f : s.fields) require_same_grid(s.fields.front(), f);
  require_positive(s.theta);
  validate_params(p, s.fields.size());
  if (p.kind == ModelKind::StandardSL)
    for (double t : s.theta.values)
      if (std::abs(t - 1.0) > 1e-12)
        throw ConfigError("standard_sl requires every theta_j == 1 at initialization");
  if (p.kind != ModelKind::Model2)
    for (std::size_t j = 0; j < s.fields.size(); ++j)
      if (norm(s.fields[j]) < kEpsMass)
        throw VanishingMassError("oscillator " + std::to_string(j) +
                                 " starts below the mass floor");
}

}  // namespace qsync
