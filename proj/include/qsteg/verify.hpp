#pragma once

#include <vector>

#include "qsteg/channel.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/measures.hpp"

namespace qsteg {

struct GentleReport {
  double lhs = 0.0;    // ‖Σ_x P(x)(𝒩^x(ρ^x) − Σ_{x'} 𝒩^{x'}(√Λ^{x'} ρ^x √Λ^{x'}))‖₁
  double eps = 0.0;    // 1 − Σ_x P(x) tr(Λ^x ρ^x)
  double bound = 0.0;  // 2√ε + ε
  bool holds = false;
};

GentleReport verify_gentle_composition(const std::vector<DensityMatrix>& states,
                                       const std::vector<QuantumChannel>& channels,
                                       const Povm& povm, const Pmf& p);

struct PjBoundReport {
  double lhs = 0.0;        // H_min^δ(P_J)
  double rhs = 0.0;        // H_min^{δ'}(ℳ^c(Π/M))
  double eps = 0.0;        // 1 − c of the cover
  double smoothing = 0.0;  // δ' = δ − 2√ε, or max(0, ·) when clamped
  std::vector<double> pj;
  bool vacuous = false;    // δ ≤ 2√ε
  bool holds = false;
};

// `m` acts on all n uses. Throws "bound vacuous" when δ ≤ 2√ε unless
// `clamp` is set, in which case the smoothing is max(0, δ − 2√ε).
PjBoundReport verify_pj_minentropy_bound(const QcCode& cover, const QuantumChannel& m,
                                         double delta, bool clamp = false);

}  // namespace qsteg
