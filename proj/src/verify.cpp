#include "qsteg/verify.hpp"

#include <cmath>

#include "qsteg/error.hpp"
#include "qsteg/stego.hpp"

namespace qsteg {

GentleReport verify_gentle_composition(const std::vector<DensityMatrix>& states,
                                       const std::vector<QuantumChannel>& channels,
                                       const Povm& povm, const Pmf& p) {
  const std::size_t n = states.size();
  if (channels.size() != n || povm.size() != n || p.size() != n || n == 0) {
    throw Error(ErrorKind::kShapeError, "states, channels, POVM and PMF must align");
  }
  std::vector<Matrix> roots;
  for (const auto& e : povm.elements()) roots.push_back(psd_power(e, 0.5));
  const long dout = channels.front().dim_out();
  Matrix diff = Matrix::Zero(dout, dout);
  double success = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const Matrix& rho = states[x].matrix();
    success += p[x] * (povm[x] * rho).trace().real();
    Matrix term = qsteg::apply(channels[x], rho);
    for (std::size_t y = 0; y < n; ++y) {
      term -= qsteg::apply(channels[y], Matrix(roots[y] * rho * roots[y]));
    }
    diff += p[x] * term;
  }
  GentleReport r;
  r.lhs = trace_norm(diff);
  r.eps = std::max(0.0, 1.0 - success);
  r.bound = 2.0 * std::sqrt(r.eps) + r.eps;
  r.holds = r.lhs <= r.bound + 1e-9;
  return r;
}

PjBoundReport verify_pj_minentropy_bound(const QcCode& cover, const QuantumChannel& m,
                                         double delta, bool clamp) {
  PjBoundReport r;
  r.eps = std::max(0.0, 1.0 - cover.recovery_constant);
  const double shift = 2.0 * std::sqrt(r.eps);
  r.vacuous = delta <= shift;
  if (r.vacuous && !clamp) {
    throw Error(ErrorKind::kBoundVacuous,
                "δ = " + std::to_string(delta) + " does not exceed 2√ε = " +
                    std::to_string(shift));
  }
  r.smoothing = std::max(0.0, delta - shift);
  const KrausSplit split = split_correctable_kraus(cover, m);
  r.pj = split.pj;
  r.lhs = smooth_min_entropy_classical(r.pj, delta);
  const Matrix code_state = split.projector / static_cast<double>(cover.messages);
  r.rhs = smooth_min_entropy_quantum(DensityMatrix(complementary(m, code_state), 1e-9),
                                     r.smoothing);
  r.holds = r.lhs >= r.rhs - 1e-9;
  return r;
}

}  // namespace qsteg
