#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsteg/core.hpp"
#include "qsteg/measures.hpp"

namespace qsteg {

enum class HashSearch {
  kAuto,            // exhaustive when |X| ≤ 12 and M ≤ 4, random functions otherwise
  kExhaustive,
  kRandomFunction,
  kTwoUniversal,    // x ↦ ((a·x + b) mod p) mod M
};

// Conditional row used for messages whose preimage carries no probability.
enum class FallbackRow {
  kPreimageUniform,  // uniform over f⁻¹(w) when nonempty, else P_X
  kPrior,            // P_X
};

struct HashOptions {
  HashSearch search = HashSearch::kAuto;
  FallbackRow fallback = FallbackRow::kPreimageUniform;
};

struct HashQuality {
  double defect = 0.0;  // ‖Q_X − P_X‖₁
  double error = 0.0;   // P_Q[W ≠ Ŵ]
};

// Messages and symbols are 0-based.
struct HashEncoder {
  std::size_t alphabet = 0;
  int messages = 1;
  std::vector<int> f;                      // f[x] ∈ [0, M)
  std::vector<std::vector<double>> cond;   // cond[w][x] = Q_{X|W}(x|w)
  HashQuality quality;
  bool within_tolerance = true;            // quality.defect ≤ ε
  bool fallback_used = false;              // some row had P_W(w) = 0
  std::string search;                      // strategy that produced f
};

HashEncoder encoder_from_function(const Pmf& p, const std::vector<int>& f,
                                  int messages,
                                  FallbackRow fallback = FallbackRow::kPreimageUniform);

HashQuality measure_hash_quality(const HashEncoder& enc, const Pmf& p);

HashEncoder build_classical_hash(const Pmf& p, int messages, double eps,
                                 std::uint64_t seed, int attempts = 64,
                                 const HashOptions& opts = {});

struct QuantumHashCode {
  int messages = 1;
  std::vector<DensityMatrix> g;   // g[w] = Σ_x Q(x|w)|x⟩⟨x|
  Povm povm;                      // Λ^w = Σ_{f(x)=w} |x⟩⟨x|
  HashEncoder classical;
  Matrix eigenbasis;              // column x is |x⟩
  std::vector<double> spectrum;   // P_X
  double defect = 0.0;            // ‖(1/M)Σ_w g(w) − ρ‖₁
  double success = 1.0;           // (1/M)Σ_w tr(Λ^w g(w))
};

QuantumHashCode build_quantum_hash(const DensityMatrix& rho, int messages,
                                   double eps, std::uint64_t seed,
                                   int attempts = 64, const HashOptions& opts = {});

}  // namespace qsteg
