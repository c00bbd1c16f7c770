#pragma once

#include <random>

#include "qsteg/channel.hpp"
#include "qsteg/measures.hpp"

namespace qsteg {

// Seeded generators for randomized checks. All draw from a caller-owned
// engine so that a sequence of instances is reproducible from one seed.
using Rng = std::mt19937_64;

Matrix random_ginibre(long rows, long cols, Rng& rng);
// Induced measure: G G† / tr with G of size dim × rank.
DensityMatrix random_density(long dim, Rng& rng, long rank = 0);
Vector random_pure(long dim, Rng& rng);
// Kraus operators cut from a random isometry into dim_out·kraus dimensions.
QuantumChannel random_channel(long dim_in, long dim_out, long kraus, Rng& rng);
// Elements S^{-1/2} A_i S^{-1/2} with A_i random positive.
Povm random_povm(long dim, std::size_t outcomes, Rng& rng);
Pmf random_pmf(std::size_t size, Rng& rng);

}  // namespace qsteg
