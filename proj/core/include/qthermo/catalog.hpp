#pragma once

#include "qthermo/channel.hpp"

namespace qthermo::catalog {

Channel identity(const MultiMatrixAlgebra& a);

/// x -> u x u^* on a single block M_n.
Channel unitary_conjugation(const CMat& u);

/// Qubit x -> lambda x + (1 - lambda) tr(x)/2 * 1.
Channel depolarizing(double lambda);

/// n -> n (x) 1_m from M_p into M_{pm}.
Homomorphism embedding(int p, int m);

/// x -> x (+) (x (x) 1_2) from M_2 into M_2 (+) M_4.
Homomorphism hybrid();

/// Diagonal inclusion C (+) C into M_2.
Homomorphism diagonal();

/// x -> x^T on M_n; not completely positive, so returned unvalidated.
Channel transpose_map(int n);

/// x -> tr(x) 1/n on M_n.
Channel erasure(int n);

/// Unital CP map N -> M with `rank` Kraus operators per target block, drawn
/// from a Ginibre ensemble and polar-corrected so that sum T T^* = 1.
/// ValidationError when no such map exists for this rank.
Channel random_channel(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m, int rank, Rng& rng);

}  // namespace qthermo::catalog
