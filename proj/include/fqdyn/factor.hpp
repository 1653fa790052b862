#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fqdyn/poly.hpp"

namespace fqdyn {

/// Complete factorization over F_q: unit * prod(factor^multiplicity) == input
/// exactly. Factors are monic irreducible and sorted canonically (degree,
/// then coefficient tuple as a base-q integer), so equal (input, seed) pairs
/// always produce identical objects.
struct Factorization {
    Poly input;
    std::uint64_t unit = 1;
    std::vector<std::pair<Poly, int>> parts;

    /// Recomputes unit * prod(parts) for audits.
    Poly expand() const;
};

/// Iterated-Frobenius irreducibility criterion: a of degree n is irreducible
/// iff x^(q^n) = x mod a and gcd(x^(q^(n/r)) - x, a) = 1 for every prime
/// r | n. Throws std::domain_error on constant or zero input.
bool is_irreducible(const Poly& a);

/// Squarefree decomposition: pairwise-coprime monic squarefree parts with
/// multiplicities whose weighted product is input/lc. The derivative-zero
/// branch (p-th powers) recurses with multiplicities scaled by p.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& a);

/// Distinct-degree stage: splits a monic squarefree polynomial into
/// (product of all irreducible factors of degree exactly d, d) pairs,
/// d ascending.
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& a);

/// Cantor-Zassenhaus equal-degree splitting for odd q. Input must be monic
/// squarefree with all irreducible factors of degree exactly d. Output is the
/// complete sorted factor list, deterministic for a given seed. Retries
/// internally; throws std::runtime_error if the retry cap is ever hit.
std::vector<Poly> equal_degree_split(const Poly& a, int d, std::uint64_t seed);

/// Full canonical factorization. Throws std::domain_error on zero input.
Factorization factor(const Poly& a, std::uint64_t seed = 0);

}  // namespace fqdyn
