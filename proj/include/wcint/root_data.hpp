#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wcint/rational.hpp"

namespace wcint {

enum class Family { A, B, C, D, E, F, G };

/// A simple Cartan type such as A3, B2, G2.  Families with a fixed rank
/// (G2, F4, E6-E8) must carry exactly that rank; the classical families
/// are restricted to ranks where they name distinct irreducible systems
/// (A: r>=1, B/C: r>=2, D: r>=3).
struct CartanType {
    Family family = Family::A;
    int rank = 1;

    /// Parses "A2", "b3", "G2" (case-insensitive); throws std::invalid_argument.
    static CartanType parse(std::string_view s);

    std::string name() const;
    bool operator==(const CartanType&) const = default;
};

/// Root-system data for one simple type, with roots kept in integer
/// ambient coordinates (scaled by 2 for the families with half-integral
/// Bourbaki coordinates, which changes nothing downstream).
struct RootDatum {
    CartanType type;
    int rank = 0;
    int ambient_dim = 0;
    std::vector<std::vector<long long>> simple_roots;        // ambient coords
    std::vector<std::vector<long long>> positive_roots;      // ambient coords
    std::vector<std::vector<long long>> positive_in_simple;  // simple-root coords
    std::vector<std::vector<long long>> cartan_matrix;       // c[i][j] = <alpha_j, alpha_i^vee>
    std::vector<long long> kappa;                            // 2*rho = sum kappa_i * alpha_i
};

/// Builds the full root datum for a valid Cartan type.  Simple roots are
/// indexed in Bourbaki order; positive roots are generated by reflection
/// closure and expanded exactly over the simple-root basis.
RootDatum build_root_datum(const CartanType& type);

/// Exact pairing sum_i coeffs[i] * a[i]; throws on length mismatch.
Rat pairing(std::span<const Rat> coeffs, std::span<const Rat> a);

} // namespace wcint
