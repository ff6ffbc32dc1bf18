#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wcint/geometry.hpp"
#include "wcint/root_data.hpp"

namespace wcint {

/// A point of PGL_n(Q): a primitive nonsingular integer matrix, stored
/// row-major, with sign fixed so the first nonzero entry is positive.
/// Construction canonicalizes (divides out the content, flips the sign);
/// two integer matrices represent the same point iff they canonicalize
/// to the same GroupPoint.
struct GroupPoint {
    int n = 0;
    std::vector<long long> m; // row-major, n*n entries

    long long at(int i, int j) const { return m[static_cast<size_t>(i) * n + j]; }

    static GroupPoint from_matrix(int n, std::vector<long long> entries);

    /// Row-major text form "2,1;0,2".
    static GroupPoint parse(std::string_view text);

    bool operator==(const GroupPoint&) const = default;
};

/// Determinant of an integer matrix (fraction-free elimination, 128-bit
/// intermediates; throws std::overflow_error if they do not fit).
long long det_exact(std::span<const long long> m, int n);

/// p-adic valuations e_1 <= ... <= e_n of the elementary divisors of M,
/// computed locally at p with residue arithmetic mod p^(v_p(det)+1).
/// Requires det != 0 and p prime.
std::vector<int> smith_exponents(std::span<const long long> m, int n, long long p);

constexpr long long kArchPlace = 0; // place marker for the archimedean place

/// Cartan coordinates of one matrix at one place: nonnegative integers
/// (finite place, successive differences of Smith exponents) or
/// nonnegative reals (archimedean, log sigma_i/sigma_{i+1}).
struct LocalCartanData {
    long long place = kArchPlace; // prime, or kArchPlace
    std::vector<long long> a_int;      // finite places
    std::vector<long double> a_real;   // archimedean place

    bool archimedean() const { return place == kArchPlace; }
    size_t size() const { return archimedean() ? a_real.size() : a_int.size(); }
    long double coord(size_t i) const {
        return archimedean() ? a_real[i] : static_cast<long double>(a_int[i]);
    }
};

LocalCartanData local_cartan(const GroupPoint& g, long long place);

/// Archimedean Cartan coordinates of an arbitrary real matrix (used by
/// invariance checks on rotated matrices).
std::vector<long double> arch_cartan(std::span<const long double> m, int n);

/// H_v(lambda, .) = p^<lambda,a> at a finite place, exp(<lambda,a>) at
/// the archimedean place.
long double local_height(const LocalCartanData& d, const PicClass& lambda);

/// Global height split into an exactly-factored finite part and the
/// archimedean part.
struct HeightValue {
    struct FinFactor {
        long long p;
        Rat exponent; // <lambda, a_p>
    };
    std::vector<FinFactor> finite_factors;
    long double finite_part = 1.0L;
    long double arch_part = 1.0L;
    long double total = 1.0L;
    long double log_total = 0.0L;

    /// Exact rational value of the finite part; throws if some exponent
    /// is not an integer.
    Rat finite_rational() const;
};

HeightValue global_height(const GroupPoint& g, const PicClass& lambda);

/// 1 iff the point is (D,S)-integral: at every prime outside S the
/// Cartan coordinates along D vanish.  Only primes dividing det matter.
bool delta_indicator(const GroupPoint& g, const DivisorChoice& D, const PlaceSet& S);

/// Distinct prime factors (trial division; intended for |v| up to ~1e12).
std::vector<long long> prime_factors(long long v);

} // namespace wcint
