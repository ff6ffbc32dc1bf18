#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wcint/root_data.hpp"

namespace wcint {

/// A divisor class sum_alpha coeffs[alpha] * D_alpha in the basis of
/// boundary components.  "Big" means every coefficient is positive
/// (interior of the simplicial cone on the D_alpha).
struct PicClass {
    std::vector<Rat> coeffs;

    bool is_big() const {
        if (coeffs.empty()) return false;
        for (const Rat& c : coeffs)
            if (!c.is_positive()) return false;
        return true;
    }

    /// Parses "2,3", "1/2,1", or the keywords "anticanonical" /
    /// "log-anticanonical" (resolved against rd and D).
    static PicClass parse(std::string_view s, const RootDatum& rd, const class DivisorChoice& D);

    std::string str() const;
};

/// The boundary divisor under consideration: a subset of simple-root
/// indices (1-based).  Empty = rational-point case, full = the whole
/// boundary.
struct DivisorChoice {
    std::set<int> in_D;

    bool contains(int alpha_index_1based) const { return in_D.count(alpha_index_1based) > 0; }

    /// "none", "all", or comma-separated 1-based indices like "1,3".
    static DivisorChoice parse(std::string_view s, int rank);

    std::string str(int rank) const;
};

/// Finite place set; the archimedean place is always a member.
struct PlaceSet {
    std::set<long long> finite_primes;

    size_t size() const { return 1 + finite_primes.size(); }
    bool contains(long long p) const { return finite_primes.count(p) > 0; }

    /// "inf", "inf,2,3" (the "inf" token may be omitted; it is implied).
    static PlaceSet parse(std::string_view s);

    std::string str() const;
};

/// The exponent data controlling N(B) ~ c * B^a * log(B)^(b-1).
struct AsymptoticInvariants {
    Rat a;                      // growth exponent
    std::vector<int> a_set;     // argmax set A(lambda), 1-based indices
    int r_lambda = 0;           // #A(lambda)
    int d_lambda = 0;           // #(A(lambda) intersect D)
    long long b = 0;            // r - d + |S| * d
};

/// -K_X in the D_alpha basis: coefficients kappa_alpha + 1.
PicClass anticanonical(const RootDatum& rd);

/// -(K_X + D): kappa_alpha on D, kappa_alpha + 1 off D.
PicClass log_anticanonical(const RootDatum& rd, const DivisorChoice& D);

/// Exact computation of a(lambda), the argmax set, r, d and b.
/// Throws std::invalid_argument if lambda is not big.
AsymptoticInvariants growth_invariants(const RootDatum& rd, const PicClass& lambda,
                                       const DivisorChoice& D, const PlaceSet& S);

/// Order of the character group entering the leading constant.  Only the
/// rationals are supported, where the group is trivial; any other base
/// field is rejected.
int character_group_order(std::string_view base_field, const DivisorChoice& D,
                          const PicClass& lambda, const PlaceSet& S);

} // namespace wcint
