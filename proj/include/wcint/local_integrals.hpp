#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcint/geometry.hpp"

namespace wcint {

/// Number of right cosets in the double coset K t(a) K of PGL_n(Q_p),
/// with vol(K) = 1: equivalently the number of sublattices of Z_p^n in
/// relative position a.  Exact; throws std::overflow_error if the count
/// does not fit in 64 bits.
unsigned long long cell_volume(int n, long long p, std::span<const int> a);

/// Same count in extended precision (no overflow limit); used inside
/// series where the exact integer is unnecessary.
long double cell_volume_ld(int n, long long p, std::span<const int> a);

/// Rigorous upper bound on vol / p^<2rho,a>, uniform in a:
/// prod_{i=1}^{n-1} (1 - p^-i)^-1.
long double cell_ratio_bound(int n, long long p);

/// One local height-integral factor J_p(s) (delta-restricted at D) with
/// its regularization f_p(s) = J_p(s) * prod_{alpha not in D}(1 - p^-(s_a - kappa_a)).
struct LocalFactor {
    long long p = 2;
    int cutoff = 0;
    long double j_value = 1.0L;   // truncated series
    long double j_tail = 0.0L;    // rigorous bound on the dropped tail
    long double f_value = 1.0L;
    long double f_tail = 0.0L;
};

/// Truncated sum of J_p(s) = sum_a vol(K t(a) K) p^{-<s,a>} over the
/// coordinates left free by D, with a rigorous tail bound from the
/// volume bound.  Requires s_alpha > kappa_alpha off D.
LocalFactor local_series(int n, long long p, std::span<const double> s,
                         const DivisorChoice& D, int cutoff);

/// Closed form of the full local factor J_p(s) (no delta restriction);
/// available for n = 2, 3.
long double local_factor_closed(int n, long long p, std::span<const double> s);

/// Closed form of f_p(s); available for n = 2, 3.
long double regularized_factor_closed(int n, long long p, std::span<const double> s,
                                      const DivisorChoice& D);

/// Riemann zeta for real z > 1 (Euler-Maclaurin), and the S-restricted
/// variant with the Euler factors at S removed.
long double zeta_real(long double z);
long double zeta_S(long double z, const PlaceSet& S);

/// Regularized finite-part Euler product at a real evaluation point:
/// the zeta factors prod_{alpha not in D} zeta_S(s_alpha - kappa_alpha)
/// are kept symbolic (exponents reported; values only where finite) and
/// the remainder prod_{p not in S, p <= p_max} f_p(s) is accumulated
/// with a tail estimate.
struct EulerValue {
    std::vector<double> zeta_arguments;   // s_alpha - kappa_alpha, alpha off D
    long double zeta_finite_value = 1.0L; // product of the zeta_S factors that converge
    int pole_count = 0;                   // arguments at or below 1 (handled by caller)
    long double f_part = 1.0L;
    long double f_tail_rel = 0.0L;        // relative tail bound for p > p_max
    long long p_max = 0;
};

EulerValue euler_product(int n, std::span<const double> s, const DivisorChoice& D,
                         const PlaceSet& S, long long p_max);

/// Archimedean Cartan-coordinate integral
///   I(s) = int_{u in [0,inf)^{n-1}} exp(-<s,u>) prod_{i<j}(x_i/x_j - x_j/x_i) du,
/// x_i the ordered diagonal entries (x_i/x_{i+1} = e^{u_i}); defined up
/// to the global Haar normalization.  Requires s_i > kappa_i.
struct QuadratureSpec {
    int panels_per_unit = 2;  // panel width 1/panels_per_unit in u
    int gauss_order = 12;
    long double tail_cut = 60.0L; // integrate u_i <= tail_cut / min(s_i - kappa_i)
};

long double arch_integral(int n, std::span<const double> s, const QuadratureSpec& quad);

/// Same integral by exact expansion of the density into signed
/// exponentials (2^{#positive roots} terms).
long double arch_integral_closed(int n, std::span<const double> s);

/// Leading Laurent coefficient lim_{eps->0} eps^d * I((a+eps) lambda) of
/// the archimedean integral, evaluated exactly from the expansion.
long double arch_leading_closed(int n, std::span<const double> lambda, double a, int d);

/// Everything that enters the predicted leading constant.
struct ConstantReport {
    Rat a;
    long long b = 0;
    int char_group_order = 1;
    // finite part
    long double zeta_residue_prefactor = 1.0L; // prod over critical alpha off D of (1/lambda_a) * prod_{p in S}(1 - 1/p)
    long double zeta_regular_value = 1.0L;     // noncritical zeta_S values
    long double euler_f_part = 1.0L;
    long double euler_f_tail_rel = 0.0L;
    // S-place factors
    std::vector<std::pair<long long, long double>> s_place_leading; // (p, lim eps^d J_p)
    long double arch_leading = 0.0L;          // lim eps^d I((a+eps)lambda), unnormalized
    std::vector<long double> richardson_raw;  // raw eps-values for the arch factor (diagnostic)
    std::string arch_evaluator;               // "quadrature" or "closed-form"
    long double normalization_calibration = 1.0L;
    std::string calibration_note;
    long double c_predicted = 0.0L;
};

struct ConstantOptions {
    long long p_max = 200000;
    int series_cutoff = 400;
    bool arch_quadrature = true;   // n = 2 default; n >= 3 falls back to closed form
    QuadratureSpec quad;
};

/// Predicted constant c for PGL_n over Q:
///   c = 1/(a (b-1)!) * |X| * [zeta residues] * [zeta regular values]
///       * [prod f_p] * [prod_{p in S} lim eps^d J_p] * [arch leading] * calibration.
/// Finite S-place and (optionally) archimedean leading coefficients use
/// evaluation at eps in {0.04, 0.02, 0.01} with Richardson extrapolation.
ConstantReport predicted_constant(int n, const PicClass& lambda, const DivisorChoice& D,
                                  const PlaceSet& S, const ConstantOptions& opt = {});

/// The frozen archimedean Haar calibration (see ConstantReport notes).
long double arch_normalization_calibration();

} // namespace wcint
