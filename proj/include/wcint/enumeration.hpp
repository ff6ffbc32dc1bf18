#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcint/geometry.hpp"
#include "wcint/heights.hpp"

namespace wcint {

/// Smallest box radius that provably contains every point of height <= B:
/// H(lambda, .) >= maxentry^{m n/(n-1)} for primitive matrices, where
/// m = min lambda_alpha, so M_max = floor(B^{(n-1)/(m n)}).
///
/// The bound chains H >= H(min lambda * 1) = H(1)^m with
///   H(1) = (sigma_1/sigma_n) * |det|/d_{n-1},
///   d_{n-1} <= sigma_1...sigma_{n-1}   (gcd of minors vs compound norm),
///   |det|/d_{n-1} = prod_p p^{e_n}     >= |det|^{1/(n-1)}  (e_1 = 0),
///   sigma_n^{n-1} <= |det|/sigma_1,
/// giving H(1) >= sigma_1^{n/(n-1)} >= maxentry^{n/(n-1)}.
long long entry_bound(int n, const PicClass& lambda, double B);

/// Visits every primitive nonsingular sign-canonical n x n matrix with
/// entries in [-M_max, M_max], in lexicographic entry order.
void for_each_point(int n, long long M_max,
                    const std::function<void(std::span<const long long>)>& visit);

struct CountJob {
    int n = 2;
    PicClass lambda;
    DivisorChoice D;
    PlaceSet S;
    std::vector<double> B_grid;      // increasing, all >= 1
    long long entry_bound_override = 0; // 0 = computed completeness bound
};

struct CountRow {
    double B;
    long long N_integral;
    long long N_rational;
};

struct CountResult {
    std::vector<CountRow> rows;
    long long entry_bound_used = 0;
    long long candidates = 0;        // box cardinality actually swept
    int workers = 1;
    double wall_seconds = 0.0;       // informational; never serialized
};

struct CountOptions {
    int workers = 1;
    bool prune = true;
    bool force_generic = false;      // bypass the tuned kernels (cross-checks)
    long long budget_ops = 20'000'000'000; // refuse jobs sweeping more candidates
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(long long estimate, long long budget, std::string msg)
        : std::runtime_error(std::move(msg)), estimate_(estimate), budget_(budget) {}
    long long estimate() const { return estimate_; }
    long long budget() const { return budget_; }

private:
    long long estimate_, budget_;
};

/// Exhaustive count of N_integral(B) and N_rational(B) over the grid.
/// Counts are exact; pruning only ever discards candidates whose height
/// provably exceeds max(B_grid).
CountResult count_points(const CountJob& job, const CountOptions& opt = {});

/// Work estimate used for budget refusal: the box cardinality.
long long count_work_estimate(const CountJob& job);

struct FitResult {
    double a_hat = 0.0;
    double b_hat = 0.0;
    double c_hat = 0.0;
    int points_used = 0;
};

/// Exponent and log-power fits against the model N(B) = c B^a log(B)^{b-1}:
/// a_hat from the log-log slope on the top half of the grid, b_hat - 1
/// from regressing log(N B^-a_pred) on loglog B, c_hat from the last
/// grid point with the predicted exponents.
FitResult fit_exponents(std::span<const CountRow> rows, double predicted_a,
                        double predicted_b, bool use_integral_counts = true);

/// Least-squares slope helper over an explicit index window.
double regression_slope(std::span<const double> x, std::span<const double> y);

} // namespace wcint
