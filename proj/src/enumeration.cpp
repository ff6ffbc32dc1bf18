#include "wcint/enumeration.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace wcint {

namespace {

constexpr long double kPruneMargin = 1.0L + 1e-9L; // prune strictly above the threshold

struct Thresholds {
    std::vector<long double> log_B; // increasing
    long double log_Bmax;

    // index of the first grid value with log H <= log B_j, or -1
    int bucket(long double log_h) const {
        for (size_t j = 0; j < log_B.size(); ++j)
            if (log_h <= log_B[j]) return static_cast<int>(j);
        return -1;
    }
};

// Sieve marking values with a prime factor outside S (det-support test).
std::vector<unsigned char> bad_support_table(long long limit, const PlaceSet& S) {
    std::vector<unsigned char> bad(static_cast<size_t>(limit) + 1, 0);
    std::vector<unsigned char> composite(static_cast<size_t>(limit) + 1, 0);
    for (long long p = 2; p <= limit; ++p) {
        if (composite[static_cast<size_t>(p)]) continue;
        for (long long v = 2 * p; v <= limit; v += p) composite[static_cast<size_t>(v)] = 1;
        if (S.contains(p)) continue;
        for (long long v = p; v <= limit; v += p) bad[static_cast<size_t>(v)] = 1;
    }
    return bad;
}

std::vector<int> spf_table(long long limit) {
    std::vector<int> spf(static_cast<size_t>(limit) + 1, 0);
    for (long long p = 2; p <= limit; ++p) {
        if (spf[static_cast<size_t>(p)] != 0) continue;
        for (long long v = p; v <= limit; v += p)
            if (spf[static_cast<size_t>(v)] == 0) spf[static_cast<size_t>(v)] = static_cast<int>(p);
    }
    return spf;
}

// Eigenvalues of a symmetric positive 3x3 matrix, descending (cyclic Jacobi).
inline void jacobi3(long double a00, long double a01, long double a02, long double a11,
                    long double a12, long double a22, long double out[3]) {
    long double a[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        long double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        long double dia = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if (off <= dia * 1e-36L) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0L) continue;
                long double theta = (a[q][q] - a[p][p]) / (2.0L * a[p][q]);
                long double t = (theta >= 0 ? 1.0L : -1.0L) /
                                (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
                long double c = 1.0L / std::sqrt(t * t + 1.0L);
                long double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    long double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    long double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
            }
    }
    out[0] = a[0][0];
    out[1] = a[1][1];
    out[2] = a[2][2];
    if (out[0] < out[1]) std::swap(out[0], out[1]);
    if (out[1] < out[2]) std::swap(out[1], out[2]);
    if (out[0] < out[1]) std::swap(out[0], out[1]);
}

struct WorkerHist {
    std::vector<long long> integral;
    std::vector<long long> rational;
    explicit WorkerHist(size_t g) : integral(g, 0), rational(g, 0) {}
};

// ------------------------------------------------------------------
// n = 2 kernel.  H(lambda, M) = sigma_1^{2 lambda_1} for primitive M,
// so the height test reduces to sigma_1^2 <= B^{1/lambda_1}.
// ------------------------------------------------------------------
void kernel_n2(const CountJob& job, const CountOptions& opt, long long M,
               const std::vector<std::array<long long, 2>>& rows, int worker, int nworkers,
               const Thresholds& th, const std::vector<unsigned char>& bad_det,
               WorkerHist& hist) {
    const long double lam = job.lambda.coeffs[0].to_long_double();
    std::vector<long double> tau(th.log_B.size());
    for (size_t j = 0; j < tau.size(); ++j) tau[j] = std::exp(th.log_B[j] / lam);
    const long double tau_max = tau.back();
    const long double prune_T = 2.0L * tau_max * kPruneMargin;
    const bool d_full = !job.D.in_D.empty();

    for (size_t ri = worker; ri < rows.size(); ri += nworkers) {
        const long long a = rows[ri][0], b = rows[ri][1];
        const long long t_ab = a * a + b * b;
        if (opt.prune && static_cast<long double>(t_ab) > prune_T) continue;
        for (long long c = -M; c <= M; ++c) {
            const long long bc = b * c;
            const long long t_abc = t_ab + c * c;
            for (long long d = -M; d <= M; ++d) {
                const long long det = a * d - bc;
                if (det == 0) continue;
                const long long T = t_abc + d * d;
                if (opt.prune && static_cast<long double>(T) > prune_T) continue;
                const long double Tf = static_cast<long double>(T);
                const long double df = static_cast<long double>(det);
                const long double disc = Tf * Tf - 4.0L * df * df;
                const long double s1sq = 0.5L * (Tf + std::sqrt(disc > 0.0L ? disc : 0.0L));
                if (s1sq > tau_max) continue;
                long long g = std::gcd(std::gcd(std::abs(a), std::abs(b)),
                                       std::gcd(std::abs(c), std::abs(d)));
                if (g != 1) continue;
                int bucket = 0;
                while (s1sq > tau[bucket]) ++bucket;
                ++hist.rational[bucket];
                if (!d_full || !bad_det[static_cast<size_t>(std::abs(det))])
                    ++hist.integral[bucket];
            }
        }
    }
}

// ------------------------------------------------------------------
// n = 3 kernel.  Uses H(1) = (sigma_1/sigma_3) |det| / d_2 with
// d_2 = gcd of the 2x2 minors; symmetric lambda = (t, t) avoids any
// per-prime work except for the delta indicator.
// ------------------------------------------------------------------
void kernel_n3(const CountJob& job, const CountOptions& opt, long long M,
               const std::vector<std::array<long long, 3>>& rows, int worker, int nworkers,
               const Thresholds& th, const std::vector<unsigned char>& bad_support,
               const std::vector<int>& spf, WorkerHist& hist) {
    const long double l1 = job.lambda.coeffs[0].to_long_double();
    const long double l2 = job.lambda.coeffs[1].to_long_double();
    const long double m_min = std::min(l1, l2);
    const bool symmetric = job.lambda.coeffs[0] == job.lambda.coeffs[1];
    const bool d_none = job.D.in_D.empty();
    const bool d_full = job.D.in_D.size() == 2;
    const bool d_first = job.D.in_D.size() == 1 && job.D.contains(1);
    // fast path: no per-prime split of the finite height needed
    const bool fast = symmetric && (d_none || d_full || d_first);

    // sigma_1 cap from H >= sigma_1^{m n/(n-1)} and H(1) cap from H >= H(1)^m
    const long double sigma_cap = std::exp(th.log_Bmax / (m_min * 1.5L)) * kPruneMargin;
    const long double sigma_cap2 = sigma_cap * sigma_cap;
    const long double h1_cap = std::exp(th.log_Bmax / m_min) * kPruneMargin;

    for (size_t ri = worker; ri < rows.size(); ri += nworkers) {
        const long long r10 = rows[ri][0], r11 = rows[ri][1], r12 = rows[ri][2];
        const long long n1 = r10 * r10 + r11 * r11 + r12 * r12;
        if (opt.prune && static_cast<long double>(n1) > sigma_cap2) continue;
        for (long long r20 = -M; r20 <= M; ++r20)
            for (long long r21 = -M; r21 <= M; ++r21)
                for (long long r22 = -M; r22 <= M; ++r22) {
                    const long long n2 = r20 * r20 + r21 * r21 + r22 * r22;
                    if (opt.prune) {
                        if (static_cast<long double>(n2) > sigma_cap2) continue;
                        // largest eigenvalue of the 2x2 Gram of (r1, r2)
                        const long long dotrr = r10 * r20 + r11 * r21 + r12 * r22;
                        const long double tr = static_cast<long double>(n1 + n2);
                        const long double dif = static_cast<long double>(n1 - n2);
                        const long double lam_max =
                            0.5L * (tr + std::sqrt(dif * dif +
                                                   4.0L * static_cast<long double>(dotrr) *
                                                       static_cast<long double>(dotrr)));
                        if (lam_max > sigma_cap2) continue;
                    }
                    // cofactors against the third row
                    const long long X0 = r11 * r22 - r12 * r21;
                    const long long X1 = r12 * r20 - r10 * r22;
                    const long long X2 = r10 * r21 - r11 * r20;
                    const long long Xsq = X0 * X0 + X1 * X1 + X2 * X2;
                    const long long F12 = n1 + n2;
                    const long long pc0 = r10 * r10 + r20 * r20;
                    const long long pc1 = r11 * r11 + r21 * r21;
                    const long long pc2 = r12 * r12 + r22 * r22;

                    for (long long x = -M; x <= M; ++x) {
                        const long long dx = x * X0;
                        const long long fx = F12 + x * x;
                        const long long c0 = pc0 + x * x;
                        if (opt.prune && static_cast<long double>(c0) > sigma_cap2) continue;
                        for (long long y = -M; y <= M; ++y) {
                            const long long dxy = dx + y * X1;
                            const long long fxy = fx + y * y;
                            const long long c1 = pc1 + y * y;
                            if (opt.prune && static_cast<long double>(c1) > sigma_cap2) continue;
                            for (long long z = -M; z <= M; ++z) {
                                const long long det = dxy + z * X2;
                                if (det == 0) continue;
                                const long long F = fxy + z * z;
                                const long double Ff = static_cast<long double>(F);
                                if (opt.prune) {
                                    if (Ff > 3.0L * sigma_cap2) continue;
                                    if (static_cast<long double>(pc2 + z * z) > sigma_cap2)
                                        continue;
                                    if (static_cast<long double>(F - F12) > sigma_cap2) continue;
                                }
                                // remaining 2x2 minors: r2 x r3 and r3 x r1
                                const long long Y0 = r21 * z - r22 * y;
                                const long long Y1 = r22 * x - r20 * z;
                                const long long Y2 = r20 * y - r21 * x;
                                const long long Z0 = y * r12 - z * r11;
                                const long long Z1 = z * r10 - x * r12;
                                const long long Z2 = x * r11 - y * r10;
                                const long long G = Xsq + Y0 * Y0 + Y1 * Y1 + Y2 * Y2 +
                                                    Z0 * Z0 + Z1 * Z1 + Z2 * Z2;
                                long long d2 = std::abs(X0);
                                for (long long v : {X1, X2, Y0, Y1, Y2, Z0, Z1, Z2}) {
                                    d2 = std::gcd(d2, std::abs(v));
                                    if (d2 == 1) break;
                                }
                                const long long adet = std::abs(det);
                                const long long fin = adet / d2;
                                if (opt.prune) {
                                    // H(1)^2 >= F G fin^2 / (9 det^2)
                                    const long double hlb =
                                        std::sqrt(Ff * static_cast<long double>(G)) /
                                        (3.0L * static_cast<long double>(adet)) *
                                        static_cast<long double>(fin);
                                    if (hlb > h1_cap) continue;
                                }
                                long long g = std::abs(r10);
                                for (long long v : {r11, r12, r20, r21, r22, x, y, z}) {
                                    g = std::gcd(g, std::abs(v));
                                    if (g == 1) break;
                                }
                                if (g != 1) continue;

                                // exact archimedean part from the column Gram matrix
                                const long long g01 = r10 * r11 + r20 * r21 + x * y;
                                const long long g02 = r10 * r12 + r20 * r22 + x * z;
                                const long long g12 = r11 * r12 + r21 * r22 + y * z;
                                long double eig[3];
                                jacobi3(static_cast<long double>(c0),
                                        static_cast<long double>(g01),
                                        static_cast<long double>(g02),
                                        static_cast<long double>(c1),
                                        static_cast<long double>(g12),
                                        static_cast<long double>(pc2 + z * z), eig);
                                const long double a1 = 0.5L * std::log(eig[0] / eig[1]);
                                const long double a2 = 0.5L * std::log(eig[1] / eig[2]);

                                long double log_h;
                                bool integral = true;
                                if (fast) {
                                    log_h = l1 * (a1 + a2) +
                                            l1 * std::log(static_cast<long double>(fin));
                                    if (d_full)
                                        integral = !bad_support[static_cast<size_t>(adet)];
                                    else if (d_first)
                                        integral = !bad_support[static_cast<size_t>(d2)];
                                } else {
                                    // per-prime Smith data from det and d_2
                                    long double log_fin = 0.0L;
                                    integral = true;
                                    long long rem = adet;
                                    while (rem > 1) {
                                        const long long p = spf[static_cast<size_t>(rem)];
                                        int vdet = 0;
                                        while (rem % p == 0) { rem /= p; ++vdet; }
                                        int v2 = 0;
                                        long long t = d2;
                                        while (t % p == 0) { t /= p; ++v2; }
                                        const int e2 = v2, e3 = vdet - v2;
                                        const int av1 = e2, av2 = e3 - e2;
                                        log_fin += (l1 * av1 + l2 * av2) *
                                                   std::log(static_cast<long double>(p));
                                        if (!job.S.contains(p)) {
                                            if (job.D.contains(1) && av1 != 0) integral = false;
                                            if (job.D.contains(2) && av2 != 0) integral = false;
                                        }
                                    }
                                    log_h = log_fin + l1 * a1 + l2 * a2;
                                }
                                const int bucket = th.bucket(log_h);
                                if (bucket < 0) continue;
                                ++hist.rational[bucket];
                                if (integral) ++hist.integral[bucket];
                            }
                        }
                    }
                }
    }
}

// ------------------------------------------------------------------
// Generic kernel: any n.  Unoptimized; used for n >= 4 and as the
// cross-check path for the tuned kernels.
// ------------------------------------------------------------------
void kernel_generic(const CountJob& job, const CountOptions& opt, long long M,
                    const std::vector<std::vector<long long>>& rows, int worker, int nworkers,
                    const Thresholds& th, WorkerHist& hist) {
    const int n = job.n;
    const int rest = n * n - n;
    const long double m_min = [&] {
        Rat m = job.lambda.coeffs[0];
        for (const Rat& c : job.lambda.coeffs)
            if (c < m) m = c;
        return m.to_long_double();
    }();
    const long double h_cap = th.log_Bmax + std::log(kPruneMargin);
    const long double sigma_cap2 =
        std::exp(2.0L * th.log_Bmax * (n - 1) / (m_min * n)) * kPruneMargin;

    std::vector<long long> mat(static_cast<size_t>(n) * n, 0);
    for (size_t ri = worker; ri < rows.size(); ri += nworkers) {
        std::copy(rows[ri].begin(), rows[ri].end(), mat.begin());
        std::vector<long long> odo(rest, -M);
        bool done = false;
        while (!done) {
            for (int k = 0; k < rest; ++k) mat[static_cast<size_t>(n) + k] = odo[k];
            bool consider = true;
            if (opt.prune) {
                long long frob = 0;
                for (long long v : mat) frob += v * v;
                if (static_cast<long double>(frob) > sigma_cap2 * n) consider = false;
            }
            if (consider) {
                long long g = 0;
                for (long long v : mat) g = std::gcd(g, std::abs(v));
                if (g == 1 && det_exact(mat, n) != 0) {
                    GroupPoint gp{n, mat};
                    HeightValue h = global_height(gp, job.lambda);
                    if (h.log_total <= h_cap) {
                        int bucket = th.bucket(h.log_total);
                        if (bucket >= 0) {
                            ++hist.rational[bucket];
                            if (delta_indicator(gp, job.D, job.S)) ++hist.integral[bucket];
                        }
                    }
                }
            }
            int k = rest - 1;
            while (k >= 0 && odo[k] == M) { odo[k] = -M; --k; }
            if (k < 0) done = true;
            else ++odo[k];
        }
    }
}

} // namespace

long long entry_bound(int n, const PicClass& lambda, double B) {
    if (n < 2) throw std::invalid_argument("entry_bound: n must be >= 2");
    if (static_cast<int>(lambda.coeffs.size()) != n - 1)
        throw std::invalid_argument("entry_bound: lambda must have length n-1");
    if (!lambda.is_big()) throw std::invalid_argument("entry_bound: lambda must be big");
    if (!(B >= 1.0)) throw std::invalid_argument("entry_bound: B must be >= 1");
    Rat m = lambda.coeffs[0];
    for (const Rat& c : lambda.coeffs)
        if (c < m) m = c;
    long double expo = static_cast<long double>(n - 1) / (m.to_long_double() * n);
    long double v = std::pow(static_cast<long double>(B), expo);
    long long M = static_cast<long long>(std::floor(v * (1.0L + 1e-12L) + 1e-9L));
    return std::max<long long>(M, 1);
}

void for_each_point(int n, long long M_max,
                    const std::function<void(std::span<const long long>)>& visit) {
    if (n < 2) throw std::invalid_argument("for_each_point: n must be >= 2");
    if (M_max < 0) throw std::invalid_argument("for_each_point: negative bound");
    if (M_max == 0) return;
    const int total = n * n;
    std::vector<long long> mat(total, -M_max);
    bool done = false;
    while (!done) {
        // canonical sign: first nonzero entry positive
        bool canonical = false;
        for (int i = 0; i < total; ++i) {
            if (mat[i] != 0) { canonical = mat[i] > 0; break; }
        }
        if (canonical) {
            long long g = 0;
            for (long long v : mat) g = std::gcd(g, std::abs(v));
            if (g == 1 && det_exact(mat, n) != 0) visit(mat);
        }
        int k = total - 1;
        while (k >= 0 && mat[k] == M_max) { mat[k] = -M_max; --k; }
        if (k < 0) done = true;
        else ++mat[k];
    }
}

long long count_work_estimate(const CountJob& job) {
    long long M = job.entry_bound_override > 0
                      ? job.entry_bound_override
                      : entry_bound(job.n, job.lambda, job.B_grid.back());
    long double est = 1.0L;
    for (int i = 0; i < job.n * job.n; ++i) est *= static_cast<long double>(2 * M + 1);
    if (est > 4e18L) return INT64_MAX;
    return static_cast<long long>(est);
}

CountResult count_points(const CountJob& job, const CountOptions& opt) {
    if (job.n < 2) throw std::invalid_argument("count: n must be >= 2");
    if (static_cast<int>(job.lambda.coeffs.size()) != job.n - 1)
        throw std::invalid_argument("count: lambda must have length n-1");
    if (!job.lambda.is_big()) throw std::invalid_argument("count: lambda must be big");
    if (job.B_grid.empty()) throw std::invalid_argument("count: empty B grid");
    for (size_t i = 0; i < job.B_grid.size(); ++i) {
        if (!(job.B_grid[i] >= 1.0)) throw std::invalid_argument("count: B values must be >= 1");
        if (i && !(job.B_grid[i] > job.B_grid[i - 1]))
            throw std::invalid_argument("count: B grid must be increasing");
    }
    for (int idx : job.D.in_D)
        if (idx < 1 || idx > job.n - 1)
            throw std::invalid_argument("count: divisor index outside 1..n-1");

    const long long M_required = entry_bound(job.n, job.lambda, job.B_grid.back());
    long long M = M_required;
    if (job.entry_bound_override > 0) {
        if (job.entry_bound_override < M_required)
            throw std::invalid_argument(
                "count: entry bound " + std::to_string(job.entry_bound_override) +
                " is below the completeness bound " + std::to_string(M_required));
        M = job.entry_bound_override;
    }

    long long estimate = count_work_estimate(job);
    if (estimate > opt.budget_ops)
        throw BudgetExceeded(estimate, opt.budget_ops,
                             "count: estimated " + std::to_string(estimate) +
                                 " candidates exceeds budget " + std::to_string(opt.budget_ops));

    Thresholds th;
    for (double b : job.B_grid) th.log_B.push_back(std::log(static_cast<long double>(b)));
    th.log_Bmax = th.log_B.back();

    const int nworkers = std::max(1, opt.workers);
    const size_t G = job.B_grid.size();
    std::vector<WorkerHist> hists(nworkers, WorkerHist(G));

    auto t0 = std::chrono::steady_clock::now();

    const bool tuned2 = job.n == 2 && !opt.force_generic;
    const bool tuned3 = job.n == 3 && !opt.force_generic;

    if (tuned2) {
        std::vector<std::array<long long, 2>> rows;
        for (long long a = 0; a <= M; ++a)
            for (long long b = -M; b <= M; ++b) {
                if (a == 0 && b <= 0) continue;
                rows.push_back({a, b});
            }
        std::vector<unsigned char> bad;
        if (!job.D.in_D.empty()) bad = bad_support_table(2 * M * M + 1, job.S);
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&, w] {
                kernel_n2(job, opt, M, rows, w, nworkers, th, bad, hists[w]);
            });
        for (auto& t : pool) t.join();
    } else if (tuned3) {
        std::vector<std::array<long long, 3>> rows;
        for (long long a = 0; a <= M; ++a)
            for (long long b = -M; b <= M; ++b)
                for (long long c = -M; c <= M; ++c) {
                    if (a == 0 && (b < 0 || (b == 0 && c <= 0))) continue;
                    if (a == 0 && b == 0 && c == 0) continue;
                    rows.push_back({a, b, c});
                }
        // d_2 <= sqrt(G) <= 3 M^2 and |det| <= 6 M^3; one table covers both
        long long table_limit = std::max(6 * M * M * M, 3 * M * M) + 1;
        std::vector<unsigned char> bad;
        if (!job.D.in_D.empty()) bad = bad_support_table(table_limit, job.S);
        std::vector<int> spf;
        const bool symmetric = job.lambda.coeffs[0] == job.lambda.coeffs[1];
        const bool fast = symmetric && (job.D.in_D.empty() || job.D.in_D.size() == 2 ||
                                        job.D.contains(1));
        if (!fast) spf = spf_table(table_limit);
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&, w] {
                kernel_n3(job, opt, M, rows, w, nworkers, th, bad, spf, hists[w]);
            });
        for (auto& t : pool) t.join();
    } else {
        std::vector<std::vector<long long>> rows;
        {
            std::vector<long long> row(job.n, -M);
            bool done = false;
            while (!done) {
                bool canonical = false;
                for (int i = 0; i < job.n; ++i)
                    if (row[i] != 0) { canonical = row[i] > 0; break; }
                if (canonical) rows.push_back(row);
                int k = job.n - 1;
                while (k >= 0 && row[k] == M) { row[k] = -M; --k; }
                if (k < 0) done = true;
                else ++row[k];
            }
        }
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&, w] {
                kernel_generic(job, opt, M, rows, w, nworkers, th, hists[w]);
            });
        for (auto& t : pool) t.join();
    }

    auto t1 = std::chrono::steady_clock::now();

    // bucket histograms -> cumulative counts, merged in worker order
    std::vector<long long> cum_int(G, 0), cum_rat(G, 0);
    for (const WorkerHist& h : hists)
        for (size_t g = 0; g < G; ++g) {
            cum_int[g] += h.integral[g];
            cum_rat[g] += h.rational[g];
        }
    for (size_t g = 1; g < G; ++g) {
        cum_int[g] += cum_int[g - 1];
        cum_rat[g] += cum_rat[g - 1];
    }

    CountResult res;
    res.entry_bound_used = M;
    res.candidates = estimate;
    res.workers = nworkers;
    res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    for (size_t g = 0; g < G; ++g)
        res.rows.push_back({job.B_grid[g], cum_int[g], cum_rat[g]});
    return res;
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: need >= 2 points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("regression_slope: degenerate abscissa");
    return sxy / sxx;
}

FitResult fit_exponents(std::span<const CountRow> rows, double predicted_a,
                        double predicted_b, bool use_integral_counts) {
    if (rows.size() < 8)
        throw std::invalid_argument("fit_exponents: need at least 8 grid points");
    double decades = std::log10(rows.back().B / rows.front().B);
    if (decades < 3.0)
        throw std::invalid_argument("fit_exponents: grid must span >= 3 decades");

    auto val = [&](const CountRow& r) {
        return use_integral_counts ? r.N_integral : r.N_rational;
    };

    std::vector<double> lx, ly, llx, lry;
    const size_t half = rows.size() / 2;
    for (size_t i = half; i < rows.size(); ++i) {
        long long nv = val(rows[i]);
        if (nv <= 0) continue;
        lx.push_back(std::log(rows[i].B));
        ly.push_back(std::log(static_cast<double>(nv)));
        if (rows[i].B > 3.0) {
            llx.push_back(std::log(std::log(rows[i].B)));
            lry.push_back(std::log(static_cast<double>(nv)) - predicted_a * std::log(rows[i].B));
        }
    }
    if (lx.size() < 2)
        throw std::invalid_argument("fit_exponents: degenerate grid (too few nonzero counts)");

    FitResult fr;
    fr.points_used = static_cast<int>(lx.size());
    fr.a_hat = regression_slope(lx, ly);
    fr.b_hat = 1.0 + (llx.size() >= 2 ? regression_slope(llx, lry) : 0.0);
    const CountRow& last = rows.back();
    double lb = std::log(last.B);
    fr.c_hat = static_cast<double>(val(last)) /
               (std::pow(last.B, predicted_a) * std::pow(lb, predicted_b - 1.0));
    return fr;
}

} // namespace wcint
