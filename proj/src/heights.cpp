#include "wcint/heights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wcint {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

long long content_gcd(const std::vector<long long>& m) {
    long long g = 0;
    for (long long v : m) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

int valuation(u128 v, long long p) {
    int e = 0;
    while (v % static_cast<u128>(p) == 0) { v /= static_cast<u128>(p); ++e; }
    return e;
}

// Modular inverse of a unit mod p^k (p prime, gcd(a,p)=1) by Newton lifting.
u128 inv_mod(u128 a, u128 mod, long long p) {
    // inverse mod p by Fermat
    u128 inv = 1, base = a % static_cast<u128>(p), e = static_cast<u128>(p) - 2;
    while (e) {
        if (e & 1) inv = inv * base % static_cast<u128>(p);
        base = base * base % static_cast<u128>(p);
        e >>= 1;
    }
    // lift: x <- x(2 - a x) doubles the number of correct p-adic digits
    u128 x = inv;
    u128 pk = static_cast<u128>(p);
    while (pk < mod) {
        pk = pk * pk;
        if (pk > mod) pk = mod;
        u128 t = (a % pk) * x % pk;
        t = (2 + pk - t) % pk;
        x = x * t % pk;
    }
    return x % mod;
}

} // namespace

GroupPoint GroupPoint::from_matrix(int n, std::vector<long long> entries) {
    if (n < 2) throw std::invalid_argument("GroupPoint: n must be >= 2");
    if (entries.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("GroupPoint: wrong number of entries");
    long long g = content_gcd(entries);
    if (g == 0) throw std::invalid_argument("GroupPoint: zero matrix");
    if (g > 1)
        for (long long& v : entries) v /= g;
    for (long long v : entries) {
        if (v != 0) {
            if (v < 0)
                for (long long& w : entries) w = -w;
            break;
        }
    }
    GroupPoint gp{n, std::move(entries)};
    if (det_exact(gp.m, n) == 0) throw std::invalid_argument("GroupPoint: singular matrix");
    return gp;
}

GroupPoint GroupPoint::parse(std::string_view text) {
    std::vector<std::vector<long long>> rows;
    std::string cur;
    std::vector<long long> row;
    auto flush_num = [&]() {
        if (cur.empty()) throw std::invalid_argument("matrix parse: empty entry");
        size_t pos = 0;
        row.push_back(std::stoll(cur, &pos));
        if (pos != cur.size()) throw std::invalid_argument("matrix parse: bad entry " + cur);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush_num();
        else if (c == ';') { flush_num(); rows.push_back(row); row.clear(); }
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    flush_num();
    rows.push_back(row);
    const size_t n = rows.size();
    std::vector<long long> flat;
    for (const auto& r : rows) {
        if (r.size() != n) throw std::invalid_argument("matrix parse: ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return from_matrix(static_cast<int>(n), std::move(flat));
}

long long det_exact(std::span<const long long> m, int n) {
    // Bareiss fraction-free elimination.
    std::vector<i128> a(m.begin(), m.end());
    auto at = [&](int i, int j) -> i128& { return a[static_cast<size_t>(i) * n + j]; };
    i128 prev = 1;
    int sign = 1;
    constexpr i128 kLimit = (i128(1) << 120);
    for (int k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = k; j < n; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                i128 v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                if (v > kLimit || v < -kLimit)
                    throw std::overflow_error("det_exact: intermediate overflow");
                at(i, j) = v / prev;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    i128 d = at(n - 1, n - 1) * sign;
    if (d > INT64_MAX || d < INT64_MIN)
        throw std::overflow_error("det_exact: determinant exceeds 64 bits");
    return static_cast<long long>(d);
}

std::vector<int> smith_exponents(std::span<const long long> m, int n, long long p) {
    if (p < 2) throw std::invalid_argument("smith_exponents: p must be prime");
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) throw std::invalid_argument("smith_exponents: p is not prime");
    long long det = det_exact(m, n);
    if (det == 0) throw std::invalid_argument("smith_exponents: singular matrix");

    // Residue arithmetic mod p^K with K = v_p(det)+1 preserves every
    // valuation that matters: each elementary-divisor exponent is at
    // most v_p(det) < K.
    u128 det_abs = det < 0 ? static_cast<u128>(-(i128)det) : static_cast<u128>(det);
    int vdet = valuation(det_abs, p);
    std::vector<int> e;
    if (vdet == 0) {
        e.assign(n, 0);
        return e;
    }
    u128 mod = 1;
    for (int i = 0; i <= vdet; ++i) {
        if (mod > (u128(1) << 62) / static_cast<u128>(p))
            throw std::overflow_error("smith_exponents: local modulus exceeds 63 bits");
        mod *= static_cast<u128>(p);
    }

    std::vector<u128> a(static_cast<size_t>(n) * n);
    for (size_t i = 0; i < a.size(); ++i) {
        i128 v = m[i] % static_cast<i128>(mod);
        if (v < 0) v += static_cast<i128>(mod);
        a[i] = static_cast<u128>(v);
    }
    auto at = [&](int i, int j) -> u128& { return a[static_cast<size_t>(i) * n + j]; };

    const int kInf = vdet + 1;
    auto val_of = [&](u128 v) { return v == 0 ? kInf : valuation(v, p); };

    for (int k = 0; k < n; ++k) {
        int best_i = -1, best_j = -1, best_v = kInf;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                int v = val_of(at(i, j));
                if (v < best_v) { best_v = v; best_i = i; best_j = j; }
            }
        // Nonsingularity guarantees a pivot with valuation <= v_p(det).
        if (best_v >= kInf) throw std::logic_error("smith_exponents: no pivot");
        if (best_i != k)
            for (int j = k; j < n; ++j) std::swap(at(best_i, j), at(k, j));
        if (best_j != k)
            for (int i = k; i < n; ++i) std::swap(at(i, best_j), at(i, k));

        u128 pe = 1;
        for (int i = 0; i < best_v; ++i) pe *= static_cast<u128>(p);
        u128 unit = at(k, k) / pe;
        u128 unit_inv = inv_mod(unit, mod, p);
        for (int i = k + 1; i < n; ++i) {
            if (at(i, k) == 0) continue;
            u128 f = (at(i, k) / pe) % mod * unit_inv % mod;
            for (int j = k; j < n; ++j)
                at(i, j) = (at(i, j) + (mod - f) * at(k, j)) % mod;
        }
        for (int j = k + 1; j < n; ++j) {
            if (at(k, j) == 0) continue;
            u128 f = (at(k, j) / pe) % mod * unit_inv % mod;
            for (int i = k; i < n; ++i)
                at(i, j) = (at(i, j) + (mod - f) * at(i, k)) % mod;
        }
        e.push_back(best_v);
    }
    // Minimal-valuation pivoting already emits them in nondecreasing order.
    return e;
}

std::vector<long double> arch_cartan(std::span<const long double> m, int n) {
    // Eigenvalues of M^T M by cyclic Jacobi in extended precision.
    std::vector<long double> g(static_cast<size_t>(n) * n, 0.0L);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long double s = 0.0L;
            for (int k = 0; k < n; ++k)
                s += m[static_cast<size_t>(k) * n + i] * m[static_cast<size_t>(k) * n + j];
            g[static_cast<size_t>(i) * n + j] = s;
        }
    auto at = [&](int i, int j) -> long double& { return g[static_cast<size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 64; ++sweep) {
        long double off = 0.0L, diag = 0.0L;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                (i == j ? diag : off) += at(i, j) * at(i, j);
        if (off <= diag * 1e-36L) break;
        for (int pi = 0; pi < n - 1; ++pi)
            for (int qi = pi + 1; qi < n; ++qi) {
                if (at(pi, qi) == 0.0L) continue;
                long double theta = (at(qi, qi) - at(pi, pi)) / (2.0L * at(pi, qi));
                long double t = (theta >= 0 ? 1.0L : -1.0L) /
                                (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
                long double c = 1.0L / std::sqrt(t * t + 1.0L);
                long double s = t * c;
                for (int k = 0; k < n; ++k) {
                    long double gpk = at(pi, k), gqk = at(qi, k);
                    at(pi, k) = c * gpk - s * gqk;
                    at(qi, k) = s * gpk + c * gqk;
                }
                for (int k = 0; k < n; ++k) {
                    long double gkp = at(k, pi), gkq = at(k, qi);
                    at(k, pi) = c * gkp - s * gkq;
                    at(k, qi) = s * gkp + c * gkq;
                }
            }
    }
    std::vector<long double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    if (eig[n - 1] <= 0.0L)
        throw std::runtime_error("arch_cartan: Gram matrix not positive definite "
                                 "(singular or ill-conditioned input)");
    std::vector<long double> a(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        a[i] = 0.5L * std::log(eig[i] / eig[i + 1]);
        if (a[i] < 0.0L) a[i] = 0.0L; // clamp eigenvalue-ordering jitter
    }
    return a;
}

LocalCartanData local_cartan(const GroupPoint& g, long long place) {
    LocalCartanData d;
    d.place = place;
    if (place == kArchPlace) {
        std::vector<long double> m(g.m.begin(), g.m.end());
        d.a_real = arch_cartan(m, g.n);
        return d;
    }
    std::vector<int> e = smith_exponents(g.m, g.n, place);
    d.a_int.resize(g.n - 1);
    for (int i = 0; i + 1 < g.n; ++i) d.a_int[i] = e[i + 1] - e[i];
    return d;
}

long double local_height(const LocalCartanData& d, const PicClass& lambda) {
    if (lambda.coeffs.size() != d.size())
        throw std::invalid_argument("local_height: lambda length mismatch");
    long double exponent = 0.0L;
    for (size_t i = 0; i < d.size(); ++i)
        exponent += lambda.coeffs[i].to_long_double() * d.coord(i);
    if (d.archimedean()) return std::exp(exponent);
    return std::pow(static_cast<long double>(d.place), exponent);
}

Rat HeightValue::finite_rational() const {
    Rat v(1);
    for (const FinFactor& f : finite_factors) {
        if (!f.exponent.is_integer())
            throw std::domain_error("finite height part is an irrational prime power");
        long long e = f.exponent.num();
        Rat pw(1);
        for (long long i = 0; i < std::abs(e); ++i) pw *= Rat(f.p);
        v = e >= 0 ? v * pw : v / pw;
    }
    return v;
}

HeightValue global_height(const GroupPoint& g, const PicClass& lambda) {
    if (static_cast<int>(lambda.coeffs.size()) != g.n - 1)
        throw std::invalid_argument("global_height: lambda must have length n-1");
    HeightValue h;
    long long det = det_exact(g.m, g.n);
    // Primitivity forces trivial Cartan data at primes away from det.
    for (long long p : prime_factors(det < 0 ? -det : det)) {
        LocalCartanData d = local_cartan(g, p);
        std::vector<Rat> a(d.a_int.size());
        for (size_t i = 0; i < a.size(); ++i) a[i] = Rat(d.a_int[i]);
        Rat expo = pairing(lambda.coeffs, a);
        if (!expo.is_zero()) h.finite_factors.push_back({p, expo});
    }
    long double log_fin = 0.0L;
    for (const auto& f : h.finite_factors)
        log_fin += f.exponent.to_long_double() * std::log(static_cast<long double>(f.p));
    LocalCartanData arch = local_cartan(g, kArchPlace);
    long double log_arch = 0.0L;
    for (size_t i = 0; i < arch.a_real.size(); ++i)
        log_arch += lambda.coeffs[i].to_long_double() * arch.a_real[i];
    h.finite_part = std::exp(log_fin);
    h.arch_part = std::exp(log_arch);
    h.log_total = log_fin + log_arch;
    h.total = std::exp(h.log_total);
    return h;
}

bool delta_indicator(const GroupPoint& g, const DivisorChoice& D, const PlaceSet& S) {
    if (D.in_D.empty()) return true;
    long long det = det_exact(g.m, g.n);
    for (long long p : prime_factors(det < 0 ? -det : det)) {
        if (S.contains(p)) continue;
        LocalCartanData d = local_cartan(g, p);
        for (int alpha : D.in_D)
            if (d.a_int[alpha - 1] != 0) return false;
    }
    return true;
}

std::vector<long long> prime_factors(long long v) {
    std::vector<long long> ps;
    if (v < 0) v = -v;
    for (long long p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
        if (v % p == 0) {
            ps.push_back(p);
            while (v % p == 0) v /= p;
        }
    }
    if (v > 1) ps.push_back(v);
    return ps;
}

} // namespace wcint
