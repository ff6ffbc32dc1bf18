#include "wcint/root_data.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace wcint {

namespace {

using Vec = std::vector<long long>;

long long dot(const Vec& a, const Vec& b) {
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Bourbaki simple roots in ambient coordinates.  Families whose standard
// coordinates are half-integral (F4, E6-E8) are uniformly scaled by 2.
std::vector<Vec> simple_roots_ambient(const CartanType& t, int& ambient_dim) {
    const int r = t.rank;
    std::vector<Vec> roots;
    auto e = [&](int i) { Vec v(ambient_dim, 0); v[i] = 1; return v; };
    switch (t.family) {
    case Family::A: {
        ambient_dim = r + 1;
        for (int i = 0; i < r; ++i) {
            Vec v(ambient_dim, 0);
            v[i] = 1; v[i + 1] = -1;
            roots.push_back(v);
        }
        break;
    }
    case Family::B: {
        ambient_dim = r;
        for (int i = 0; i + 1 < r; ++i) {
            Vec v(ambient_dim, 0);
            v[i] = 1; v[i + 1] = -1;
            roots.push_back(v);
        }
        roots.push_back(e(r - 1));
        break;
    }
    case Family::C: {
        ambient_dim = r;
        for (int i = 0; i + 1 < r; ++i) {
            Vec v(ambient_dim, 0);
            v[i] = 1; v[i + 1] = -1;
            roots.push_back(v);
        }
        Vec v(ambient_dim, 0);
        v[r - 1] = 2;
        roots.push_back(v);
        break;
    }
    case Family::D: {
        ambient_dim = r;
        for (int i = 0; i + 1 < r; ++i) {
            Vec v(ambient_dim, 0);
            v[i] = 1; v[i + 1] = -1;
            roots.push_back(v);
        }
        Vec v(ambient_dim, 0);
        v[r - 2] = 1; v[r - 1] = 1;
        roots.push_back(v);
        break;
    }
    case Family::G: {
        ambient_dim = 3;
        roots.push_back({1, -1, 0});
        roots.push_back({-2, 1, 1});
        break;
    }
    case Family::F: {
        // doubled coordinates
        ambient_dim = 4;
        roots.push_back({0, 2, -2, 0});
        roots.push_back({0, 0, 2, -2});
        roots.push_back({0, 0, 0, 2});
        roots.push_back({1, -1, -1, -1});
        break;
    }
    case Family::E: {
        // doubled E8 coordinates; E6/E7 take the leading simple roots.
        ambient_dim = 8;
        std::vector<Vec> e8;
        e8.push_back({1, -1, -1, -1, -1, -1, -1, 1});
        e8.push_back({2, 2, 0, 0, 0, 0, 0, 0});
        e8.push_back({-2, 2, 0, 0, 0, 0, 0, 0});
        e8.push_back({0, -2, 2, 0, 0, 0, 0, 0});
        e8.push_back({0, 0, -2, 2, 0, 0, 0, 0});
        e8.push_back({0, 0, 0, -2, 2, 0, 0, 0});
        e8.push_back({0, 0, 0, 0, -2, 2, 0, 0});
        e8.push_back({0, 0, 0, 0, 0, -2, 2, 0});
        roots.assign(e8.begin(), e8.begin() + r);
        break;
    }
    }
    return roots;
}

// Solves C x = rhs exactly over the rationals (square, invertible).
std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs) {
    const size_t n = m.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::logic_error("solve_exact: singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            Rat f = m[row][col] / m[col][col];
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
    return x;
}

} // namespace

CartanType CartanType::parse(std::string_view s) {
    if (s.size() < 2) throw std::invalid_argument("Cartan type: expect letter+rank, e.g. \"A2\"");
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    int rank = 0;
    for (size_t i = 1; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("Cartan type: bad rank in \"" + std::string(s) + "\"");
        rank = rank * 10 + (s[i] - '0');
        if (rank > 64) throw std::invalid_argument("Cartan type: rank out of range");
    }
    Family fam;
    switch (c) {
    case 'A': fam = Family::A; break;
    case 'B': fam = Family::B; break;
    case 'C': fam = Family::C; break;
    case 'D': fam = Family::D; break;
    case 'E': fam = Family::E; break;
    case 'F': fam = Family::F; break;
    case 'G': fam = Family::G; break;
    default: throw std::invalid_argument("Cartan type: unknown family in \"" + std::string(s) + "\"");
    }
    CartanType t{fam, rank};
    // family/rank consistency
    auto reject = [&](const std::string& why) {
        throw std::invalid_argument("Cartan type " + std::string(s) + ": " + why);
    };
    if (rank < 1) reject("rank must be >= 1");
    switch (fam) {
    case Family::A: break;
    case Family::B: if (rank < 2) reject("type B requires rank >= 2"); break;
    case Family::C: if (rank < 2) reject("type C requires rank >= 2"); break;
    case Family::D: if (rank < 3) reject("type D requires rank >= 3"); break;
    case Family::E: if (rank < 6 || rank > 8) reject("type E exists for ranks 6..8"); break;
    case Family::F: if (rank != 4) reject("type F has rank 4"); break;
    case Family::G: if (rank != 2) reject("type G has rank 2"); break;
    }
    return t;
}

std::string CartanType::name() const {
    static const char* letters = "ABCDEFG";
    return std::string(1, letters[static_cast<int>(family)]) + std::to_string(rank);
}

RootDatum build_root_datum(const CartanType& type) {
    CartanType t = CartanType::parse(type.name()); // re-validate family/rank pair
    RootDatum rd;
    rd.type = t;
    rd.rank = t.rank;
    rd.simple_roots = simple_roots_ambient(t, rd.ambient_dim);

    const int r = rd.rank;
    std::vector<long long> norms(r);
    for (int i = 0; i < r; ++i) norms[i] = dot(rd.simple_roots[i], rd.simple_roots[i]);

    // <beta, alpha_i^vee> = 2 (beta, alpha_i) / (alpha_i, alpha_i); exact by crystallography.
    auto cartan_pair = [&](const Vec& beta, int i) -> long long {
        long long num = 2 * dot(beta, rd.simple_roots[i]);
        if (num % norms[i] != 0) throw std::logic_error("non-integral Cartan pairing");
        return num / norms[i];
    };

    rd.cartan_matrix.assign(r, std::vector<long long>(r, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            rd.cartan_matrix[i][j] = cartan_pair(rd.simple_roots[j], i);

    // Reflection closure: every root is reachable from a simple root.
    std::set<Vec> all(rd.simple_roots.begin(), rd.simple_roots.end());
    std::vector<Vec> queue(rd.simple_roots);
    while (!queue.empty()) {
        Vec beta = queue.back();
        queue.pop_back();
        for (int i = 0; i < r; ++i) {
            long long c = cartan_pair(beta, i);
            Vec refl = beta;
            for (int k = 0; k < rd.ambient_dim; ++k) refl[k] -= c * rd.simple_roots[i][k];
            if (all.insert(refl).second) queue.push_back(refl);
        }
    }

    // Expand each root over the simple-root basis via the Cartan matrix:
    // pairing vector p_i(beta) = sum_j cartan[i][j] * x_j.
    std::vector<std::vector<Rat>> cm(r, std::vector<Rat>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) cm[i][j] = Rat(rd.cartan_matrix[i][j]);

    for (const Vec& beta : all) {
        std::vector<Rat> rhs(r);
        for (int i = 0; i < r; ++i) rhs[i] = Rat(cartan_pair(beta, i));
        std::vector<Rat> x = solve_exact(cm, rhs);
        bool nonneg = true, nonpos = true;
        Vec coeffs(r);
        for (int i = 0; i < r; ++i) {
            if (!x[i].is_integer()) throw std::logic_error("root with non-integral coefficients");
            coeffs[i] = x[i].num();
            nonneg = nonneg && coeffs[i] >= 0;
            nonpos = nonpos && coeffs[i] <= 0;
        }
        if (!nonneg && !nonpos) throw std::logic_error("root neither positive nor negative");
        if (nonneg) {
            rd.positive_roots.push_back(beta);
            rd.positive_in_simple.push_back(coeffs);
        }
    }

    rd.kappa.assign(r, 0);
    for (const Vec& c : rd.positive_in_simple)
        for (int i = 0; i < r; ++i) rd.kappa[i] += c[i];
    for (long long k : rd.kappa)
        if (k < 1) throw std::logic_error("kappa coefficient below 1");
    return rd;
}

Rat pairing(std::span<const Rat> coeffs, std::span<const Rat> a) {
    if (coeffs.size() != a.size())
        throw std::invalid_argument("pairing: length mismatch");
    Rat s(0);
    for (size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * a[i];
    return s;
}

} // namespace wcint
