#include "wcint/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace wcint {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::string lower(std::string_view s) {
    std::string t(s);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return t;
}

} // namespace

PicClass PicClass::parse(std::string_view s, const RootDatum& rd, const DivisorChoice& D) {
    std::string key = lower(s);
    if (key == "anticanonical" || key == "-k") return anticanonical(rd);
    if (key == "log-anticanonical" || key == "loganticanonical" || key == "-(k+d)")
        return log_anticanonical(rd, D);
    PicClass lambda;
    for (const std::string& part : split(s, ',')) {
        if (part.empty()) throw std::invalid_argument("lambda: empty component");
        lambda.coeffs.push_back(Rat::parse(part));
    }
    if (static_cast<int>(lambda.coeffs.size()) != rd.rank)
        throw std::invalid_argument("lambda: expected " + std::to_string(rd.rank) +
                                    " components, got " + std::to_string(lambda.coeffs.size()));
    return lambda;
}

std::string PicClass::str() const {
    std::string out;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) out += ",";
        out += coeffs[i].str();
    }
    return out;
}

DivisorChoice DivisorChoice::parse(std::string_view s, int rank) {
    DivisorChoice d;
    std::string key = lower(s);
    if (key == "none" || key.empty()) return d;
    if (key == "all" || key == "full") {
        for (int i = 1; i <= rank; ++i) d.in_D.insert(i);
        return d;
    }
    for (const std::string& part : split(s, ',')) {
        if (part.empty()) throw std::invalid_argument("divisor: empty index");
        size_t pos = 0;
        int idx = std::stoi(part, &pos);
        if (pos != part.size() || idx < 1 || idx > rank)
            throw std::invalid_argument("divisor: index " + part + " outside 1.." +
                                        std::to_string(rank));
        d.in_D.insert(idx);
    }
    return d;
}

std::string DivisorChoice::str(int rank) const {
    if (in_D.empty()) return "none";
    if (static_cast<int>(in_D.size()) == rank) return "all";
    std::string out;
    for (int i : in_D) {
        if (!out.empty()) out += ",";
        out += std::to_string(i);
    }
    return out;
}

PlaceSet PlaceSet::parse(std::string_view s) {
    PlaceSet ps;
    for (const std::string& part : split(s, ',')) {
        if (part.empty()) continue;
        std::string key = lower(part);
        if (key == "inf" || key == "infty" || key == "oo") continue; // always present
        size_t pos = 0;
        long long p = std::stoll(part, &pos);
        if (pos != part.size() || p < 2)
            throw std::invalid_argument("places: bad entry \"" + part + "\"");
        for (long long q = 2; q * q <= p; ++q)
            if (p % q == 0) throw std::invalid_argument("places: " + part + " is not prime");
        ps.finite_primes.insert(p);
    }
    return ps;
}

std::string PlaceSet::str() const {
    std::string out = "inf";
    for (long long p : finite_primes) out += "," + std::to_string(p);
    return out;
}

PicClass anticanonical(const RootDatum& rd) {
    PicClass c;
    for (long long k : rd.kappa) c.coeffs.push_back(Rat(k + 1));
    return c;
}

PicClass log_anticanonical(const RootDatum& rd, const DivisorChoice& D) {
    PicClass c;
    for (int i = 0; i < rd.rank; ++i)
        c.coeffs.push_back(Rat(rd.kappa[i] + (D.contains(i + 1) ? 0 : 1)));
    return c;
}

AsymptoticInvariants growth_invariants(const RootDatum& rd, const PicClass& lambda,
                                       const DivisorChoice& D, const PlaceSet& S) {
    if (static_cast<int>(lambda.coeffs.size()) != rd.rank)
        throw std::invalid_argument("growth_invariants: lambda has wrong length");
    if (!lambda.is_big())
        throw std::invalid_argument("growth_invariants: lambda must be big "
                                    "(all coefficients positive)");
    for (int i : D.in_D)
        if (i < 1 || i > rd.rank)
            throw std::invalid_argument("growth_invariants: divisor index outside rank");

    // Candidate ratio per alpha: kappa/lambda on D, (kappa+1)/lambda off D.
    std::vector<Rat> ratio(rd.rank);
    for (int i = 0; i < rd.rank; ++i) {
        long long num = rd.kappa[i] + (D.contains(i + 1) ? 0 : 1);
        ratio[i] = Rat(num) / lambda.coeffs[i];
    }
    AsymptoticInvariants inv;
    inv.a = ratio[0];
    for (int i = 1; i < rd.rank; ++i)
        if (ratio[i] > inv.a) inv.a = ratio[i];
    for (int i = 0; i < rd.rank; ++i) {
        if (ratio[i] == inv.a) {
            inv.a_set.push_back(i + 1);
            if (D.contains(i + 1)) ++inv.d_lambda;
        }
    }
    inv.r_lambda = static_cast<int>(inv.a_set.size());
    inv.b = (inv.r_lambda - inv.d_lambda) +
            static_cast<long long>(S.size()) * inv.d_lambda;
    return inv;
}

int character_group_order(std::string_view base_field, const DivisorChoice&,
                          const PicClass&, const PlaceSet&) {
    std::string key = lower(base_field);
    if (key == "q" || key == "qq" || key == "rationals")
        return 1; // class number one: every unramified automorphic character is trivial
    throw std::invalid_argument("unsupported base field \"" + std::string(base_field) +
                                "\" (only Q is supported)");
}

} // namespace wcint
