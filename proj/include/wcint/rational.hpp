#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wcint {

/// Exact rational number on 64-bit numerator/denominator.
///
/// All intermediate products go through 128-bit integers and throw
/// std::overflow_error instead of wrapping; exponent bookkeeping must
/// never round or overflow silently.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    bool is_positive() const { return num_ > 0; }

    Rat operator-() const { return Rat(-num_, den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    // Exact comparison through 128-bit cross multiplication.
    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "3", "-4/3", "0.5" (decimal with up to 9 fractional digits).
    static Rat parse(std::string_view s);

private:
    using i128 = __int128;

    long long num_, den_;

    static long long clamp(i128 v) {
        if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
            throw std::overflow_error("Rat: 64-bit overflow");
        return static_cast<long long>(v);
    }

    static Rat make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num_ = clamp(n);
        r.den_ = clamp(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        *this = make(num_, den_);
    }
};

inline Rat Rat::parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
    auto slash = s.find('/');
    auto to_ll = [](std::string_view t) -> long long {
        size_t pos = 0;
        long long v = std::stoll(std::string(t), &pos);
        if (pos != t.size()) throw std::invalid_argument("Rat::parse: trailing junk");
        return v;
    };
    if (slash != std::string_view::npos) {
        return Rat(to_ll(s.substr(0, slash)), to_ll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        if (frac.empty() || frac.size() > 9)
            throw std::invalid_argument("Rat::parse: unsupported decimal");
        long long den = 1;
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        long long ip = (dot == 0) ? 0 : to_ll(s.substr(0, dot));
        long long fp = to_ll(frac);
        bool neg = (!s.empty() && s[0] == '-');
        long long mag = (ip < 0 ? -ip : ip);
        Rat r(mag * den + fp, den);
        return neg ? -r : r;
    }
    return Rat(to_ll(s));
}

} // namespace wcint
