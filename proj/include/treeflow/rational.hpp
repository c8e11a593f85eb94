#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace treeflow {

// Exact rational arithmetic on int64, with a positive-infinity flag for
// hard-constraint table entries.  Denominators stay tiny in practice
// (powers of two from half-unit bookkeeping), but we normalize by gcd
// anyway so equality is plain field comparison.
struct Rat {
    long long num = 0;
    long long den = 1;
    bool inf = false;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        normalize();
    }

    static Rat infinity() {
        Rat r;
        r.inf = true;
        return r;
    }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    bool is_integer() const { return !inf && den == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.inf || b.inf) return infinity();
        return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        if (a.inf) { assert(!b.inf); return infinity(); }
        assert(!b.inf);
        return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        if (a.inf || b.inf) {
            // 0 * inf is a modeling bug; callers skip zero-weight terms.
            assert(!(a.inf && !b.inf && b.num == 0));
            assert(!(b.inf && !a.inf && a.num == 0));
            return infinity();
        }
        return Rat(a.num * b.num, a.den * b.den);
    }
    Rat operator-() const {
        assert(!inf);
        return Rat(-num, den);
    }
    Rat& operator+=(const Rat& b) { *this = *this + b; return *this; }
    Rat& operator-=(const Rat& b) { *this = *this - b; return *this; }
    Rat& operator*=(const Rat& b) { *this = *this * b; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) {
        if (a.inf || b.inf) return a.inf == b.inf;
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        if (a.inf) return false;
        if (b.inf) return true;
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    // Exact conversion to an integer after multiplying by `scale`;
    // asserts divisibility.
    long long scaled(long long scale) const {
        assert(!inf);
        long long t = num * scale;
        assert(t % den == 0);
        return t / den;
    }

    std::string str() const {
        if (inf) return "inf";
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    double approx() const { return inf ? 1e300 : double(num) / double(den); }
};

inline Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

}  // namespace treeflow
