#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "evenqc/padic.hpp"

namespace evenqc {

using Rat = mpq_class;

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

// element a + b*w of Q(w), w^2 = d; d == 0 encodes plain Q (b ignored, kept 0)
struct QuadRat {
    Rat a, b;
    long d = 0;

    QuadRat() : a(0), b(0), d(0) {}
    QuadRat(Rat x) : a(std::move(x)), b(0), d(0) {}
    QuadRat(long x) : a(x), b(0), d(0) {}
    QuadRat(Rat x, Rat y, long dd) : a(std::move(x)), b(std::move(y)), d(dd) {
        if (d == 0 && b != 0) throw InputError("QuadRat: w-part over Q");
    }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    QuadRat conj() const { return QuadRat(a, -b, d); }
    Rat norm() const { return a * a - d * b * b; }

    friend long merged_d(const QuadRat& x, const QuadRat& y) {
        if (x.d && y.d && x.d != y.d) throw InputError("QuadRat: mixed fields");
        return x.d ? x.d : y.d;
    }
    friend QuadRat operator+(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a + y.a, x.b + y.b, merged_d(x, y));
    }
    friend QuadRat operator-(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a - y.a, x.b - y.b, merged_d(x, y));
    }
    QuadRat operator-() const { return QuadRat(-a, -b, d); }
    friend QuadRat operator*(const QuadRat& x, const QuadRat& y) {
        long dd = merged_d(x, y);
        return QuadRat(x.a * y.a + dd * x.b * y.b, x.a * y.b + x.b * y.a, dd);
    }
    QuadRat inverse() const {
        Rat n = norm();
        if (n == 0) throw InputError("QuadRat: division by zero");
        return QuadRat(a / n, -b / n, d);
    }
    friend QuadRat operator/(const QuadRat& x, const QuadRat& y) { return x * y.inverse(); }
    friend bool operator==(const QuadRat& x, const QuadRat& y) {
        return x.a == y.a && x.b == y.b;
    }

    std::string str() const {
        if (b == 0) return a.get_str();
        return a.get_str() + (b > 0 ? "+" : "") + b.get_str() + "*w";
    }
};

// embed via w -> wp (a p-adic square root of d); for Q just the rational
inline Padic embed(const QuadRat& x, const Padic& wp, const PrecisionPolicy& pol) {
    Padic av = Padic::from_rational(x.a, pol);
    if (x.b == 0) return av;
    return av + Padic::from_rational(x.b, pol) * wp;
}

inline bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

namespace detail {
inline mpz_class pollard_rho(const mpz_class& n) {
    std::mt19937_64 rng(0xC0FFEE);
    while (true) {
        mpz_class x = 2 + static_cast<unsigned long>(rng() % 1000000);
        mpz_class y = x, c = 1 + static_cast<unsigned long>(rng() % 1000000), g = 1;
        while (g == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (g != 1 && g != n) return g;
    }
}
}  // namespace detail

// prime factorization of |n|
inline std::map<mpz_class, long> factor(mpz_class n) {
    std::map<mpz_class, long> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    mpz_class d = 17;
    while (d * d <= n && d < 100000) {
        while (n % d == 0) {
            ++out[d];
            n /= d;
        }
        d += 2;
    }
    if (n == 1) return out;
    std::vector<mpz_class> stack{n};
    while (!stack.empty()) {
        mpz_class m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            ++out[m];
            continue;
        }
        mpz_class g = detail::pollard_rho(m);
        stack.push_back(g);
        stack.push_back(m / g);
    }
    return out;
}

}  // namespace evenqc
