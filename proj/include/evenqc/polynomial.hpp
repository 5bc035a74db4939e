#pragma once

#include <algorithm>
#include <vector>

#include "evenqc/padic.hpp"
#include "evenqc/rationals.hpp"

namespace evenqc {

// dense polynomial, coefficients constant-term first
template <class T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> cc) : c(std::move(cc)) { trim(); }

    static bool coeff_zero(const T& x) {
        if constexpr (std::is_same_v<T, Padic>)
            return x.is_exact_zero();
        else if constexpr (std::is_same_v<T, QuadRat>)
            return x.is_zero();
        else
            return x == 0;
    }

    void trim() {
        while (!c.empty() && coeff_zero(c.back())) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }

    const T& operator[](size_t i) const { return c[i]; }
    T& operator[](size_t i) { return c[i]; }

    T coeff(long i) const {
        if (i < 0 || i >= static_cast<long>(c.size())) return T{};
        return c[i];
    }

    const T& lead() const { return c.back(); }

    friend Poly operator+(const Poly& f, const Poly& g) {
        std::vector<T> r(std::max(f.c.size(), g.c.size()), T{});
        for (size_t i = 0; i < f.c.size(); ++i) r[i] = r[i] + f.c[i];
        for (size_t i = 0; i < g.c.size(); ++i) r[i] = r[i] + g.c[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& f, const Poly& g) {
        std::vector<T> r(std::max(f.c.size(), g.c.size()), T{});
        for (size_t i = 0; i < f.c.size(); ++i) r[i] = r[i] + f.c[i];
        for (size_t i = 0; i < g.c.size(); ++i) r[i] = r[i] - g.c[i];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& f, const Poly& g) {
        if (f.is_zero() || g.is_zero()) return Poly();
        std::vector<T> r(f.c.size() + g.c.size() - 1, T{});
        for (size_t i = 0; i < f.c.size(); ++i)
            for (size_t j = 0; j < g.c.size(); ++j) r[i + j] = r[i + j] + f.c[i] * g.c[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const T& s, const Poly& f) {
        std::vector<T> r = f.c;
        for (auto& x : r) x = s * x;
        return Poly(std::move(r));
    }
    Poly operator-() const {
        std::vector<T> r = c;
        for (auto& x : r) x = -x;
        return Poly(std::move(r));
    }

    Poly shifted(long k) const {  // multiply by x^k
        if (is_zero()) return *this;
        std::vector<T> r(c.size() + k, T{});
        for (size_t i = 0; i < c.size(); ++i) r[i + k] = c[i];
        return Poly(std::move(r));
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> r(c.size() - 1, T{});
        for (size_t i = 1; i < c.size(); ++i) r[i - 1] = mul_long(c[i], static_cast<long>(i));
        return Poly(std::move(r));
    }

    template <class U>
    U eval(const U& x) const {
        U r{};
        for (size_t i = c.size(); i-- > 0;) r = r * x + U(c[i]);
        return r;
    }

    static T mul_long(const T& x, long n) {
        if constexpr (std::is_same_v<T, Padic>) {
            if (x.is_zero()) return x;
            PrecisionPolicy pol(x.prime(), std::max(std::min(x.rel_precision(), 1L << 20), 1L));
            return x * Padic::from_integer(n, pol);
        } else {
            return x * T(n);
        }
    }
};

using ZPoly = Poly<mpz_class>;
using QPoly = Poly<Rat>;
using KPoly = Poly<QuadRat>;
using PPoly = Poly<Padic>;

inline QPoly to_qpoly(const ZPoly& f) {
    std::vector<Rat> c(f.c.begin(), f.c.end());
    return QPoly(std::move(c));
}

// Euclidean division over a field (Rat or QuadRat)
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& f, const Poly<T>& g) {
    if (g.is_zero()) throw InputError("divmod: zero divisor");
    Poly<T> q, r = f;
    q.c.assign(std::max<long>(f.degree() - g.degree() + 1, 0), T{});
    T inv_lead = T(1) / g.lead();
    while (!r.is_zero() && r.degree() >= g.degree()) {
        long k = r.degree() - g.degree();
        T s = r.lead() * inv_lead;
        q.c[k] = q.c[k] + s;
        for (long i = 0; i <= g.degree(); ++i) r.c[i + k] = r.c[i + k] - s * g[i];
        r.c.pop_back();
        r.trim();
    }
    q.trim();
    return {q, r};
}

template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        T inv = T(1) / a.lead();
        a = inv * a;
    }
    return a;
}

// resultant over a field via the Euclidean algorithm
template <class T>
T resultant(Poly<T> a, Poly<T> b) {
    if (a.is_zero() || b.is_zero()) return T{};
    T res(1);
    while (true) {
        long da = a.degree(), db = b.degree();
        if (db == 0) {
            T r(1), lb = b[0];
            for (long i = 0; i < da; ++i) r = r * lb;
            return res * r;
        }
        auto [q, r] = divmod(a, b);
        if (r.is_zero()) return T{};
        long dr = r.degree();
        // res(a,b) = (-1)^(da db) lead(b)^(da - dr) res(b,r)
        T lb = b.lead(), mul(1);
        for (long i = 0; i < da - dr; ++i) mul = mul * lb;
        if ((da % 2) && (db % 2)) mul = -mul;
        res = res * mul;
        a = b;
        b = r;
    }
}

template <class T>
T poly_discriminant(const Poly<T>& f) {
    long n = f.degree();
    T r = resultant(f, f.derivative());
    T lead_inv = T(1) / f.lead();
    r = r * lead_inv;
    if (((n * (n - 1)) / 2) % 2) r = -r;
    return r;
}

// --- arithmetic in F_q[x], coefficients as mpz residues in [0, q) ---

using FqPoly = std::vector<mpz_class>;  // constant first

inline void fq_trim(FqPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline FqPoly fq_reduce(const std::vector<mpz_class>& coeffs, const mpz_class& q) {
    FqPoly r;
    r.reserve(coeffs.size());
    for (auto& c : coeffs) {
        mpz_class x = c % q;
        if (x < 0) x += q;
        r.push_back(x);
    }
    fq_trim(r);
    return r;
}

inline FqPoly fq_mul(const FqPoly& a, const FqPoly& b, const mpz_class& q) {
    if (a.empty() || b.empty()) return {};
    FqPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % q;
    fq_trim(r);
    return r;
}

inline FqPoly fq_sub(const FqPoly& a, const FqPoly& b, const mpz_class& q) {
    FqPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % q + q) % q;
    fq_trim(r);
    return r;
}

// is f a square in F_q[x]?  Handles q = 2 via the Frobenius criterion.
inline bool fq_is_square(const FqPoly& f0, const mpz_class& q) {
    FqPoly f = f0;
    fq_trim(f);
    if (f.empty()) return true;
    long deg = static_cast<long>(f.size()) - 1;
    if (deg % 2) return false;
    if (q == 2) {
        // squares are exactly polynomials in x^2
        for (size_t i = 1; i < f.size(); i += 2)
            if (f[i] != 0) return false;
        return true;
    }
    // leading coefficient must be a square in F_q (q an odd prime here)
    mpz_class lead = f.back(), leg;
    mpz_class e = (q - 1) / 2;
    mpz_powm(leg.get_mpz_t(), lead.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
    if (leg != 1) return false;
    mpz_class b;
    if (q.fits_slong_p()) {
        auto r = sqrt_mod_p(lead, q.get_si());
        if (!r) return false;
        b = *r;
    } else if (q % 4 == 3) {
        mpz_class ee = (q + 1) / 4;
        mpz_powm(b.get_mpz_t(), lead.get_mpz_t(), ee.get_mpz_t(), q.get_mpz_t());
    } else {
        throw InputError("fq_is_square: prime too large for sqrt");
    }
    // match coefficients of g = b x^(deg/2) + ... from the top
    long n = deg / 2;
    FqPoly g(n + 1, 0);
    g[n] = b;
    mpz_class inv2b = invert_mod(2 * b, q);
    for (long k = n - 1; k >= 0; --k) {
        // coefficient of x^(n+k) in g^2 must equal f[n+k]; pairs (i, j),
        // i + j = n + k with i, j in (k, n] are already determined
        mpz_class acc = 0;
        for (long i = k + 1; i <= n; ++i) {
            long j = n + k - i;
            if (j <= k || j > n) continue;
            acc = (acc + g[i] * g[j]) % q;
        }
        mpz_class ck = ((f[n + k] - acc) % q + q) % q;
        g[k] = ck * inv2b % q;
    }
    return fq_sub(f, fq_mul(g, g, q), q).empty();
}

inline mpz_class fq_eval(const FqPoly& f, const mpz_class& x, const mpz_class& q) {
    mpz_class r = 0;
    for (size_t i = f.size(); i-- > 0;) r = (r * x + f[i]) % q;
    return r;
}

}  // namespace evenqc
