#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evenqc {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// A mathematical hypothesis of the method failed (non-ordinary prime,
// rank mismatch, dependent generators, ...). Distinct from bad input.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline mpz_class pow_ui(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline mpz_class pow_p(long p, long k) {
    if (k < 0) throw InputError("pow_p: negative exponent");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

inline long valuation_of(mpz_class n, long p, long cap = 1L << 30) {
    if (n == 0) throw InputError("valuation_of: zero");
    long v = 0;
    mpz_class q, r;
    while (v < cap) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(),
                       static_cast<unsigned long>(p));
        if (r != 0) break;
        n = q;
        ++v;
    }
    return v;
}

inline mpz_class mod_pk(const mpz_class& a, long p, long k) {
    mpz_class m = pow_p(p, k), r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline mpz_class invert_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw InputError("invert_mod: not invertible");
    return r;
}

struct PrecisionPolicy {
    long prime = 7;
    long digits = 10;  // relative working precision N

    PrecisionPolicy() = default;
    PrecisionPolicy(long p, long n) : prime(p), digits(n) {
        if (p < 3) throw InputError("PrecisionPolicy: prime must be odd and > 2");
        if (n < 1) throw InputError("PrecisionPolicy: need at least one digit");
    }
};

// An element of Q_p known modulo p^absprec. Nonzero values are stored as
// p^v * u with u a unit in [1, p^(absprec - v)). A value that is
// indistinguishable from 0 at the current precision ("precision-zero",
// written O(p^absprec)) is distinct from an exact zero.
class Padic {
  public:
    Padic() : p_(0), state_(State::ExactZero) {}

    static Padic exact_zero(long p) {
        Padic z;
        z.p_ = p;
        z.state_ = State::ExactZero;
        return z;
    }

    static Padic zero_to(long p, long absprec) {
        Padic z;
        z.p_ = p;
        z.state_ = State::PrecZero;
        z.absprec_ = absprec;
        return z;
    }

    static Padic from_unit(long p, long v, mpz_class unit, long absprec) {
        Padic x;
        x.p_ = p;
        if (absprec - v < 1) return zero_to(p, absprec);
        x.state_ = State::NonZero;
        x.v_ = v;
        x.absprec_ = absprec;
        x.u_ = mod_pk(unit, p, absprec - v);
        if (x.u_ == 0) throw InputError("from_unit: unit divisible by p");
        return x;
    }

    static Padic from_integer(const mpz_class& n, const PrecisionPolicy& pol) {
        if (n == 0) return exact_zero(pol.prime);
        long v = valuation_of(n, pol.prime);
        mpz_class u = n / pow_p(pol.prime, v);
        return from_unit(pol.prime, v, u, v + pol.digits);
    }

    static Padic from_rational(const mpz_class& num, const mpz_class& den,
                               const PrecisionPolicy& pol) {
        if (den == 0) throw InputError("from_rational: zero denominator");
        if (num == 0) return exact_zero(pol.prime);
        long vn = valuation_of(num, pol.prime);
        long vd = valuation_of(den, pol.prime);
        long v = vn - vd;
        mpz_class un = num / pow_p(pol.prime, vn);
        mpz_class ud = den / pow_p(pol.prime, vd);
        long rel = pol.digits;
        mpz_class u = un * invert_mod(ud, pow_p(pol.prime, rel));
        return from_unit(pol.prime, v, u, v + rel);
    }

    static Padic from_rational(const mpq_class& q, const PrecisionPolicy& pol) {
        return from_rational(q.get_num(), q.get_den(), pol);
    }

    long prime() const { return p_; }
    bool is_exact_zero() const { return state_ == State::ExactZero; }
    bool is_precision_zero() const { return state_ == State::PrecZero; }
    // zero as far as the tracked precision can tell
    bool is_zero() const { return state_ != State::NonZero; }

    long valuation() const {
        if (state_ == State::NonZero) return v_;
        if (state_ == State::PrecZero) return absprec_;  // lower bound
        throw PrecisionError("valuation of exact zero");
    }

    // lower bound for the valuation, valid in every state
    long valuation_bound() const {
        if (state_ == State::NonZero) return v_;
        if (state_ == State::PrecZero) return absprec_;
        return (1L << 40);
    }

    long abs_precision() const {
        if (state_ == State::ExactZero) return (1L << 40);
        return absprec_;
    }

    long rel_precision() const {
        if (state_ == State::NonZero) return absprec_ - v_;
        if (state_ == State::PrecZero) return 0;
        return (1L << 40);
    }

    const mpz_class& unit_part() const {
        if (state_ != State::NonZero) throw PrecisionError("unit_part of zero value");
        return u_;
    }

    // representative in [0, p^k) of value * p^(-shift), for value with v >= shift
    mpz_class lift_shifted(long shift, long k) const {
        if (state_ == State::ExactZero) return 0;
        if (state_ == State::PrecZero) {
            if (absprec_ - shift < k)
                throw PrecisionError("lift_shifted: not enough precision");
            return 0;
        }
        if (v_ < shift) throw PrecisionError("lift_shifted: negative shifted valuation");
        if (absprec_ - shift < k) throw PrecisionError("lift_shifted: not enough precision");
        return mod_pk(u_ * pow_p(p_, v_ - shift), p_, k);
    }

    // integer representative modulo p^k (requires v >= 0)
    mpz_class residue(long k) const { return lift_shifted(0, k); }

    Padic with_absprec_capped(long n) const {
        if (state_ == State::ExactZero) return *this;
        if (n >= absprec_) return *this;
        if (state_ == State::PrecZero) return zero_to(p_, n);
        return from_unit(p_, v_, u_, n);
    }

    Padic operator-() const {
        if (state_ != State::NonZero) return *this;
        return from_unit(p_, v_, pow_p(p_, absprec_ - v_) - u_, absprec_);
    }

    friend Padic operator+(const Padic& a, const Padic& b) {
        a.check_same(b);
        if (a.state_ == State::ExactZero) return b;
        if (b.state_ == State::ExactZero) return a;
        long N = std::min(a.absprec_, b.absprec_);
        long m = std::min(a.valuation_bound(), b.valuation_bound());
        if (N - m < 1) return zero_to(a.p_, N);
        mpz_class s = a.scaled_lift(m, N - m) + b.scaled_lift(m, N - m);
        s = mod_pk(s, a.p_, N - m);
        if (s == 0) return zero_to(a.p_, N);
        long w = valuation_of(s, a.p_);
        return from_unit(a.p_, m + w, s / pow_p(a.p_, w), N);
    }

    friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }

    friend Padic operator*(const Padic& a, const Padic& b) {
        a.check_same(b);
        if (a.state_ == State::ExactZero || b.state_ == State::ExactZero)
            return exact_zero(a.p_ ? a.p_ : b.p_);
        if (a.state_ == State::PrecZero || b.state_ == State::PrecZero) {
            // O(p^m) * (p^v u + O(..)) = O(p^(m+v))
            long m = a.valuation_bound() + b.valuation_bound();
            return zero_to(a.p_, m);
        }
        long rel = std::min(a.rel_precision(), b.rel_precision());
        mpz_class u = mod_pk(a.u_ * b.u_, a.p_, rel);
        return from_unit(a.p_, a.v_ + b.v_, u, a.v_ + b.v_ + rel);
    }

    Padic inverse() const {
        if (state_ != State::NonZero)
            throw is_exact_zero() ? PrecisionError("inverse of zero")
                                  : PrecisionError("inverse of precision-zero value");
        long rel = rel_precision();
        mpz_class u = invert_mod(u_, pow_p(p_, rel));
        return from_unit(p_, -v_, u, -v_ + rel);
    }

    friend Padic operator/(const Padic& a, const Padic& b) { return a * b.inverse(); }

    Padic pow(long e) const {
        if (e == 0) {
            PrecisionPolicy pol(p_, std::max(rel_precision(), 1L));
            return from_integer(1, pol);
        }
        if (e < 0) return inverse().pow(-e);
        Padic r = *this, acc = *this;
        long k = e - 1;
        while (k) {
            if (k & 1) r = r * acc;
            acc = acc * acc;
            k >>= 1;
        }
        return r;
    }

    // value * p^k, precision shifted accordingly
    Padic shift(long k) const {
        if (state_ == State::ExactZero) return *this;
        if (state_ == State::PrecZero) return zero_to(p_, absprec_ + k);
        return from_unit(p_, v_ + k, u_, absprec_ + k);
    }

    bool same_mod(const Padic& other, long k) const {
        Padic d = *this - other;
        return d.valuation_bound() >= k;
    }

    std::string to_string() const;

    void check_same(const Padic& b) const {
        if (p_ && b.p_ && p_ != b.p_) throw InputError("mixed primes in p-adic arithmetic");
    }

  private:
    enum class State { NonZero, PrecZero, ExactZero };

    // representative of value / p^m in [0, p^k)
    mpz_class scaled_lift(long m, long k) const {
        if (state_ == State::PrecZero) return 0;
        return mod_pk(u_ * pow_p(p_, v_ - m), p_, k);
    }

    long p_ = 0;
    State state_ = State::ExactZero;
    long v_ = 0;
    long absprec_ = 0;
    mpz_class u_;
};

inline std::string Padic::to_string() const {
    if (state_ == State::ExactZero) return "0";
    if (state_ == State::PrecZero)
        return "O(" + std::to_string(p_) + "^" + std::to_string(absprec_) + ")";
    std::string out;
    mpz_class rest = u_;
    for (long i = v_; i < absprec_; ++i) {
        mpz_class digit = rest % p_;
        rest /= p_;
        if (digit == 0) continue;
        if (!out.empty()) out += " + ";
        std::string d = digit.get_str();
        if (i == 0) {
            out += d;
        } else {
            std::string pw = std::to_string(p_);
            if (i != 1) pw += "^" + std::to_string(i);
            out += (digit == 1 ? pw : d + "*" + pw);
        }
    }
    if (out.empty()) out = "0";  // cannot happen for NonZero, kept for safety
    out += " + O(" + std::to_string(p_) + "^" + std::to_string(absprec_) + ")";
    return out;
}

// square root mod an odd prime via Tonelli-Shanks; nullopt for non-residues
inline std::optional<mpz_class> sqrt_mod_p(const mpz_class& a0, long p) {
    mpz_class P(p), a = a0 % P;
    if (a < 0) a += P;
    if (a == 0) return mpz_class(0);
    mpz_class leg;
    mpz_powm(leg.get_mpz_t(), a.get_mpz_t(), mpz_class((P - 1) / 2).get_mpz_t(),
             P.get_mpz_t());
    if (leg == P - 1) return std::nullopt;
    if (p % 4 == 3) {
        mpz_class r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), mpz_class((P + 1) / 4).get_mpz_t(),
                 P.get_mpz_t());
        return r;
    }
    // Tonelli-Shanks
    mpz_class q = P - 1;
    long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    mpz_class z = 2;
    while (true) {
        mpz_class l;
        mpz_powm(l.get_mpz_t(), z.get_mpz_t(), mpz_class((P - 1) / 2).get_mpz_t(),
                 P.get_mpz_t());
        if (l == P - 1) break;
        ++z;
    }
    mpz_class c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), P.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), P.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), mpz_class((q + 1) / 2).get_mpz_t(),
             P.get_mpz_t());
    long m = s;
    while (t != 1) {
        mpz_class tt = t;
        long i = 0;
        while (tt != 1) {
            tt = tt * tt % P;
            ++i;
            if (i == m) return std::nullopt;
        }
        mpz_class b = c;
        for (long j = 0; j < m - i - 1; ++j) b = b * b % P;
        r = r * b % P;
        c = b * b % P;
        t = t * c % P;
        m = i;
    }
    return r;
}

// One square root of a, or nullopt when a is not a square in Q_p.
// Convention: the returned root's unit is congruent to the smaller of the
// two residues mod p.
inline std::optional<Padic> padic_sqrt(const Padic& a) {
    if (a.is_exact_zero()) return a;
    if (a.is_precision_zero())
        throw PrecisionError("padic_sqrt: cannot decide squareness of O(p^n)");
    long p = a.prime();
    if (p == 2) throw InputError("padic_sqrt: p = 2 unsupported");
    if (a.valuation() % 2 != 0) return std::nullopt;
    long v = a.valuation() / 2;
    long rel = a.rel_precision();
    const mpz_class& u = a.unit_part();
    auto r0 = sqrt_mod_p(u, p);
    if (!r0) return std::nullopt;
    // Hensel: x -> (x + u/x)/2, doubling precision
    mpz_class x = *r0;
    long k = 1;
    mpz_class inv2 = invert_mod(2, pow_p(p, rel));
    while (k < rel) {
        k = std::min(2 * k, rel);
        mpz_class mod = pow_p(p, k);
        x = (x + u % mod * invert_mod(x, mod)) % mod * inv2 % mod;
    }
    mpz_class other = pow_p(p, rel) - x;
    if (mod_pk(x, p, 1) > mod_pk(other, p, 1)) x = other;
    return Padic::from_unit(p, v, x, v + rel);
}

// Teichmueller lift of a nonzero residue class mod p, to relative precision n
inline Padic teichmuller(const mpz_class& r0, const PrecisionPolicy& pol) {
    long p = pol.prime, n = pol.digits;
    mpz_class m = pow_p(p, n);
    mpz_class x = r0 % m;
    if (x < 0) x += m;
    if (x % p == 0) throw InputError("teichmuller: residue divisible by p");
    for (long i = 0; i < n; ++i) {
        mpz_class nx;
        mpz_powm_ui(nx.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p),
                    m.get_mpz_t());
        if (nx == x) break;
        x = nx;
    }
    return Padic::from_unit(p, 0, x, n);
}

// Iwasawa-branch p-adic logarithm: log(p) = 0, log of Teichmueller roots of
// unity = 0, log(1+z) by the usual series for v(z) >= 1.
inline Padic padic_log(const Padic& a) {
    if (a.is_zero()) throw PrecisionError("padic_log: zero (or precision-zero) input");
    long p = a.prime();
    if (p == 2) throw InputError("padic_log: p = 2 unsupported");
    long rel = a.rel_precision();
    // kill p^v and the Teichmueller part: w = u^(p-1) = 1 + z with v(z) >= 1
    Padic u = Padic::from_unit(p, 0, a.unit_part(), rel);
    Padic w = u.pow(p - 1);
    PrecisionPolicy pol(p, rel);
    Padic one = Padic::from_integer(1, pol);
    Padic z = w - one;
    if (z.is_zero())
        return Padic::zero_to(p, std::min(z.abs_precision() - 0, rel));
    long s = z.valuation();  // >= 1
    Padic acc = Padic::exact_zero(p);
    Padic zpow = z;
    long n = 1;
    while (true) {
        long vp_n = (n % p == 0) ? valuation_of(n, p) : 0;
        if (n > 1 && n * s - vp_n >= rel && (n - 1) * s >= rel) break;
        Padic term = zpow / Padic::from_integer(n, pol);
        acc = (n % 2 == 1) ? acc + term : acc - term;
        zpow = zpow * z;
        ++n;
        if (n > 4 * rel + p) break;  // series terms are below precision by here
    }
    Padic res = acc / Padic::from_integer(p - 1, pol);
    return res.with_absprec_capped(rel);
}

}  // namespace evenqc
