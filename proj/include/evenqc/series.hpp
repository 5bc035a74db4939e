#pragma once

#include <vector>

#include "evenqc/padic.hpp"

namespace evenqc {

inline long floor_log(long n, long p) {
    long k = 0, q = p;
    while (q <= n) {
        ++k;
        if (q > (1L << 55) / p) break;
        q *= p;
    }
    return k;
}

// Truncated power series over Q_p. `dom_val` is the valuation floor of the
// intended domain of the variable (1: z ranges over pZ_p, 0: over Z_p).
// `tail_val` is a proven lower bound for v(F(z) - stored polynomial(z)) on
// that domain; `coeff_floor` (when > MINUS_INF) bounds v(c_j) for every j,
// including truncated ones.
struct PadicSeries {
    static constexpr long MINUS_INF = -(1L << 40);
    static constexpr long PLUS_INF = (1L << 40);

    long p = 0;
    std::vector<Padic> c;
    long dom_val = 1;
    long coeff_floor = MINUS_INF;
    long tail_val = PLUS_INF;

    PadicSeries() = default;
    PadicSeries(long prime, long domain_val) : p(prime), dom_val(domain_val) {}

    static PadicSeries zero(long prime, long domain_val = 1) {
        PadicSeries s(prime, domain_val);
        s.coeff_floor = PLUS_INF;
        return s;
    }

    long order() const { return static_cast<long>(c.size()); }

    Padic coeff(long j) const {
        if (j < 0 || j >= order()) return Padic::exact_zero(p);
        return c[j];
    }

    void refresh_tail_from_floor() {
        if (coeff_floor == MINUS_INF || c.empty()) return;
        long M = order();
        tail_val = std::min(tail_val, coeff_floor + M * dom_val);
    }

    // lower bound for v(F(z)) over the domain
    long value_bound() const {
        long b = tail_val;
        for (long j = 0; j < order(); ++j)
            b = std::min(b, c[j].valuation_bound() + j * dom_val);
        return b;
    }

    friend PadicSeries operator+(const PadicSeries& f, const PadicSeries& g) {
        PadicSeries r(f.p ? f.p : g.p, f.dom_val);
        long M = std::max(f.order(), g.order());
        r.c.reserve(M);
        for (long j = 0; j < M; ++j) r.c.push_back(f.coeff(j) + g.coeff(j));
        r.coeff_floor = std::min(f.coeff_floor, g.coeff_floor);
        r.tail_val = std::min(f.tail_val, g.tail_val);
        return r;
    }
    friend PadicSeries operator-(const PadicSeries& f, const PadicSeries& g) {
        return f + (-g);
    }
    PadicSeries operator-() const {
        PadicSeries r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }

    friend PadicSeries operator*(const Padic& s, const PadicSeries& f) {
        PadicSeries r = f;
        for (auto& x : r.c) x = s * x;
        long vs = s.valuation_bound();
        if (r.coeff_floor != MINUS_INF && r.coeff_floor != PLUS_INF) r.coeff_floor += vs;
        if (r.tail_val != PLUS_INF) r.tail_val += vs;
        return r;
    }

    // product truncated at order M
    static PadicSeries mul(const PadicSeries& f, const PadicSeries& g, long M) {
        PadicSeries r(f.p ? f.p : g.p, f.dom_val);
        long full = (f.c.empty() || g.c.empty()) ? 0 : f.order() + g.order() - 1;
        long n = std::min<long>(M, full);
        r.c.assign(std::max<long>(n, 0), Padic::exact_zero(r.p));
        for (long i = 0; i < f.order(); ++i) {
            if (f.c[i].is_exact_zero()) continue;
            for (long j = 0; j < g.order() && i + j < n; ++j)
                r.c[i + j] = r.c[i + j] + f.c[i] * g.c[j];
        }
        if (f.coeff_floor != MINUS_INF && g.coeff_floor != MINUS_INF)
            r.coeff_floor = (f.coeff_floor == PLUS_INF || g.coeff_floor == PLUS_INF)
                                ? PLUS_INF
                                : f.coeff_floor + g.coeff_floor;
        // F G - P_n(F G) = (tails cross terms) + explicitly dropped coefficients
        long vf = f.value_bound(), vg = g.value_bound();
        r.tail_val = std::min(clamped_add(f.tail_val, vg), clamped_add(g.tail_val, vf));
        for (long k = n; k < full; ++k) {
            long b = PLUS_INF;
            for (long i = std::max(0L, k - g.order() + 1); i < f.order() && i <= k; ++i)
                b = std::min(b, f.c[i].valuation_bound() + g.coeff(k - i).valuation_bound());
            r.tail_val = std::min(r.tail_val, clamped_add(b, k * r.dom_val));
        }
        return r;
    }

    static long clamped_add(long a, long b) {
        if (a >= PLUS_INF || b >= PLUS_INF) return PLUS_INF;
        return a + b;
    }

    // substitute z = p * w : maps a series on pZ_p to one on Z_p
    PadicSeries rescale_p() const {
        if (dom_val != 1) throw InputError("rescale_p: series not on pZ_p");
        PadicSeries r(p, 0);
        r.c.reserve(order());
        for (long j = 0; j < order(); ++j) r.c.push_back(c[j].shift(j));
        r.coeff_floor = MINUS_INF;  // floors become j-dependent; keep the tail bound
        r.tail_val = tail_val;
        return r;
    }

    // termwise antiderivative with zero constant term (series on pZ_p);
    // coefficient a_j / (j+1) loses v_p(j+1) digits
    PadicSeries integrate() const {
        if (dom_val != 1) throw InputError("integrate: series must live on pZ_p");
        if (coeff_floor == MINUS_INF)
            throw InputError("integrate: needs a uniform coefficient floor");
        PadicSeries r(p, 1);
        r.c.assign(order() + 1, Padic::exact_zero(p));
        for (long j = 0; j < order(); ++j) {
            if (c[j].is_exact_zero()) continue;
            long rel = std::max(c[j].rel_precision(), 1L);
            Padic den = Padic::from_integer(j + 1, PrecisionPolicy(p, rel + floor_log(j + 1, p) + 1));
            r.c[j + 1] = c[j] / den;
        }
        // truncated terms a_j z^{j+1}/(j+1), j >= M: v >= floor + n - v_p(n)
        // over n > M, and n - floor(log_p n) is nondecreasing
        long M = order();
        r.tail_val = (coeff_floor == PLUS_INF)
                         ? PLUS_INF
                         : coeff_floor + (M + 1) - floor_log(M + 1, p);
        r.coeff_floor = MINUS_INF;
        return r;
    }

    PadicSeries derivative() const {
        PadicSeries r(p, dom_val);
        if (order() <= 1) return r;
        r.c.reserve(order() - 1);
        for (long j = 1; j < order(); ++j) {
            if (c[j].is_zero()) {
                r.c.push_back(c[j]);
                continue;
            }
            long rel = std::max(c[j].rel_precision(), 1L);
            r.c.push_back(c[j] * Padic::from_integer(j, PrecisionPolicy(p, rel)));
        }
        r.coeff_floor = coeff_floor;
        r.tail_val = (tail_val >= PLUS_INF || dom_val == 0) ? tail_val
                                                            : tail_val - 1;
        return r;
    }

    // evaluate at a point of the domain; result precision capped by tail_val
    Padic eval(const Padic& z) const {
        if (z.valuation_bound() < dom_val)
            throw InputError("PadicSeries::eval: point outside the domain");
        Padic r = Padic::exact_zero(p);
        for (long j = order(); j-- > 0;) r = r * z + c[j];
        if (tail_val < PLUS_INF) r = r + Padic::zero_to(p, tail_val);
        return r;
    }

    PadicSeries truncated(long M) const {
        PadicSeries r = *this;
        if (r.order() > M) {
            for (long j = M; j < r.order(); ++j) {
                long drop = r.c[j].valuation_bound() + j * dom_val;
                r.tail_val = std::min(r.tail_val, drop);
            }
            r.c.resize(M);
        }
        return r;
    }
};

// Newton inversion of a series with unit constant term and coeff_floor 0,
// truncated at M. The inverse again has Z_p coefficients.
inline PadicSeries series_inverse(const PadicSeries& f, long M) {
    if (f.order() == 0 || f.c[0].is_zero() || f.c[0].valuation() != 0)
        throw InputError("series_inverse: constant term not a unit");
    if (f.coeff_floor != 0) throw InputError("series_inverse: needs integral coefficients");
    PadicSeries x(f.p, f.dom_val);
    x.c = {f.c[0].inverse()};
    x.coeff_floor = 0;
    x.tail_val = x.dom_val;  // order-1 truncation of an integral series
    long k = 1;
    while (k < M) {
        k = std::min(2 * k, M);
        PadicSeries fx = PadicSeries::mul(f.truncated(k), x, k);
        PadicSeries two(f.p, f.dom_val);
        two.c = {Padic::from_integer(2, PrecisionPolicy(f.p, std::max(f.c[0].rel_precision(), 1L)))};
        two.coeff_floor = 0;
        two.tail_val = PadicSeries::PLUS_INF;
        x = PadicSeries::mul(x, two - fx, k);
        x.coeff_floor = 0;
        x.tail_val = k * x.dom_val;
    }
    // 1/F - 1/P = (P - F)/(F P): unit values, so the input tail carries over
    x.tail_val = std::min(f.tail_val, M * x.dom_val);
    return x;
}

// square root of a series with coeff_floor 0 whose constant term is the
// square of the given unit y0; picks the branch with constant term y0
inline PadicSeries series_sqrt(const PadicSeries& f, const Padic& y0, long M) {
    if (f.coeff_floor != 0 || y0.valuation() != 0)
        throw InputError("series_sqrt: needs integral coefficients and unit center");
    PadicSeries y(f.p, f.dom_val);
    y.c = {y0};
    y.coeff_floor = 0;
    y.tail_val = y.dom_val;
    Padic half = Padic::from_integer(2, PrecisionPolicy(f.p, std::max(y0.rel_precision(), 1L)))
                     .inverse();
    long k = 1;
    while (k < M) {
        k = std::min(2 * k, M);
        PadicSeries q = PadicSeries::mul(f.truncated(k), series_inverse(y, k), k);
        y = half * (y + q);
        y = y.truncated(k);
        y.coeff_floor = 0;
        y.tail_val = k * y.dom_val;
    }
    // sqrt(F) - sqrt(P) = (F - P)/(sqrt(F) + sqrt(P)) with unit denominator
    y.tail_val = std::min(f.tail_val, M * y.dom_val);
    return y;
}

}  // namespace evenqc
