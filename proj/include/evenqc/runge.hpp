#pragma once

#include <vector>

#include "evenqc/curve.hpp"
#include "evenqc/polynomial.hpp"

namespace evenqc {

// f = g^2 + h with deg h < n = deg f / 2, and the integral scaling
// F = (2b)^{2k} f = G^2 + H
struct RungeDecomposition {
    QPoly g_poly;  // b x^n + c_{n-1} x^{n-1} + ...
    QPoly h_poly;  // f - g^2, degree <= n-1
    long k = 0;    // scaling exponent: F = (2b)^{2k} f
    ZPoly F, G, H;
    mpz_class b;
};

inline RungeDecomposition runge_decompose(const ZPoly& f) {
    long deg = f.degree();
    if (deg <= 0 || deg % 2 != 0) throw HypothesisError("runge: degree must be even > 0");
    long n = deg / 2;
    mpz_class lead = f.lead();
    if (lead <= 0 || mpz_perfect_square_p(lead.get_mpz_t()) == 0)
        throw HypothesisError("runge: leading coefficient is not a positive square");
    RungeDecomposition out;
    mpz_sqrt(out.b.get_mpz_t(), lead.get_mpz_t());

    // match coefficients of x^{n+j} for j = n-1 .. 0:
    //   f_{n+j} = 2 b c_j + sum_{i+i'=n+j, j<i,i'<n} c_i c_{i'}
    std::vector<Rat> c(n + 1, Rat(0));
    c[n] = Rat(out.b);
    for (long j = n - 1; j >= 0; --j) {
        Rat acc(0);
        for (long i = j + 1; i < n; ++i) {
            long i2 = n + j - i;
            if (i2 <= j || i2 >= n || i2 < i) continue;
            acc += (i == i2 ? Rat(1) : Rat(2)) * c[i] * c[i2];
        }
        Rat target(f.coeff(n + j));
        c[j] = (target - acc) / (2 * Rat(out.b));
    }
    out.g_poly = QPoly(std::vector<Rat>(c.begin(), c.end()));
    out.h_poly = to_qpoly(f) - out.g_poly * out.g_poly;
    if (out.h_poly.degree() > n - 1)
        throw HypothesisError("runge: decomposition failed (internal)");

    // minimal k with (2b)^k g and (2b)^{2k} h integral
    mpz_class twob = 2 * out.b;
    long k = 0;
    auto integral_at = [&](long kk) {
        mpz_class s1 = pow_ui(twob, static_cast<unsigned long>(kk));
        mpz_class s2 = s1 * s1;
        for (auto& q : out.g_poly.c) {
            Rat scaled = q * Rat(s1);
            if (scaled.get_den() != 1) return false;
        }
        for (auto& q : out.h_poly.c) {
            Rat scaled = q * Rat(s2);
            if (scaled.get_den() != 1) return false;
        }
        return true;
    };
    while (!integral_at(k)) ++k;
    out.k = k;
    mpz_class s1 = pow_ui(twob, static_cast<unsigned long>(k));
    mpz_class s2 = s1 * s1;
    std::vector<mpz_class> Fc, Gc, Hc;
    for (auto& q : to_qpoly(f).c) Fc.push_back(mpz_class(q.get_num()) * s2);
    for (auto& q : out.g_poly.c) {
        Rat scaled = q * Rat(s1);
        Gc.push_back(mpz_class(scaled.get_num()));
    }
    for (auto& q : out.h_poly.c) {
        Rat scaled = q * Rat(s2);
        Hc.push_back(mpz_class(scaled.get_num()));
    }
    out.F = ZPoly(std::move(Fc));
    out.G = ZPoly(std::move(Gc));
    out.H = ZPoly(std::move(Hc));
    ZPoly check = out.F - out.G * out.G - out.H;
    if (!check.is_zero()) throw HypothesisError("runge: F = G^2 + H failed (internal)");
    return out;
}

// M = (sum_{i<n} (2|p_i| + |q_i|) + 1) / (2 |p_n|)
inline Rat runge_bound(const RungeDecomposition& dec) {
    long n = dec.G.degree();
    mpz_class acc = 1;
    for (long i = 0; i < n; ++i) {
        mpz_class pi = dec.G.coeff(i), qi = dec.H.coeff(i);
        acc += 2 * abs(pi) + abs(qi);
    }
    return Rat(acc) / (2 * Rat(abs(dec.G.lead())));
}

// integer roots of H by divisor search on the constant term
inline std::vector<mpz_class> integer_roots(const ZPoly& H) {
    std::vector<mpz_class> out;
    if (H.is_zero()) return out;
    ZPoly G = H;
    // strip trailing zero coefficients: x = 0 is a root
    long shift = 0;
    while (shift < static_cast<long>(G.c.size()) && G.c[shift] == 0) ++shift;
    if (shift > 0) {
        out.push_back(0);
        G.c.erase(G.c.begin(), G.c.begin() + shift);
    }
    if (G.c.empty()) return out;
    mpz_class c0 = abs(G.c.front());
    for (mpz_class d = 1; d * d <= c0; ++d) {
        if (c0 % d != 0) continue;
        mpz_class other = c0 / d;
        for (mpz_class cand : {mpz_class(d), other}) {
            for (int sign = -1; sign <= 1; sign += 2) {
                mpz_class x = sign * cand;
                if (G.eval(x) == 0 &&
                    std::find(out.begin(), out.end(), x) == out.end())
                    out.push_back(x);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct RungeConfig {
    std::vector<long> prescreen_primes = {3, 5, 7, 11};
    bool interval_refinement = false;  // exact sign-analysis pass (Lemma A.3 inequality)
};

// all integral points on y^2 = f(x) for f squarefree of even degree with
// positive square leading coefficient, or any negative leading coefficient
inline std::vector<IntegerPoint> runge_points(const ZPoly& f,
                                              const RungeConfig& cfg = {}) {
    long deg = f.degree();
    if (deg <= 0 || deg % 2 != 0) throw HypothesisError("runge: degree must be even > 0");
    QPoly fq = to_qpoly(f);
    if (poly_discriminant(fq) == 0) throw HypothesisError("runge: f is not squarefree");

    std::vector<mpz_class> candidates;
    mpz_class lead = f.lead();
    if (lead < 0) {
        // f(x) <= -1 for |x| > M' = (sum |f_i| + 1) / |lead|
        mpz_class acc = 1;
        for (long i = 0; i < deg; ++i) acc += abs(f.coeff(i));
        mpz_class Mp = acc / abs(lead) + 1;
        for (mpz_class x = -Mp; x <= Mp; ++x) candidates.push_back(x);
    } else {
        if (mpz_perfect_square_p(lead.get_mpz_t()) == 0)
            throw HypothesisError(
                "runge: positive non-square leading coefficient; use the p-adic pipeline");
        RungeDecomposition dec = runge_decompose(f);
        Rat M = runge_bound(dec);
        mpz_class Mfloor = mpz_class(M.get_num() / M.get_den());
        for (mpz_class x = -Mfloor; x <= Mfloor; ++x) candidates.push_back(x);
        for (auto& r : integer_roots(dec.H))
            if (abs(r) > Mfloor) candidates.push_back(r);
        if (cfg.interval_refinement) {
            // drop x with P_U(|x|) > |H(x)| and H(x) != 0: no integral point
            // can sit there (the bound lemma's inequality, applied exactly)
            std::vector<mpz_class> kept;
            for (auto& x : candidates) {
                mpz_class ax = abs(x);
                mpz_class PU = 2 * abs(dec.G.lead());
                for (long i = 0; i < dec.G.degree(); ++i) PU = PU * ax;
                mpz_class sub = 1;
                mpz_class pow = 1;
                for (long i = 0; i < dec.G.degree(); ++i) {
                    sub += 2 * abs(dec.G.coeff(i)) * pow;
                    pow *= ax;
                }
                PU = PU - sub;
                mpz_class H = dec.H.eval(x);
                if (PU > abs(H) && H != 0) continue;
                kept.push_back(x);
            }
            candidates = std::move(kept);
        }
    }

    // modular prescreen on x-coordinates
    std::vector<std::pair<long, std::vector<bool>>> screens;
    for (long q : cfg.prescreen_primes) {
        if (q == 2) continue;
        std::vector<bool> ok(q, false);
        FqPoly fqp = fq_reduce(f.c, q);
        bool all = true;
        for (long r = 0; r < q; ++r) {
            mpz_class v = fq_eval(fqp, r, q);
            ok[r] = (v == 0) || is_square_mod(v.get_si(), q);
            all = all && ok[r];
        }
        if (!all) screens.emplace_back(q, std::move(ok));
    }

    std::vector<IntegerPoint> out;
    for (auto& x : candidates) {
        bool pass = true;
        for (auto& [q, ok] : screens) {
            long r = mpz_class(x % q).get_si();
            if (r < 0) r += q;
            if (!ok[r]) {
                pass = false;
                break;
            }
        }
        if (!pass) continue;
        mpz_class v = f.eval(x);
        if (v < 0) continue;
        mpz_class root, rem;
        mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
        if (rem != 0) continue;
        out.push_back({x, root});
        if (root != 0) out.push_back({x, -root});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace evenqc
