#pragma once

#include <vector>

#include "evenqc/curve.hpp"
#include "evenqc/linalg.hpp"
#include "evenqc/polynomial.hpp"
#include "evenqc/series.hpp"

namespace evenqc {

// term poly(x) * y^ypow of a Coleman primitive (ypow odd; +1 or negative)
struct HTerm {
    PPoly poly;
    long ypow;
};

// Frobenius action on the odd Monsky-Washnitzer cohomology of the affine
// curve, basis omega_i = x^i dx / y for 0 <= i <= 2g. H^1_dR(X) sits inside
// as the residue-free part, with basis B_i = omega_i - c_{i-g} omega_g
// (i != g), where 1/S(t) = sum c_m t^m at infinity.
struct CohomologyData {
    PadicCurve curve;  // at the inflated internal precision
    long internal_digits = 0;
    long kmax = 0;
    long tail_cap = 0;  // proven validity of entries (binomial tail bound)

    PMat phi;                             // (2g+1)^2, columns = reductions of sigma(omega_i)
    std::vector<std::vector<HTerm>> h;    // h[i]: exact part for omega_i
    std::vector<Padic> res_plus;          // residues of omega_i at infinity_plus
    std::vector<Padic> s_inv;             // 1/S(t) coefficients at infinity_plus

    PMat phi_dr;                          // 2g x 2g on the B-basis
    std::vector<Padic> charpoly;          // det(T - phi_dr), constant first
    PMat W;                               // 2g x g, unit-root subspace in B-coords
    std::vector<Padic> psi_third_kind;    // Psi(omega_g) in B-coords
    std::vector<Padic> u;                 // normalization constants u_0..u_{g-1}

    long bidx(long m) const { return m < curve.genus ? m : m + 1; }
};

namespace detail {

inline std::pair<PPoly, PPoly> ppoly_divmod_monic(const PPoly& a, const PPoly& f) {
    // f monic: exact long division, no inversions
    PPoly q, r = a;
    long df = f.degree();
    if (r.degree() < df) return {q, r};
    q.c.assign(r.degree() - df + 1, Padic::exact_zero(f.c[0].prime()));
    while (r.degree() >= df) {
        long k = r.degree() - df;
        Padic s = r.lead();
        q.c[k] = q.c[k] + s;
        for (long i = 0; i <= df; ++i) r.c[i + k] = r.c[i + k] - s * f[i];
        r.c.pop_back();
        r.trim();
    }
    q.trim();
    return {q, r};
}

// (f')^{-1} mod f via a linear solve; valid since the discriminant is a unit
inline PPoly dfinv_mod_f(const PPoly& f, const PPoly& df, const PrecisionPolicy& pol) {
    long n = f.degree();
    PMat M(n, n);
    for (long j = 0; j < n; ++j) {
        PPoly xj;
        xj.c.assign(j + 1, Padic::exact_zero(pol.prime));
        xj.c[j] = Padic::from_integer(1, pol);
        PPoly col = ppoly_divmod_monic(xj * df, f).second;
        for (long i = 0; i < n; ++i) M(i, j) = col.coeff(i);
    }
    PMat rhs(n, 1);
    for (long i = 0; i < n; ++i) rhs(i, 0) = Padic::exact_zero(pol.prime);
    rhs(0, 0) = Padic::from_integer(1, pol);
    PMat v = padic_solve(M, rhs);
    std::vector<Padic> c;
    for (long i = 0; i < n; ++i) c.push_back(v(i, 0));
    return PPoly(std::move(c));
}

struct Reducer {
    const PadicCurve& C;
    PrecisionPolicy pol;
    PPoly f, df, dfinv;

    explicit Reducer(const PadicCurve& curve)
        : C(curve), pol(curve.pol), f(curve.f), df(curve.f.derivative()),
          dfinv(dfinv_mod_f(curve.f, curve.f.derivative(), curve.pol)) {}

    Padic integer(long n) const { return Padic::from_integer(n, pol); }

    // lower the y-pole order of A(x) y^{-s} dx from s down to s_stop
    PPoly reduce_pole(PPoly A, long s, long s_stop, std::vector<HTerm>& hout) const {
        while (s > s_stop) {
            // A = U f + V f'
            auto [q, r] = ppoly_divmod_monic(A, f);
            PPoly V = ppoly_divmod_monic(r * dfinv, f).second;
            PPoly U = q + ppoly_divmod_monic(r - V * df, f).first;
            Padic m = integer(s - 2).inverse();
            Padic two = integer(2);
            // [A y^-s] = [(U + 2 V'/(s-2)) y^{-(s-2)}] - d( (2V/(s-2)) y^{-(s-2)} )
            A = U + (two * m) * V.derivative();
            hout.push_back({(-(two * m)) * V, -(s - 2)});
            s -= 2;
        }
        return A;
    }

    // degree reduction for A y^{-1} dx using d(x^j y)
    PPoly reduce_degree(PPoly A, std::vector<HTerm>& hout) const {
        long g = C.genus;
        long target = 2 * C.genus + 1;
        while (A.degree() >= target) {
            long j = A.degree() - target;
            Padic lam = A.lead() / integer(j + g + 1);
            // subtract lam * d(x^j y) = lam (j x^{j-1} f + x^j f'/2) y^{-1} dx
            PPoly corr;
            if (j > 0) {
                PPoly xj1;
                xj1.c.assign(j, Padic::exact_zero(pol.prime));
                xj1.c[j - 1] = integer(j);
                corr = xj1 * f;
            }
            PPoly xj;
            xj.c.assign(j + 1, Padic::exact_zero(pol.prime));
            xj.c[j] = integer(1);
            corr = corr + (integer(2).inverse()) * (xj * df);
            long before = A.degree();
            A = A - lam * corr;
            if (A.degree() >= before) A.c.resize(before), A.trim();
            PPoly hpoly;
            hpoly.c.assign(j + 1, Padic::exact_zero(pol.prime));
            hpoly.c[j] = lam;
            hout.push_back({hpoly, +1});
        }
        return A;
    }
};

inline long division_budget(long p, long g, long kmax) {
    long smax = p * (2 * kmax + 1);
    long budget = 0;
    for (long s = 5; s <= smax; s += 2) {
        long m = s - 2, v = 0;
        while (m % p == 0) m /= p, ++v;
        budget += v;
    }
    long maxdeg = p * (2 * g + 1) + kmax * (p * (2 * g + 2)) + p;
    for (long j = 0; j <= maxdeg - (2 * g + 1); ++j) {
        long m = j + g + 1, v = 0;
        while (m % p == 0) m /= p, ++v;
        budget += v;
    }
    return budget;
}

inline long binomial_tail_loss(long p, long k) {
    // reduction of a term divisible by p^k stays divisible by p^(k - delta)
    return 2 * floor_log(p * (2 * k + 3), p) + 2;
}

}  // namespace detail

// choose the binomial truncation so that omitted terms stay below p^target
inline long frobenius_kmax(long p, long target) {
    long k = target;
    while (k + 1 - detail::binomial_tail_loss(p, k) < target) ++k;
    return k;
}

// Frobenius matrix on the basis x^i dx/y, i = 0..2g, by Kedlaya-style
// reduction of sigma(omega_i) = p x^{p(i+1)-1} (1+E)^{-1/2} y^{-p} dx,
// together with the exact parts needed for Coleman integration.
inline CohomologyData compute_cohomology(const CurveModel& m, long embedding_index,
                                         const PrecisionPolicy& target, long k_extra = 0) {
    long p = target.prime, g = m.genus;
    long kmax = frobenius_kmax(p, target.digits) + k_extra;
    long guard = detail::division_budget(p, g, kmax) + kmax + 4;
    PrecisionPolicy internal(p, target.digits + guard);

    CohomologyData out;
    auto embs = embeddings(m, internal);
    if (embedding_index < 0 || embedding_index >= static_cast<long>(embs.size()))
        throw InputError("compute_cohomology: no such embedding");
    out.curve = embs[embedding_index];
    out.internal_digits = internal.digits;
    out.kmax = kmax;
    out.tail_cap = kmax + 1 - detail::binomial_tail_loss(p, kmax);

    const PadicCurve& C = out.curve;
    detail::Reducer red(C);

    // E numerator: f(x^p) - f(x)^p  (all coefficients divisible by p)
    PPoly fxp;  // f(x^p)
    fxp.c.assign(p * C.degree() + 1, Padic::exact_zero(p));
    for (long i = 0; i <= C.degree(); ++i) fxp.c[i * p] = C.f.coeff(i);
    fxp.trim();
    PPoly fpow = C.f;  // f(x)^p by repeated multiplication
    for (long e = 1; e < p; ++e) fpow = fpow * C.f;
    PPoly E = fxp - fpow;

    // binomial coefficients binom(-1/2, k) as exact rationals
    std::vector<Padic> binom(kmax + 1);
    {
        Rat acc(1);
        for (long k = 0; k <= kmax; ++k) {
            if (k > 0) acc *= Rat(-(2 * (k - 1) + 1), 2 * k);
            binom[k] = Padic::from_rational(acc, internal);
        }
    }

    std::vector<PPoly> Epow(kmax + 1);
    Epow[0] = PPoly(std::vector<Padic>{Padic::from_integer(1, internal)});
    for (long k = 1; k <= kmax; ++k) Epow[k] = Epow[k - 1] * E;

    long n = 2 * g + 1;
    out.phi = PMat(n, n);
    out.h.assign(n, {});
    Padic pfac = Padic::from_integer(p, internal);
    for (long i = 0; i < n; ++i) {
        // process levels s = p(2k+1) from the top, accumulating while reducing
        PPoly acc;
        std::vector<HTerm>& hout = out.h[i];
        for (long k = kmax; k >= 0; --k) {
            PPoly xpow;
            xpow.c.assign(p * (i + 1) - 1 + 1, Padic::exact_zero(p));
            xpow.c[p * (i + 1) - 1] = pfac * binom[k];
            acc = acc + xpow * Epow[k];
            long s_here = p * (2 * k + 1);
            long s_next = k > 0 ? p * (2 * k - 1) : 1;
            acc = red.reduce_pole(std::move(acc), s_here, s_next, hout);
        }
        acc = red.reduce_degree(std::move(acc), hout);
        for (long r = 0; r < n; ++r) out.phi(r, i) = acc.coeff(r);
    }

    // residues at infinity: 1/S(t) with S = sqrt of the reversed polynomial
    {
        long M = 2 * g + 4;
        std::vector<Padic> rev(C.f.c.rbegin(), C.f.c.rend());
        PadicSeries fr(p, 1);
        fr.c = std::move(rev);
        if (fr.order() > M) fr.c.resize(M);
        fr.coeff_floor = 0;
        fr.tail_val = PadicSeries::PLUS_INF;
        PadicSeries S = series_sqrt(fr, Padic::from_integer(1, internal), M);
        PadicSeries Sinv = series_inverse(S, M);
        out.s_inv = Sinv.c;
        out.res_plus.assign(n, Padic::exact_zero(p));
        for (long i = 0; i < n; ++i)
            if (i >= g) out.res_plus[i] = -Sinv.coeff(i - g);
    }

    // restriction to H^1_dR on the basis B_m = omega_bidx - c_{bidx-g} omega_g
    {
        PMat T(n, 2 * g);  // B-basis vectors in e-coordinates
        for (long mcol = 0; mcol < 2 * g; ++mcol) {
            long i = out.bidx(mcol);
            for (long r = 0; r < n; ++r) T(r, mcol) = Padic::exact_zero(p);
            T(i, mcol) = Padic::from_integer(1, internal);
            if (i > g) T(g, mcol) = -out.s_inv[i - g];
        }
        PMat image = out.phi * T;  // columns: Phi(B_m) in e-coords
        out.phi_dr = PMat(2 * g, 2 * g);
        for (long mcol = 0; mcol < 2 * g; ++mcol) {
            // residue-free: B-coordinates are just the non-g entries
            for (long r = 0; r < 2 * g; ++r) out.phi_dr(r, mcol) = image(out.bidx(r), mcol);
            // consistency: e_g entry must match the residue bookkeeping
            Padic expect = Padic::exact_zero(p);
            for (long r = 0; r < 2 * g; ++r)
                if (out.bidx(r) > g)
                    expect = expect - out.s_inv[out.bidx(r) - g] * out.phi_dr(r, mcol);
            Padic diff = image(g, mcol) - expect;
            if (!diff.is_zero() && diff.valuation() < target.digits / 2)
                throw PrecisionError("compute_cohomology: residue bookkeeping mismatch");
        }
        out.charpoly = padic_charpoly(out.phi_dr, internal);
    }
    return out;
}

// canonical unit-root complement: iterate Frobenius on the non-holomorphic
// block until stable; requires good ordinary reduction
inline void unit_root_subspace(CohomologyData& data, const PrecisionPolicy& target) {
    long g = data.curve.genus, p = data.curve.p;
    // ordinarity: the coefficient of T^g in charpoly is a unit
    const Padic& midcoef = data.charpoly[g];
    if (midcoef.is_zero() || midcoef.valuation() != 0)
        throw HypothesisError(
            "unit_root_subspace: reduction is not ordinary at p; pick another prime");
    PMat Wm(2 * g, g);
    for (long j = 0; j < g; ++j)
        for (long i = 0; i < 2 * g; ++i)
            Wm(i, j) = (i == g + j) ? Padic::from_integer(1, PrecisionPolicy(p, data.internal_digits))
                                    : Padic::exact_zero(p);
    long iters = target.digits + 6;
    for (long it = 0; it < iters; ++it) {
        Wm = data.phi_dr * Wm;
        // column normalization: divide each column by p^min valuation
        for (long j = 0; j < g; ++j) {
            long mv = (1L << 40);
            for (long i = 0; i < 2 * g; ++i)
                if (!Wm(i, j).is_zero()) mv = std::min(mv, Wm(i, j).valuation());
            if (mv == (1L << 40)) throw PrecisionError("unit_root_subspace: column vanished");
            for (long i = 0; i < 2 * g; ++i)
                if (!Wm(i, j).is_exact_zero()) Wm(i, j) = Wm(i, j).shift(-mv);
        }
    }
    data.W = Wm;
    // complementarity: [holomorphic basis | W] has unit determinant valuation
    PMat Mfull(2 * g, 2 * g);
    for (long i = 0; i < 2 * g; ++i) {
        for (long j = 0; j < g; ++j)
            Mfull(i, j) = (i == j) ? Padic::from_integer(1, PrecisionPolicy(p, data.internal_digits))
                                   : Padic::exact_zero(p);
        for (long j = 0; j < g; ++j) Mfull(i, g + j) = Wm(i, j);
    }
    Padic det = padic_det(Mfull);
    if (det.is_zero())
        throw HypothesisError("unit_root_subspace: W_p not complementary to holomorphic forms");
}

// The projection constants of the third-kind class: omega_g is projected to
// H^1_dR along the Frobenius eigenline of eigenvalue p (the canonical stable
// complement of H^1_dR in the full odd cohomology), and u_0..u_{g-1} are the
// holomorphic coordinates of that class in the H^0(Omega^1) + W_p
// decomposition. These depend only on the curve at p, W_p and Frobenius.
// The height normalization itself (the u of the displayed local height
// formula) is u_eff = 2 u - s, assembled where the span coordinates s of
// int omega_g are available; rho and the solved point sets are independent
// of that shift since alpha + u_eff = s.
inline void normalization_constants(CohomologyData& data) {
    long g = data.curve.genus, p = data.curve.p, n = 2 * g + 1;
    PrecisionPolicy internal(p, data.internal_digits);
    // eigenvector of phi for eigenvalue p
    PMat A(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            A(i, j) = data.phi(i, j);
            if (i == j) A(i, j) = A(i, j) - Padic::from_integer(p, internal);
        }
    auto ker = padic_kernel(A, std::max(2L, data.tail_cap));
    if (ker.size() != 1)
        throw PrecisionError("normalization_constants: eigenvalue-p line not isolated");
    std::vector<Padic>& v = ker[0];
    Padic piv = Padic::exact_zero(p);
    for (long i = 0; i < n; ++i) piv = piv + data.res_plus[i] * v[i];
    if (piv.is_zero())
        throw PrecisionError("normalization_constants: eigenline has zero residue");
    Padic scale = piv.inverse();
    // psi = e_g - pi(e_g) v / pi(v), pi = residue at infinity_plus
    std::vector<Padic> psi(n, Padic::exact_zero(p));
    psi[g] = Padic::from_integer(1, internal);
    Padic pi_eg = data.res_plus[g];
    for (long i = 0; i < n; ++i) psi[i] = psi[i] - pi_eg * scale * v[i];
    data.psi_third_kind.assign(2 * g, Padic::exact_zero(p));
    for (long mcol = 0; mcol < 2 * g; ++mcol) data.psi_third_kind[mcol] = psi[data.bidx(mcol)];
    // solve [holomorphic | W] (u; c) = psi
    PMat M(2 * g, 2 * g), rhs(2 * g, 1);
    for (long i = 0; i < 2 * g; ++i) {
        for (long j = 0; j < g; ++j)
            M(i, j) = (i == j) ? Padic::from_integer(1, internal) : Padic::exact_zero(p);
        for (long j = 0; j < g; ++j) M(i, g + j) = data.W(i, j);
        rhs(i, 0) = data.psi_third_kind[i];
    }
    PMat sol = padic_solve(M, rhs);
    data.u.assign(g, Padic::exact_zero(p));
    for (long j = 0; j < g; ++j) data.u[j] = sol(j, 0);
}

namespace detail {

// Laurent expansions at infinity_plus, exponents offset so that entry k of a
// stored vector is the coefficient of t^{k - off}
struct InfinityExpansions {
    long g, p, off, M;
    PadicSeries Sinv;
    const CohomologyData& data;

    explicit InfinityExpansions(const CohomologyData& d)
        : g(d.curve.genus), p(d.curve.p), off(d.curve.genus + 1), M(4 * d.curve.genus + 8),
          data(d) {
        PrecisionPolicy internal(p, d.internal_digits);
        std::vector<Padic> rev(d.curve.f.c.rbegin(), d.curve.f.c.rend());
        PadicSeries fr(p, 1);
        fr.c = std::move(rev);
        if (fr.order() > M) fr.c.resize(M);
        fr.coeff_floor = 0;
        fr.tail_val = PadicSeries::PLUS_INF;
        PadicSeries S = series_sqrt(fr, Padic::from_integer(1, internal), M);
        Sinv = series_inverse(S, M);
    }

    // expansion of B_i = omega_i - c_{i-g} omega_g: L_i(t) dt with
    // L_i = (-t^{g-1-i} + c_{i-g} t^{-1}) / S(t)
    std::vector<Padic> laurent(long i) const {
        std::vector<Padic> L(M + off, Padic::exact_zero(p));
        for (long mdx = 0; mdx < Sinv.order(); ++mdx) {
            long e = g - 1 - i + mdx;
            if (e + off >= 0 && e + off < static_cast<long>(L.size()))
                L[e + off] = L[e + off] - Sinv.coeff(mdx);
        }
        if (i > g) {
            Padic ci = data.s_inv[i - g];
            for (long mdx = 0; mdx < Sinv.order(); ++mdx) {
                long e = -1 + mdx;
                if (e + off >= 0 && e + off < static_cast<long>(L.size()))
                    L[e + off] = L[e + off] + ci * Sinv.coeff(mdx);
            }
        }
        return L;
    }

    // termwise primitive, dropping any t^{-1} term (its log contributes
    // nothing to residues against residue-free forms)
    std::vector<Padic> primitive(const std::vector<Padic>& L) const {
        PrecisionPolicy internal(p, data.internal_digits);
        std::vector<Padic> F(L.size() + 1, Padic::exact_zero(p));
        for (long k = 0; k < static_cast<long>(L.size()); ++k) {
            long e = k - off;
            if (e == -1) continue;
            F[k + 1] = L[k] / Padic::from_integer(e + 1, internal);
        }
        return F;
    }

    Padic residue_product(const std::vector<Padic>& F, const std::vector<Padic>& L) const {
        Padic acc = Padic::exact_zero(p);
        for (long k = 0; k < static_cast<long>(F.size()); ++k) {
            long e1 = k - off;
            long idx = (-1 - e1) + off;
            if (idx < 0 || idx >= static_cast<long>(L.size())) continue;
            acc = acc + F[k] * L[idx];
        }
        return acc;
    }
};

}  // namespace detail

// cup-product Gram matrix on the B-basis by residues at the two points at
// infinity; the isotropy witness for W_p (h_p symmetric iff W_p isotropic)
inline PMat cup_product_matrix(const CohomologyData& data) {
    long g = data.curve.genus;
    long n = 2 * g;
    detail::InfinityExpansions inf(data);
    std::vector<std::vector<Padic>> Ls(n);
    for (long mcol = 0; mcol < n; ++mcol) Ls[mcol] = inf.laurent(data.bidx(mcol));
    PMat C(n, n);
    for (long a = 0; a < n; ++a) {
        auto F = inf.primitive(Ls[a]);
        for (long b = 0; b < n; ++b) {
            Padic acc = inf.residue_product(F, Ls[b]);
            // both infinite points contribute equally
            C(a, b) = acc + acc;
        }
    }
    return C;
}


}  // namespace evenqc
