#pragma once

#include <algorithm>
#include <vector>

#include "evenqc/series.hpp"

namespace evenqc {

struct SeriesRoot {
    Padic z;         // in the original pZ_p variable
    bool certified;  // simple-root Hensel certificate
};

struct UncertifiedBox {
    mpz_class center;  // residue class center + p^depth Z_p, in the scaled variable
    long depth;
};

struct RootReport {
    long strassmann = -1;
    std::vector<SeriesRoot> roots;
    std::vector<UncertifiedBox> boxes;
    bool fully_resolved() const { return boxes.empty(); }
    long certified_count() const {
        long n = 0;
        for (auto& r : roots) n += r.certified;
        return n;
    }
};

namespace detail {

// minimal valuation among coefficients with a known nonzero value; -1 if none
inline bool min_known_val(const std::vector<Padic>& c, long& out) {
    bool found = false;
    for (auto& x : c)
        if (!x.is_zero()) {
            long v = x.valuation();
            if (!found || v < out) out = v;
            found = true;
        }
    return found;
}

inline Padic poly_eval(const std::vector<Padic>& c, const Padic& w, long p) {
    Padic r = Padic::exact_zero(p);
    for (size_t j = c.size(); j-- > 0;) r = r * w + c[j];
    return r;
}

inline std::vector<Padic> poly_derivative(const std::vector<Padic>& c, long p, long rel) {
    std::vector<Padic> d;
    for (size_t j = 1; j < c.size(); ++j)
        d.push_back(c[j] * Padic::from_integer(static_cast<long>(j), PrecisionPolicy(p, rel)));
    if (d.empty()) d.push_back(Padic::exact_zero(p));
    return d;
}

// Taylor shift then rescale: H(w') = G(r + p w') via an in-place Horner shift
inline std::vector<Padic> shift_scale(const std::vector<Padic>& g, const mpz_class& r,
                                      long p, long rel) {
    std::vector<Padic> c = g;
    size_t n = c.size();
    Padic rr = Padic::from_integer(r, PrecisionPolicy(p, rel + 2));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = n - 1; j > i; --j) c[j - 1] = c[j - 1] + rr * c[j];
    std::vector<Padic> out(n);
    for (size_t j = 0; j < n; ++j) out[j] = c[j].shift(static_cast<long>(j));
    return out;
}

}  // namespace detail

// The Strassmann zero-count bound for a series on pZ_p (spec: examine the
// coefficients of G(w) = F(p w) on Z_p): largest index attaining the minimal
// coefficient valuation, verified against the precision and tail data.
inline long strassmann_bound(const PadicSeries& F) {
    PadicSeries G = (F.dom_val == 1) ? F.rescale_p() : F;
    long minval;
    if (!detail::min_known_val(G.c, minval))
        throw PrecisionError("strassmann_bound: all coefficients are precision-zero");
    long idx = -1;
    for (long j = 0; j < G.order(); ++j)
        if (!G.c[j].is_zero() && G.c[j].valuation() == minval) idx = j;
    for (long j = idx + 1; j < G.order(); ++j)
        if (G.c[j].valuation_bound() <= minval)
            throw PrecisionError(
                "strassmann_bound: a later coefficient is not known beyond the minimal "
                "valuation");
    if (G.tail_val <= minval)
        throw PrecisionError("strassmann_bound: truncation tail not below the minimal "
                             "valuation");
    return idx;
}

namespace detail {

struct UnitSolveCtx {
    long p;
    long rel;
    long max_depth;
    RootReport* report;
};

// find all w in Z_p with H(w) = 0; the box is center + p^depth Z_p of the
// top-level variable, tail_adj bounds the truncation error of H
inline void solve_unit_disc(std::vector<Padic> H, long depth, mpz_class center,
                            long tail_adj, UnitSolveCtx& ctx) {
    long p = ctx.p;
    long m;
    if (!min_known_val(H, m)) {
        ctx.report->boxes.push_back({center, depth});
        return;
    }
    if (tail_adj <= m) {
        ctx.report->boxes.push_back({center, depth});
        return;
    }
    // normalize so that the minimal valuation is 0
    for (auto& x : H) {
        if (x.is_exact_zero()) continue;
        x = x.shift(-m);
        if (x.abs_precision() < 1) {
            // cannot even reduce mod p
            ctx.report->boxes.push_back({center, depth});
            return;
        }
    }
    tail_adj -= m;
    // reduction mod p
    std::vector<long> hbar;
    for (auto& x : H) hbar.push_back(x.is_zero() ? 0 : mpz_class(x.residue(1)).get_si());
    while (!hbar.empty() && hbar.back() == 0) hbar.pop_back();
    if (hbar.empty()) {
        ctx.report->boxes.push_back({center, depth});
        return;
    }
    auto evalbar = [&](long r) {
        long v = 0;
        for (size_t j = hbar.size(); j-- > 0;) v = (v * r + hbar[j]) % p;
        return v;
    };
    std::vector<long> dbar;
    for (size_t j = 1; j < hbar.size(); ++j) dbar.push_back(static_cast<long>(j) * hbar[j] % p);
    auto evaldbar = [&](long r) {
        long v = 0;
        for (size_t j = dbar.size(); j-- > 0;) v = (v * r + dbar[j]) % p;
        return v;
    };
    for (long r = 0; r < p; ++r) {
        if (evalbar(r) != 0) continue;
        if (evaldbar(r) != 0) {
            // simple root: Hensel-certified Newton refinement
            Padic w = Padic::from_integer(r, PrecisionPolicy(p, ctx.rel));
            auto dH = poly_derivative(H, p, ctx.rel);
            for (int it = 0; it < 200; ++it) {
                Padic num = poly_eval(H, w, p);
                if (num.is_zero()) break;
                Padic den = poly_eval(dH, w, p);
                Padic delta = num / den;
                w = w - delta;
            }
            // back to the top-level scaled variable, precision capped by the
            // truncation tail
            Padic w_full = Padic::from_integer(center, PrecisionPolicy(p, ctx.rel + depth + 2)) +
                           w.with_absprec_capped(tail_adj).shift(depth);
            // the original pZ_p variable is z = p * w
            ctx.report->roots.push_back({w_full.shift(1), true});
        } else {
            if (depth >= ctx.max_depth) {
                ctx.report->boxes.push_back({center + mpz_class(r) * pow_p(p, depth), depth});
                continue;
            }
            auto H2 = shift_scale(H, r, p, ctx.rel);
            solve_unit_disc(std::move(H2), depth + 1, center + mpz_class(r) * pow_p(p, depth),
                            tail_adj, ctx);
        }
    }
}

}  // namespace detail

// All zeros of F on pZ_p (F given on the pZ_p domain). Simple roots are
// Hensel-certified; clusters that cannot be separated at the working
// precision are reported as uncertified boxes, never dropped.
inline RootReport solve_single(const PadicSeries& F, long max_depth = 64) {
    RootReport rep;
    rep.strassmann = strassmann_bound(F);
    PadicSeries G = (F.dom_val == 1) ? F.rescale_p() : F;
    long rel = 1;
    for (auto& x : G.c)
        if (!x.is_zero()) rel = std::max(rel, x.rel_precision());
    detail::UnitSolveCtx ctx{F.p, rel, max_depth, &rep};
    detail::solve_unit_disc(G.c, 0, 0, G.tail_val, ctx);
    std::sort(rep.roots.begin(), rep.roots.end(), [](const SeriesRoot& a, const SeriesRoot& b) {
        long va = a.z.valuation_bound(), vb = b.z.valuation_bound();
        if (va != vb) return va < vb;
        if (a.z.is_zero() || b.z.is_zero()) return !a.z.is_zero();
        return a.z.residue(std::min(a.z.abs_precision(), 8L)) <
               b.z.residue(std::min(b.z.abs_precision(), 8L));
    });
    return rep;
}

}  // namespace evenqc
