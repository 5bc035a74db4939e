#pragma once

#include <vector>

#include "evenqc/linalg.hpp"
#include "evenqc/roots.hpp"
#include "evenqc/series.hpp"

namespace evenqc {

// System of d power series equations in d separated variables on (pZ_p)^d:
//   F_k(z_1,...,z_d) = a_k + F_{k,1}(z_1) + ... + F_{k,d}(z_d) = 0,
// with F_{k,j}(0) = 0.
struct SeparatedSystem {
    long p = 0;
    long d = 0;
    std::vector<Padic> constants;                  // a_k
    std::vector<std::vector<PadicSeries>> blocks;  // blocks[k][j], dom_val = 1

    void validate() const {
        if (d < 1) throw InputError("SeparatedSystem: d >= 1 required");
        if (static_cast<long>(constants.size()) != d ||
            static_cast<long>(blocks.size()) != d)
            throw InputError("SeparatedSystem: square system expected");
        for (auto& row : blocks) {
            if (static_cast<long>(row.size()) != d)
                throw InputError("SeparatedSystem: block row of wrong length");
            for (auto& b : row)
                if (b.order() > 0 && !b.c[0].is_zero())
                    throw InputError("SeparatedSystem: block with nonzero constant term");
        }
    }
};

struct SepRoot {
    std::vector<Padic> z;  // in the original pZ_p variables
    bool certified;
    bool unique_in_polydisc;
};

struct SepBox {
    std::vector<mpz_class> center;  // scaled variables, residue box center + p^depth Z_p^d
    long depth;
};

struct SepReport {
    std::vector<SepRoot> roots;
    std::vector<SepBox> unresolved;
    bool used_subdivision = false;  // fallback path was taken ("heuristic precision")
    bool det_criterion = false;     // det M not= 0 mod p certificate held at top level
    bool fully_resolved() const { return unresolved.empty(); }
};

namespace detail {

struct SepCtx {
    long p;
    long rel;
    long max_depth;
    SepReport* rep;
};

struct BoxSystem {
    // row k: constant + per-variable polynomial (index j), scaled variables in Z_p
    std::vector<Padic> consts;
    std::vector<std::vector<std::vector<Padic>>> poly;  // poly[k][j] coefficient vectors
    std::vector<long> tail;                             // per-row truncation bound
};

inline long row_nonconst_min(const BoxSystem& S, long k, long d) {
    long m = PadicSeries::PLUS_INF;
    for (long j = 0; j < d; ++j)
        for (size_t i = 1; i < S.poly[k][j].size(); ++i)
            m = std::min(m, S.poly[k][j][i].valuation_bound());
    return m;
}

inline Padic eval_row(const BoxSystem& S, long k, const std::vector<Padic>& w, long p) {
    Padic acc = S.consts[k];
    for (size_t j = 0; j < w.size(); ++j) {
        Padic v = poly_eval(S.poly[k][j], w[j], p);
        acc = acc + v;
    }
    return acc;
}

inline void solve_box(BoxSystem S, long depth, std::vector<mpz_class> center, SepCtx& ctx);

// multivariate Newton from an F_p solution; Jacobian invertible mod p
inline bool newton_refine(const BoxSystem& S, const std::vector<long>& r0, long p, long rel,
                          std::vector<Padic>& out) {
    long d = static_cast<long>(r0.size());
    std::vector<Padic> w(d);
    for (long j = 0; j < d; ++j) w[j] = Padic::from_integer(r0[j], PrecisionPolicy(p, rel));
    for (int it = 0; it < 200; ++it) {
        PMat G(d, 1), J(d, d);
        bool all_zero = true;
        for (long k = 0; k < d; ++k) {
            G(k, 0) = eval_row(S, k, w, p);
            if (!G(k, 0).is_zero()) all_zero = false;
            for (long j = 0; j < d; ++j) {
                auto der = poly_derivative(S.poly[k][j], p, rel);
                J(k, j) = poly_eval(der, w[j], p);
            }
        }
        if (all_zero) {
            out = w;
            return true;
        }
        PMat delta = padic_solve(J, G);
        for (long j = 0; j < d; ++j) w[j] = w[j] - delta(j, 0);
    }
    return false;
}

// Gauss row elimination on the linear coefficients with valuation pivoting.
// Row operations keep the system separated and let rows of different p-scale
// be normalized independently afterwards.
inline void eliminate_rows(BoxSystem& S, long p) {
    long d = static_cast<long>(S.consts.size());
    std::vector<bool> used(d, false);
    for (long step = 0; step < d; ++step) {
        long bk = -1, bj = -1, best = PadicSeries::PLUS_INF;
        for (long k = 0; k < d; ++k) {
            if (used[k]) continue;
            for (long j = 0; j < d; ++j) {
                if (S.poly[k][j].size() < 2) continue;
                const Padic& lin = S.poly[k][j][1];
                if (lin.is_zero()) continue;
                if (lin.valuation() < best) {
                    best = lin.valuation();
                    bk = k;
                    bj = j;
                }
            }
        }
        if (bk < 0) return;
        used[bk] = true;
        Padic pivot = S.poly[bk][bj][1];
        for (long k = 0; k < d; ++k) {
            if (k == bk || used[k]) continue;
            if (S.poly[k][bj].size() < 2 || S.poly[k][bj][1].is_zero()) continue;
            Padic factor = S.poly[k][bj][1] / pivot;  // valuation >= 0 by pivot choice
            S.consts[k] = S.consts[k] - factor * S.consts[bk];
            for (long j = 0; j < d; ++j) {
                size_t n = std::max(S.poly[k][j].size(), S.poly[bk][j].size());
                S.poly[k][j].resize(n, Padic::exact_zero(p));
                for (size_t i = 0; i < S.poly[bk][j].size(); ++i)
                    S.poly[k][j][i] = S.poly[k][j][i] - factor * S.poly[bk][j][i];
            }
            S.tail[k] = std::min(S.tail[k], factor.valuation_bound() + S.tail[bk]);
        }
    }
}

inline void solve_box(BoxSystem S, long depth, std::vector<mpz_class> center, SepCtx& ctx) {
    long p = ctx.p, d = static_cast<long>(S.consts.size());

    eliminate_rows(S, p);

    // prune: a row whose constant dominates every variable term has no zero
    std::vector<long> mu(d);
    for (long k = 0; k < d; ++k) {
        long vnc = row_nonconst_min(S, k, d);
        long va = S.consts[k].valuation_bound();
        if (!S.consts[k].is_zero() && S.consts[k].valuation() < vnc) return;
        mu[k] = std::min(va, vnc);
        if (mu[k] >= PadicSeries::PLUS_INF) mu[k] = 0;
    }
    // normalize rows
    for (long k = 0; k < d; ++k) {
        if (mu[k] == 0) continue;
        if (S.consts[k].is_exact_zero()) {
        } else {
            S.consts[k] = S.consts[k].shift(-mu[k]);
        }
        for (long j = 0; j < d; ++j)
            for (auto& cf : S.poly[k][j])
                if (!cf.is_exact_zero()) cf = cf.shift(-mu[k]);
        S.tail[k] -= mu[k];
    }
    // precision / tail sanity: need everything mod p at least
    for (long k = 0; k < d; ++k) {
        if (S.tail[k] < 1) {
            ctx.rep->unresolved.push_back({center, depth});
            return;
        }
        if (!S.consts[k].is_exact_zero() && S.consts[k].abs_precision() < 1) {
            ctx.rep->unresolved.push_back({center, depth});
            return;
        }
        for (long j = 0; j < d; ++j)
            for (auto& cf : S.poly[k][j])
                if (!cf.is_exact_zero() && cf.abs_precision() < 1) {
                    ctx.rep->unresolved.push_back({center, depth});
                    return;
                }
    }

    // Hensel certificate: linear coefficients unit-determinant mod p and all
    // higher coefficients in p Z_p  ==>  unique zero in this box
    bool hensel_ok = true;
    PMat M(d, d);
    for (long k = 0; k < d && hensel_ok; ++k)
        for (long j = 0; j < d; ++j) {
            std::vector<Padic>& pk = S.poly[k][j];
            M(k, j) = pk.size() > 1 ? pk[1] : Padic::exact_zero(p);
            for (size_t i = 2; i < pk.size(); ++i)
                if (pk[i].valuation_bound() < 1) {
                    hensel_ok = false;
                    break;
                }
        }
    if (hensel_ok) {
        Padic det = padic_det(M);
        if (!det.is_zero() && det.valuation() == 0) {
            if (depth == 0) ctx.rep->det_criterion = true;
            // unique residue of the affine-linear reduction mod p (d is tiny,
            // scan residues)
            std::vector<long> r0(d, 0);
            bool found = false;
            std::vector<long> idx(d, 0);
            while (true) {
                std::vector<Padic> w(d);
                bool ok = true;
                for (long k = 0; k < d && ok; ++k) {
                    long acc = 0;
                    for (long j = 0; j < d; ++j)
                        acc += (M(k, j).is_zero() ? 0 : M(k, j).residue(1).get_si()) * idx[j];
                    long cst = S.consts[k].is_zero() ? 0 : S.consts[k].residue(1).get_si();
                    if ((acc + cst) % p != 0) ok = false;
                }
                if (ok) {
                    r0 = idx;
                    found = true;
                    break;
                }
                long j = 0;
                while (j < d && ++idx[j] == p) idx[j++] = 0;
                if (j == d) break;
            }
            if (found) {
                std::vector<Padic> w;
                if (newton_refine(S, r0, p, ctx.rel, w)) {
                    SepRoot root;
                    root.certified = true;
                    root.unique_in_polydisc = (depth == 0);
                    for (long j = 0; j < d; ++j) {
                        Padic wj =
                            Padic::from_integer(center[j], PrecisionPolicy(p, ctx.rel + depth + 2)) +
                            w[j].with_absprec_capped(*std::min_element(S.tail.begin(), S.tail.end()))
                                .shift(depth);
                        root.z.push_back(wj.shift(1));
                    }
                    ctx.rep->roots.push_back(std::move(root));
                    return;  // unique in box
                }
            } else {
                return;  // linear system unsolvable mod p: no zero in the box
            }
        }
    }

    // fallback: subdivide each coordinate into p residue classes
    if (depth >= ctx.max_depth) {
        ctx.rep->unresolved.push_back({center, depth});
        return;
    }
    ctx.rep->used_subdivision = true;
    std::vector<long> idx(d, 0);
    while (true) {
        // residue test
        bool ok = true;
        for (long k = 0; k < d && ok; ++k) {
            long acc = S.consts[k].is_zero() ? 0 : S.consts[k].residue(1).get_si();
            for (long j = 0; j < d; ++j) {
                long v = 0;
                for (size_t i = S.poly[k][j].size(); i-- > 0;)
                    v = (v * idx[j] +
                         (S.poly[k][j][i].is_zero() ? 0 : S.poly[k][j][i].residue(1).get_si())) %
                        p;
                acc = (acc + v) % p;
            }
            if (acc % p != 0) ok = false;
        }
        if (ok) {
            BoxSystem S2;
            S2.consts.resize(d);
            S2.poly.assign(d, {});
            S2.tail = S.tail;
            std::vector<mpz_class> center2(d);
            for (long j = 0; j < d; ++j) center2[j] = center[j] + mpz_class(idx[j]) * pow_p(p, depth);
            for (long k = 0; k < d; ++k) {
                Padic cst = S.consts[k];
                S2.poly[k].resize(d);
                for (long j = 0; j < d; ++j) {
                    auto shifted = shift_scale(S.poly[k][j], idx[j], p, ctx.rel);
                    if (!shifted.empty()) {
                        cst = cst + shifted[0];
                        shifted[0] = Padic::exact_zero(p);
                    }
                    S2.poly[k][j] = std::move(shifted);
                }
                S2.consts[k] = cst;
            }
            solve_box(std::move(S2), depth + 1, center2, ctx);
        }
        long j = 0;
        while (j < d && ++idx[j] == p) idx[j++] = 0;
        if (j == d) break;
    }
}

}  // namespace detail

// All common zeros in (pZ_p)^d. When the linear-coefficient matrix is
// invertible mod p the unique zero is certified; otherwise the polydisc is
// subdivided recursively, and boxes that cannot be resolved at the working
// precision are reported explicitly.
inline SepReport solve_separated(const SeparatedSystem& sys, long max_depth = 6) {
    sys.validate();
    SepReport rep;
    if (sys.d == 1) {
        // consistency with the single-variable solver
        PadicSeries F = sys.blocks[0][0];
        PadicSeries cst(sys.p, 1);
        cst.c = {sys.constants[0]};
        cst.coeff_floor = sys.constants[0].valuation_bound();
        cst.tail_val = PadicSeries::PLUS_INF;
        RootReport r1 = solve_single(cst + F);
        for (auto& r : r1.roots) rep.roots.push_back({{r.z}, r.certified, false});
        for (auto& b : r1.boxes) rep.unresolved.push_back({{b.center}, b.depth});
        return rep;
    }
    long rel = 1;
    detail::BoxSystem S;
    S.consts = sys.constants;
    S.poly.assign(sys.d, {});
    S.tail.assign(sys.d, PadicSeries::PLUS_INF);
    for (long k = 0; k < sys.d; ++k) {
        S.poly[k].resize(sys.d);
        for (long j = 0; j < sys.d; ++j) {
            PadicSeries G = sys.blocks[k][j].rescale_p();
            for (auto& x : G.c)
                if (!x.is_zero()) rel = std::max(rel, x.rel_precision());
            S.poly[k][j] = G.c;
            S.tail[k] = std::min(S.tail[k], G.tail_val);
        }
        if (!sys.constants[k].is_zero()) rel = std::max(rel, sys.constants[k].rel_precision());
    }
    detail::SepCtx ctx{sys.p, rel, max_depth, &rep};
    detail::solve_box(std::move(S), 0, std::vector<mpz_class>(sys.d, 0), ctx);
    return rep;
}

}  // namespace evenqc
