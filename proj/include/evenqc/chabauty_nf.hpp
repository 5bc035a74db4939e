#pragma once

#include <array>
#include <deque>
#include <memory>

#include "evenqc/chabauty.hpp"
#include "evenqc/separated.hpp"

namespace evenqc {

// degree-zero divisor class over K: K-rational support applying to every
// embedding, plus optional per-embedding local points (x-lift and y-residue)
struct LocalSupport {
    long embedding = 0;
    mpz_class x_lift;
    long ybar = 1;
    long mult = 1;
};

struct GeneratorNF {
    std::string id;
    std::vector<std::pair<OKPoint, long>> k_points;
    std::vector<LocalSupport> local_points;
    std::vector<std::tuple<mpz_class, long, Rat>> away;  // (q, residue degree, l_q)
    bool relation_only = false;  // used for the integral relations, not the height solve

    std::vector<std::pair<CurvePoint, long>> support_on(long embedding,
                                                        const PadicCurve& c) const {
        std::vector<std::pair<CurvePoint, long>> out;
        for (auto& [P, m] : k_points) {
            Padic x = embed(P.x, c.w_image, c.pol);
            Padic y = P.y.is_zero() ? Padic::exact_zero(c.p) : embed(P.y, c.w_image, c.pol);
            out.emplace_back(CurvePoint::affine(x, y), m);
        }
        for (auto& lp : local_points) {
            if (lp.embedding != embedding) continue;
            long xb = mpz_class(lp.x_lift % c.p).get_si();
            if (xb < 0) xb += c.p;
            auto pts = lift_point(xb, c, lp.x_lift);
            bool placed = false;
            for (auto& P : pts) {
                long yb = P.y.is_zero() ? 0 : mpz_class(P.y.residue(1)).get_si();
                if (yb == lp.ybar) {
                    out.emplace_back(P, lp.mult);
                    placed = true;
                }
            }
            if (!placed)
                throw InputError("nf generator: no point with the requested y-residue above x = " +
                                 lp.x_lift.get_str());
        }
        long deg = 0;
        for (auto& [P, m] : out) deg += m;
        if (deg != 0) throw InputError("nf generator: nonzero degree on one embedding");
        return out;
    }
};

struct NFConfig {
    PrecisionPolicy target{3, 12};
    long truncation = 0;
    mpz_class search_bound = 10;
    long max_depth = 6;
    long M() const { return truncation > 0 ? truncation : 2 * target.digits; }
};

struct NFSystemContext {
    long d = 2, g = 0, r = 0;
    PMat ell;                               // dg x r, rows ordered (embedding i, form j)
    std::vector<std::vector<Padic>> beta;   // left-kernel basis, dim dg - r >= r_K
    std::vector<Padic> alpha;               // dg coefficients of the height functional
    std::vector<std::vector<Padic>> u_eff;  // per embedding
};

// left kernel of the ell matrix; Condition 4 = full column rank
inline std::vector<std::vector<Padic>> nf_relations(const PMat& ell, long claimed_rank,
                                                    long zero_threshold) {
    auto ker = padic_kernel(ell.transpose(), zero_threshold);
    auto right = padic_kernel(ell, zero_threshold);
    long rank = ell.cols - static_cast<long>(right.size());
    if (rank != claimed_rank)
        throw HypothesisError(
            "nf_relations: the Coleman functionals do not span (Condition 4 fails or "
            "generators are dependent): rank " +
            std::to_string(rank) + " of " + std::to_string(claimed_rank));
    return ker;
}

struct NFRootRecord {
    std::vector<Padic> z;  // per-embedding disc parameters
    std::vector<Padic> x;  // per-embedding x-coordinates
    long t_index;
    bool certified;
    bool unique_in_polydisc;
    bool known;  // sigma-image of a known O_K point
};

struct PolydiscReport {
    std::array<long, 2> xbar{}, ybar{};
    std::array<ResidueDisc::Kind, 2> kind{};
    std::vector<NFRootRecord> roots;
    long unresolved_boxes = 0;
    bool used_subdivision = false;
};

struct NFReport {
    std::vector<OKPoint> known_points;
    std::vector<PolydiscReport> polydiscs;
    std::vector<Padic> T;
    NFSystemContext sys;
    std::vector<std::string> warnings;
    bool complete = false;
    long digits = 0, truncation = 0;
    long extra_roots = 0, known_roots = 0, boxes = 0;
};

namespace detail {

inline CurvePoint embed_ok_point(const OKPoint& P, const PadicCurve& c) {
    PrecisionPolicy pol(c.p, c.pol.digits);
    Padic x = embed(P.x, c.w_image, pol);
    if (P.y.is_zero()) return CurvePoint::affine(x, Padic::exact_zero(c.p));
    return CurvePoint::affine(x, embed(P.y, c.w_image, pol));
}

}  // namespace detail

// The driver over a real quadratic field with p split: r_K = 1 relation
// function from the left kernel, one height function, separated systems per
// residue polydisc.
inline NFReport nf_find_candidates(const CurveModel& m, const NFConfig& cfg,
                                   std::vector<GeneratorNF> gens,
                                   const std::map<std::string, BadPrimeData>& bad_data,
                                   const std::vector<OKPoint>& extra_known = {}) {
    if (m.field.is_rational()) throw InputError("nf_find_candidates: curve is over Q");
    long d = 2, g = m.genus, p = m.p;
    NFReport rep;
    rep.digits = cfg.target.digits;
    rep.truncation = cfg.M();

    // degeneracy warning: a curve with rational coefficients has lambda = 0
    // on J(Q) and the method cannot separate rational points
    bool all_rational = true;
    for (auto& c : m.f.c)
        if (c.b != 0) all_rational = false;
    if (all_rational)
        rep.warnings.push_back(
            "curve is defined over Q inside the quadratic field: the height function "
            "vanishes on J(Q) and cannot cut out the rational integral points");

    rep.known_points = point_search_ok(m, cfg.search_bound);
    for (auto& P : extra_known) {
        bool dup = false;
        for (auto& Q : rep.known_points)
            if (Q.x == P.x && Q.y == P.y) dup = true;
        if (!dup) rep.known_points.push_back(P);
    }

    long r = static_cast<long>(gens.size());
    long r_K = 1;  // real quadratic: unit rank 1
    if (r > d * g - r_K)
        throw HypothesisError("nf_find_candidates: rank condition rk <= dg - r_K fails");

    // per-embedding cohomology
    std::deque<CohomologyData> coh;
    std::deque<ColemanIntegrator> ci;
    for (long i = 0; i < d; ++i) {
        coh.push_back(compute_cohomology(m, i, cfg.target));
        unit_root_subspace(coh.back(), cfg.target);
        normalization_constants(coh.back());
        ci.emplace_back(coh.back(), cfg.M());
    }

    // re-center discs at sigma-images of known points
    std::vector<std::vector<long>> known_disc(d);  // disc index per embedding per point
    for (long i = 0; i < d; ++i) {
        std::vector<bool> centered(ci[i].disc_count(), false);
        for (auto& P : rep.known_points) {
            CurvePoint Pp = detail::embed_ok_point(P, coh[i].curve);
            long di = ci[i].disc_index_of(Pp);
            known_disc[i].push_back(di);
            if (!centered[di] && ci[i].disc(di).kind == ResidueDisc::Kind::Affine) {
                ci[i].override_center(di, Pp);
                centered[di] = true;
            }
        }
    }

    // T for the height function: all primes dividing Norm(disc f)
    IdeleCharacter chi(IdeleCharacter::Kind::CyclotomicRealQuadraticSplit, cfg.target);
    {
        QuadRat disc = poly_discriminant(m.f);
        Rat nrm = disc.norm();
        auto bad = factor(nrm.get_num() * nrm.get_den());
        std::vector<std::tuple<mpz_class, long, std::vector<Rat>>> tq_all;
        for (auto& [q, e] : bad) {
            if (q == p) continue;
            mpz_class D(m.field.disc);
            std::optional<BadPrimeData> data;
            auto it = bad_data.find(q.get_str());
            if (it != bad_data.end()) data = it->second;
            if (D % q == 0) {
                // ramified: one prime, w -> 0, residue field F_q
                tq_all.emplace_back(q, 1, tq_set(m, data, q, mpz_class(0)));
            } else {
                auto rt = q == 2 ? std::optional<mpz_class>(D % 2)
                                 : sqrt_mod_p(D % q, q.get_si());
                if (rt) {
                    // split: two primes, w -> +-rt
                    tq_all.emplace_back(q, 1, tq_set(m, data, q, *rt));
                    tq_all.emplace_back(q, 1, tq_set(m, data, q, q - *rt));
                } else {
                    // inert: residue field F_{q^2}; criterion not implemented
                    if (!data)
                        throw InputError("nf: inert bad prime " + q.get_str() +
                                         " needs intersection data");
                    tq_all.emplace_back(q, 2, tq_set(m, data, q));
                }
            }
        }
        rep.T = assemble_T(tq_all, chi);
    }

    // ell matrix over all generators
    NFSystemContext sys;
    sys.d = d;
    sys.g = g;
    sys.r = r;
    sys.ell = PMat(d * g, r);
    std::vector<std::vector<Padic>> full_int(r);  // per generator: all omega per embedding
    for (long s = 0; s < r; ++s) {
        for (long i = 0; i < d; ++i) {
            IntegralVector v = ci[i].integrate_divisor(gens[s].support_on(i, coh[i].curve));
            for (long j = 0; j < g; ++j) sys.ell(i * g + j, s) = v.values[j];
            full_int[s].insert(full_int[s].end(), v.values.begin(), v.values.end());
        }
    }
    long zero_threshold = std::max(2L, std::min(coh[0].tail_cap, coh[1].tail_cap) - 2);
    sys.beta = nf_relations(sys.ell, r, zero_threshold);
    if (static_cast<long>(sys.beta.size()) < r_K)
        throw HypothesisError("nf: not enough integral relations (kernel too small)");

    // effective height constants per embedding: u_eff = 2 u_proj - s with s a
    // particular solution of the omega_g span system over the height generators
    std::vector<long> hgens;
    for (long s = 0; s < r; ++s)
        if (!gens[s].relation_only) hgens.push_back(s);
    if (hgens.empty()) throw InputError("nf: no height generators supplied");
    {
        // solve, per embedding, sum_j s_j ell_{i,j}(a) = int_{sigma_i a} omega_g
        // in the least-committal way: pivoted particular solution on the
        // available equations
        for (long i = 0; i < d; ++i) {
            PMat A(static_cast<long>(hgens.size()), g), rhs(static_cast<long>(hgens.size()), 1);
            for (size_t row = 0; row < hgens.size(); ++row) {
                long s = hgens[row];
                for (long j = 0; j < g; ++j) A(row, j) = sys.ell(i * g + j, s);
                rhs(row, 0) = full_int[s][i * (2 * g + 1) + g];
            }
            // particular solution via pivoted elimination (may be underdetermined)
            std::vector<Padic> sol(g, Padic::exact_zero(p));
            PMat work = A, wr = rhs;
            std::vector<long> pivcol;
            long rrow = 0;
            for (long cidx = 0; cidx < g && rrow < work.rows; ++cidx) {
                long piv = -1, best = (1L << 40);
                for (long rr = rrow; rr < work.rows; ++rr) {
                    long vv = work(rr, cidx).is_zero() ? (1L << 40) : work(rr, cidx).valuation();
                    if (vv < best) {
                        best = vv;
                        piv = rr;
                    }
                }
                if (piv < 0 || best >= zero_threshold) continue;
                for (long cc = 0; cc < g; ++cc) std::swap(work(piv, cc), work(rrow, cc));
                std::swap(wr(piv, 0), wr(rrow, 0));
                Padic inv = work(rrow, cidx).inverse();
                for (long cc = 0; cc < g; ++cc) work(rrow, cc) = work(rrow, cc) * inv;
                wr(rrow, 0) = wr(rrow, 0) * inv;
                for (long rr = 0; rr < work.rows; ++rr) {
                    if (rr == rrow || work(rr, cidx).is_zero()) continue;
                    Padic sfac = work(rr, cidx);
                    for (long cc = 0; cc < g; ++cc)
                        work(rr, cc) = work(rr, cc) - sfac * work(rrow, cc);
                    wr(rr, 0) = wr(rr, 0) - sfac * wr(rrow, 0);
                }
                pivcol.push_back(cidx);
                ++rrow;
            }
            for (size_t kk = 0; kk < pivcol.size(); ++kk) sol[pivcol[kk]] = wr(kk, 0);
            std::vector<Padic> ueff(g);
            Padic two = Padic::from_integer(2, PrecisionPolicy(p, coh[i].internal_digits));
            for (long j = 0; j < g; ++j) ueff[j] = two * coh[i].u[j] - sol[j];
            sys.u_eff.push_back(std::move(ueff));
        }
    }

    // alpha: lambda(a_s) = sum_{i,j} alpha_{j,i} ell_{j,i}(a_s) for the height
    // generators, pivoted particular solution (alphas are not unique)
    {
        long rows = static_cast<long>(hgens.size());
        PMat A(rows, d * g), rhs(rows, 1);
        for (long row = 0; row < rows; ++row) {
            long s = hgens[row];
            for (long c = 0; c < d * g; ++c) A(row, c) = sys.ell(c, s);
            Padic h = Padic::exact_zero(p);
            for (long i = 0; i < d; ++i) {
                const std::vector<Padic>& vi = full_int[s];
                Padic hp = vi[i * (2 * g + 1) + g];
                for (long j = 0; j < g; ++j)
                    hp = hp - sys.u_eff[i][j] * vi[i * (2 * g + 1) + j];
                h = h + hp;
            }
            for (auto& [q, f, lq] : gens[s].away) {
                if (lq == 0) continue;
                h = h + Padic::from_rational(lq, chi.pol) * chi.value_at_prime(q, f);
            }
            rhs(row, 0) = h;
        }
        // pivoted particular solution of A alpha = rhs
        std::vector<Padic> alpha(d * g, Padic::exact_zero(p));
        PMat work = A, wr = rhs;
        std::vector<long> pivcol;
        long rrow = 0;
        for (long cidx = 0; cidx < d * g && rrow < rows; ++cidx) {
            long piv = -1, best = (1L << 40);
            for (long rr = rrow; rr < rows; ++rr) {
                long vv = work(rr, cidx).is_zero() ? (1L << 40) : work(rr, cidx).valuation();
                if (vv < best) {
                    best = vv;
                    piv = rr;
                }
            }
            if (piv < 0 || best >= zero_threshold) continue;
            for (long cc = 0; cc < d * g; ++cc) std::swap(work(piv, cc), work(rrow, cc));
            std::swap(wr(piv, 0), wr(rrow, 0));
            Padic inv = work(rrow, cidx).inverse();
            for (long cc = 0; cc < d * g; ++cc) work(rrow, cc) = work(rrow, cc) * inv;
            wr(rrow, 0) = wr(rrow, 0) * inv;
            for (long rr = 0; rr < rows; ++rr) {
                if (rr == rrow || work(rr, cidx).is_zero()) continue;
                Padic sfac = work(rr, cidx);
                for (long cc = 0; cc < d * g; ++cc)
                    work(rr, cc) = work(rr, cc) - sfac * work(rrow, cc);
                wr(rr, 0) = wr(rr, 0) - sfac * wr(rrow, 0);
            }
            pivcol.push_back(cidx);
            ++rrow;
        }
        sys.alpha.assign(d * g, Padic::exact_zero(p));
        for (size_t kk = 0; kk < pivcol.size(); ++kk) sys.alpha[pivcol[kk]] = wr(kk, 0);
    }
    rep.sys = sys;

    // base point: first known integral point
    if (rep.known_points.empty())
        throw HypothesisError("nf: no integral base point available");
    OKPoint Q = rep.known_points.front();
    std::vector<CurvePoint> sigmaQ;
    for (long i = 0; i < d; ++i) sigmaQ.push_back(detail::embed_ok_point(Q, coh[i].curve));

    // per-embedding lists of solvable discs
    std::vector<std::vector<long>> solvable(d);
    for (long i = 0; i < d; ++i)
        for (long di = 0; di < ci[i].disc_count(); ++di) {
            auto k = ci[i].disc(di).kind;
            if (k == ResidueDisc::Kind::Affine || k == ResidueDisc::Kind::Weierstrass)
                solvable[i].push_back(di);
        }

    const std::vector<Padic>& beta = sys.beta.front();
    long n1 = 2 * g + 1;
    // per-disc data: primitives and the cross constants
    auto cross_vec = [&](long i, long di) {
        return ci[i].integrate(sigmaQ[i], ci[i].disc(di).center).values;
    };
    std::map<std::pair<long, long>, std::vector<Padic>> cross;
    for (long i = 0; i < d; ++i)
        for (long di : solvable[i]) cross[{i, di}] = cross_vec(i, di);

    std::vector<CurvePoint> known_embedded[2];
    for (long i = 0; i < d; ++i)
        for (auto& P : rep.known_points)
            known_embedded[i].push_back(detail::embed_ok_point(P, coh[i].curve));

    for (long d1 : solvable[0]) {
        for (long d2 : solvable[1]) {
            std::array<long, 2> discs{d1, d2};
            PolydiscReport pd;
            for (long i = 0; i < d; ++i) {
                pd.xbar[i] = ci[i].disc(discs[i]).xbar;
                pd.ybar[i] = ci[i].disc(discs[i]).ybar;
                pd.kind[i] = ci[i].disc(discs[i]).kind;
            }
            // blocks
            SeparatedSystem sys2;
            sys2.p = p;
            sys2.d = d;
            sys2.blocks.assign(d, std::vector<PadicSeries>(d, PadicSeries::zero(p, 1)));
            Padic a_rel = Padic::exact_zero(p);
            Padic b_hgt = Padic::exact_zero(p);
            for (long i = 0; i < d; ++i) {
                long di = discs[i];
                PadicSeries rel = PadicSeries::zero(p, 1);
                PadicSeries hgt = PadicSeries::zero(p, 1);
                for (long j = 0; j < g; ++j) {
                    rel = rel + beta[i * g + j] * ci[i].primitive(di, j);
                    hgt = hgt + (sys.alpha[i * g + j] + sys.u_eff[i][j]) *
                                    ci[i].primitive(di, j);
                }
                hgt = hgt - ci[i].primitive(di, g);
                sys2.blocks[0][i] = rel.truncated(cfg.M() + 1);
                sys2.blocks[1][i] = hgt.truncated(cfg.M() + 1);
                const std::vector<Padic>& cv = cross.at({i, di});
                for (long j = 0; j < g; ++j) {
                    a_rel = a_rel + beta[i * g + j] * cv[j];
                    b_hgt = b_hgt + sys.alpha[i * g + j] * cv[j];
                }
                Padic hp = cv[g];
                for (long j = 0; j < g; ++j) hp = hp - sys.u_eff[i][j] * cv[j];
                b_hgt = b_hgt - hp;
            }
            for (size_t ti = 0; ti < rep.T.size(); ++ti) {
                sys2.constants = {a_rel, b_hgt - rep.T[ti]};
                SepReport sr = solve_separated(sys2, cfg.max_depth);
                pd.used_subdivision |= sr.used_subdivision;
                pd.unresolved_boxes += static_cast<long>(sr.unresolved.size());
                for (auto& root : sr.roots) {
                    NFRootRecord rr;
                    rr.z = root.z;
                    rr.t_index = static_cast<long>(ti);
                    rr.certified = root.certified;
                    rr.unique_in_polydisc = root.unique_in_polydisc;
                    rr.known = false;
                    std::vector<CurvePoint> pts;
                    for (long i = 0; i < d; ++i)
                        pts.push_back(point_at_parameter(ci[i].chart(discs[i]), root.z[i]));
                    for (long i = 0; i < d; ++i) rr.x.push_back(pts[i].x);
                    // match against the sigma-images of known O_K points
                    for (size_t kp = 0; kp < rep.known_points.size(); ++kp) {
                        bool match = true;
                        for (long i = 0; i < d && match; ++i) {
                            const CurvePoint& K = known_embedded[i][kp];
                            long thr = std::min(5L, std::min(pts[i].x.abs_precision(),
                                                             K.x.abs_precision()));
                            if (!(pts[i].x - K.x).same_mod(Padic::exact_zero(p), thr))
                                match = false;
                            Padic dy = pts[i].y - K.y;
                            if (!dy.is_zero() && dy.valuation() < 1) match = false;
                        }
                        if (match) rr.known = true;
                    }
                    pd.roots.push_back(std::move(rr));
                }
            }
            rep.polydiscs.push_back(std::move(pd));
        }
    }

    for (auto& pd : rep.polydiscs) {
        rep.boxes += pd.unresolved_boxes;
        for (auto& r2 : pd.roots)
            if (r2.known)
                ++rep.known_roots;
            else
                ++rep.extra_roots;
    }
    rep.complete = rep.boxes == 0 && rep.extra_roots == 0 &&
                   rep.known_roots >= static_cast<long>(rep.known_points.size());
    return rep;
}

}  // namespace evenqc
