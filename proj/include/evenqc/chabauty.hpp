#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evenqc/heights.hpp"
#include "evenqc/roots.hpp"

namespace evenqc {

struct QCConfig {
    PrecisionPolicy target{7, 10};
    long truncation = 0;  // 0: use 2N
    mpz_class search_bound = 100;
    std::vector<long> prescreen_primes = {3, 5, 7, 11};
    bool no_base_point = false;
    long max_depth = 6;

    long M() const { return truncation > 0 ? truncation : 2 * target.digits; }
};

// degree-zero divisor on the monic model, supported on integral points
struct GeneratorQ {
    std::string id;
    std::vector<std::pair<IntegerPoint, long>> points;
    // away local heights l_q as exact rationals; primes absent from the map
    // must be certified by a T_q = {0} criterion
    std::vector<std::tuple<mpz_class, long, Rat>> away;
};

struct RootRecord {
    Padic z;        // disc parameter
    Padic x;        // x-coordinate of the candidate point
    long t_index;   // which element of T
    bool certified;
    enum class Status { KnownIntegralPoint, UnexplainedCandidate, UncertifiedBox } status;
};

struct DiscReport {
    ResidueDisc::Kind kind;
    long xbar, ybar;
    std::vector<long> strassmann;  // per t
    std::vector<RootRecord> roots;
    std::vector<std::string> notes;
};

struct HeightContextQ {
    std::vector<Padic> alpha;
    std::vector<Padic> u;  // effective local height constants (u_eff = 2 u_proj - s)
    std::vector<Padic> s;  // span coordinates of int omega_g on the generators
    long k_det = 0;        // ord_p det N
    PMat Nmat;
};

struct CandidateReport {
    std::vector<IntegerPoint> known_points;  // on the input model
    std::vector<DiscReport> discs;
    std::vector<Padic> T;
    HeightContextQ heights;
    bool complete = false;  // certified: the known points are all of U(Z)
    std::vector<std::string> warnings;
    // precision ledger
    long digits = 0, truncation = 0, kmax = 0, tail_cap = 0, frob_internal = 0;
    long unexplained_count() const {
        long n = 0;
        for (auto& d : discs)
            for (auto& r : d.roots)
                if (r.status == RootRecord::Status::UnexplainedCandidate) ++n;
        return n;
    }
};

namespace detail {

inline CurvePoint to_padic_point(const IntegerPoint& P, long p, long digits) {
    PrecisionPolicy pol(p, digits);
    return CurvePoint::affine(Padic::from_integer(P.x, pol),
                              Padic::from_integer(P.y, pol));
}

}  // namespace detail

// alpha_0..alpha_{g-1} with h(infty_- - infty_+, a_j) = sum_i alpha_i int_{a_j} omega_i
inline HeightContextQ solve_alpha(ColemanIntegrator& ci, const IdeleCharacter& chi,
                                  const std::vector<GeneratorQ>& gens) {
    const CohomologyData& coh = ci.cohomology();
    long g = ci.curve().genus, p = ci.curve().p;
    if (static_cast<long>(gens.size()) != g)
        throw HypothesisError("solve_alpha: need exactly g = " + std::to_string(g) +
                              " independent generators (rank condition r = g)");
    HeightContextQ out;
    out.Nmat = PMat(g, g);
    PMat rhs_g(g, 1);        // int_{a_j} omega_g
    PMat away_rhs(g, 1);     // away contributions per generator
    for (long j = 0; j < g; ++j) {
        std::vector<std::pair<CurvePoint, long>> divisor;
        for (auto& [P, m] : gens[j].points)
            divisor.emplace_back(detail::to_padic_point(P, p, coh.internal_digits), m);
        IntegralVector v = ci.integrate_divisor(divisor);
        for (long i = 0; i < g; ++i) out.Nmat(i, j) = v.values[i];
        rhs_g(j, 0) = v.values[g];
        Padic away = Padic::exact_zero(p);
        for (auto& [q, f, lq] : gens[j].away) {
            if (lq == 0) continue;
            away = away + Padic::from_rational(lq, chi.pol) * chi.value_at_prime(q, f);
        }
        away_rhs(j, 0) = away;
    }
    Padic det = padic_det(out.Nmat);
    if (det.is_zero())
        throw HypothesisError(
            "solve_alpha: det of the generator integral matrix is precision-zero "
            "(generators dependent or precision too low)");
    out.k_det = det.valuation();
    // s: span coordinates of the omega_g integrals, N^T s = rhs_g
    PMat Nt = out.Nmat.transpose();
    PMat s_sol = padic_solve(Nt, rhs_g);
    for (long i = 0; i < g; ++i) out.s.push_back(s_sol(i, 0));
    // effective height constants matching the displayed local height formula
    Padic two = Padic::from_integer(2, PrecisionPolicy(p, coh.internal_digits));
    for (long i = 0; i < g; ++i) out.u.push_back(two * coh.u[i] - out.s[i]);
    // h_j = int omega_g - sum u_i int omega_i + away; solve N^T alpha = h
    PMat rhs(g, 1);
    for (long j = 0; j < g; ++j) {
        Padic h = rhs_g(j, 0);
        for (long i = 0; i < g; ++i) h = h - out.u[i] * out.Nmat(i, j);
        rhs(j, 0) = h + away_rhs(j, 0);
    }
    PMat sol = padic_solve(Nt, rhs);
    for (long i = 0; i < g; ++i) out.alpha.push_back(sol(i, 0));
    return out;
}

struct RhoSeries {
    Padic constant;      // value of the P-independent part (base-to-center)
    PadicSeries series;  // the tiny-integral part, zero at z = 0
};

// rho(P) = sum alpha_i int_Q^P omega_i - h_p(infty_--infty_+, P-Q) expanded
// on one residue disc; with no base point, Q is replaced by iota(P)
inline RhoSeries build_rho_series(ColemanIntegrator& ci, const HeightContextQ& hctx,
                                  long disc_idx, const std::optional<CurvePoint>& base,
                                  long M) {
    const CohomologyData& coh = ci.cohomology();
    long g = ci.curve().genus, p = ci.curve().p;
    const CurvePoint& center = ci.disc(disc_idx).center;
    RhoSeries out;

    // series part: sum_i (alpha_i + u_i) I_i(z) - I_g(z), I_i = tiny primitive
    PadicSeries acc = PadicSeries::zero(p, 1);
    for (long i = 0; i < g; ++i) {
        Padic coef = hctx.alpha[i] + hctx.u[i];
        acc = acc + coef * ci.primitive(disc_idx, i);
    }
    acc = acc - ci.primitive(disc_idx, g);
    if (acc.order() > M + 1) acc = acc.truncated(M + 1);

    auto hp_combo = [&](const std::vector<Padic>& vals) {
        Padic h = vals[g];
        for (long i = 0; i < g; ++i) h = h - hctx.u[i] * vals[i];
        return h;
    };
    if (base) {
        IntegralVector v = ci.integrate(*base, center);
        Padic c = Padic::exact_zero(p);
        for (long i = 0; i < g; ++i) c = c + hctx.alpha[i] * v.values[i];
        c = c - hp_combo(v.values);
        out.constant = c;
        out.series = acc;
    } else {
        // involution variant: rho(P) = sum alpha_i int_{iota P}^P omega_i - h_p(..., P - iota P)
        // = 2 * (series at P relative to the center) + constant from iota(center) to center
        IntegralVector v = ci.integrate(center.involution(), center);
        Padic c = Padic::exact_zero(p);
        for (long i = 0; i < g; ++i) c = c + hctx.alpha[i] * v.values[i];
        c = c - hp_combo(v.values);
        out.constant = c;
        Padic two = Padic::from_integer(2, PrecisionPolicy(p, coh.internal_digits));
        out.series = two * acc;
    }
    return out;
}

// The full driver: search, T, alpha, per-disc rho series, root extraction,
// classification.
inline CandidateReport find_candidates(
    const CurveModel& input_model, const QCConfig& cfg, std::vector<GeneratorQ> gens,
    const std::map<std::string, BadPrimeData>& bad_data,
    const std::vector<IntegerPoint>& extra_known = {}) {
    CandidateReport rep;
    rep.digits = cfg.target.digits;
    rep.truncation = cfg.M();

    // search on the input model, then transfer to the monic model
    SearchConfig scfg;
    scfg.bound = cfg.search_bound;
    scfg.prescreen_primes = cfg.prescreen_primes;
    rep.known_points = point_search(input_model, scfg);
    for (auto& P : extra_known)
        if (std::find(rep.known_points.begin(), rep.known_points.end(), P) ==
            rep.known_points.end())
            rep.known_points.push_back(P);
    std::sort(rep.known_points.begin(), rep.known_points.end());

    Monicization mo = monicize(input_model);
    const CurveModel& m = mo.monic;
    std::vector<IntegerPoint> monic_known;
    for (auto& P : rep.known_points) monic_known.push_back(mo.forward(P));

    // away sets and T: bad primes are the divisors of disc(f_monic)
    PrecisionPolicy pol = cfg.target;
    IdeleCharacter chi(IdeleCharacter::Kind::CyclotomicQ, pol);
    Rat disc = poly_discriminant(m.f).a;
    auto bad = factor(disc.get_num() * disc.get_den());
    std::vector<std::tuple<mpz_class, long, std::vector<Rat>>> tq_all;
    for (auto& [q, e] : bad) {
        if (q == cfg.target.prime) continue;
        std::optional<BadPrimeData> data;
        auto it = bad_data.find(q.get_str());
        if (it != bad_data.end()) data = it->second;
        auto tq = tq_set(m, data, q);
        tq_all.emplace_back(q, 1, tq);
    }
    rep.T = assemble_T(tq_all, chi);

    // cohomology and heights
    CohomologyData coh = compute_cohomology(m, 0, cfg.target);
    unit_root_subspace(coh, cfg.target);
    normalization_constants(coh);
    ColemanIntegrator ci(coh, cfg.M());
    rep.kmax = coh.kmax;
    rep.tail_cap = coh.tail_cap;
    rep.frob_internal = coh.internal_digits;

    for (auto& gen : gens)
        for (auto& [P, mult] : gen.points) {
            mpz_class fx = m.f_integer().eval(P.x);
            if (fx != P.y * P.y)
                throw InputError("generator support point not on the monic model (id " +
                                 gen.id + ")");
        }

    // group known monic points by disc and center each disc at one of them
    std::vector<std::vector<IntegerPoint>> known_by_disc(ci.disc_count());
    for (auto& P : monic_known) {
        CurvePoint Pp = detail::to_padic_point(P, m.p, coh.internal_digits);
        long di = ci.disc_index_of(Pp);
        known_by_disc[di].push_back(P);
        if (known_by_disc[di].size() == 1 &&
            ci.disc(di).kind == ResidueDisc::Kind::Affine)
            ci.override_center(di, Pp);
    }

    HeightContextQ hctx = solve_alpha(ci, chi, gens);
    rep.heights = hctx;

    std::optional<CurvePoint> base;
    if (!cfg.no_base_point) {
        if (monic_known.empty())
            throw HypothesisError(
                "find_candidates: no integral point available as base point; rerun with "
                "the involution variant");
        base = detail::to_padic_point(monic_known.front(), m.p, coh.internal_digits);
    }

    bool weierstrass_uncertified = false;
    bool nontrivial_series_seen = false;
    long interesting = 0;
    for (long di = 0; di < ci.disc_count(); ++di) {
        const ResidueDisc& d = ci.disc(di);
        if (d.kind == ResidueDisc::Kind::InfPlus || d.kind == ResidueDisc::Kind::InfMinus)
            continue;  // no affine integral points reduce there
        DiscReport dr;
        dr.kind = d.kind;
        dr.xbar = d.xbar;
        dr.ybar = d.ybar;
        ++interesting;

        if (d.kind == ResidueDisc::Kind::Weierstrass) {
            // handled by a direct check: an integral point with y = 0 forces
            // f(x) = 0; other integral points in the disc stay uncertified
            for (auto& P : known_by_disc[di]) {
                RootRecord r;
                r.z = Padic::exact_zero(m.p);
                r.x = Padic::from_integer(P.x, pol);
                r.t_index = 0;
                r.certified = (P.y == 0);
                r.status = RootRecord::Status::KnownIntegralPoint;
                dr.roots.push_back(r);
                if (P.y != 0) weierstrass_uncertified = true;
            }
            dr.notes.push_back("weierstrass disc: direct y = 0 check only");
            if (!known_by_disc[di].empty() &&
                std::any_of(known_by_disc[di].begin(), known_by_disc[di].end(),
                            [](const IntegerPoint& P) { return P.y != 0; }))
                dr.notes.push_back("integral point with y != 0 in a weierstrass disc: "
                                   "not certified complete");
            rep.discs.push_back(std::move(dr));
            continue;
        }

        // rho on this disc; the center is the known integral point when one
        // exists, else the Teichmueller lift
        long use_idx = di;
        RhoSeries rho = build_rho_series(ci, hctx, use_idx, base, cfg.M());
        if (!rho.series.c.empty()) {
            for (auto& cc : rho.series.c)
                if (!cc.is_zero()) nontrivial_series_seen = true;
        }
        LocalChart chart = ci.chart(use_idx);
        for (size_t ti = 0; ti < rep.T.size(); ++ti) {
            PadicSeries F = rho.series;
            // constant + series - t
            PadicSeries cst(m.p, 1);
            cst.c = {rho.constant - rep.T[ti]};
            cst.coeff_floor = (rho.constant - rep.T[ti]).valuation_bound();
            cst.tail_val = PadicSeries::PLUS_INF;
            F = F + cst;
            RootReport rr;
            try {
                rr = solve_single(F, cfg.max_depth);
            } catch (const PrecisionError& e) {
                dr.notes.push_back(std::string("solver: ") + e.what());
                dr.strassmann.push_back(-1);
                continue;
            }
            dr.strassmann.push_back(rr.strassmann);
            for (auto& root : rr.roots) {
                RootRecord r;
                r.z = root.z;
                r.t_index = static_cast<long>(ti);
                r.certified = root.certified;
                CurvePoint P = point_at_parameter(chart, root.z);
                r.x = P.x;
                r.status = RootRecord::Status::UnexplainedCandidate;
                for (auto& K : known_by_disc[di]) {
                    Padic dx = P.x - Padic::from_integer(K.x, pol);
                    if (dx.valuation_bound() >= std::min(r.x.abs_precision(), 5L)) {
                        r.status = RootRecord::Status::KnownIntegralPoint;
                        break;
                    }
                }
                dr.roots.push_back(std::move(r));
            }
            for (auto& box : rr.boxes) {
                RootRecord r;
                r.z = Padic::from_integer(box.center, pol).shift(1);
                r.x = Padic::exact_zero(m.p);
                r.t_index = static_cast<long>(ti);
                r.certified = false;
                r.status = RootRecord::Status::UncertifiedBox;
                dr.roots.push_back(std::move(r));
            }
        }
        rep.discs.push_back(std::move(dr));
    }
    if (!nontrivial_series_seen && interesting > 0)
        throw HypothesisError("find_candidates: rho is identically zero across discs "
                              "(degenerate configuration)");

    // every known point must appear among the roots of its disc
    std::set<std::pair<long, long>> explained;  // (xbar, ybar) of known roots found
    long known_roots = 0, boxes = 0, unexplained = 0;
    for (auto& dr : rep.discs)
        for (auto& r : dr.roots) {
            if (r.status == RootRecord::Status::KnownIntegralPoint) ++known_roots;
            if (r.status == RootRecord::Status::UncertifiedBox) ++boxes;
            if (r.status == RootRecord::Status::UnexplainedCandidate) ++unexplained;
        }
    if (known_roots < static_cast<long>(monic_known.size()))
        rep.warnings.push_back(
            "internal check failed: a known integral point is not a root of its disc "
            "series");
    rep.complete = (unexplained == 0) && (boxes == 0) && !weierstrass_uncertified &&
                   known_roots == static_cast<long>(monic_known.size());
    return rep;
}

}  // namespace evenqc
