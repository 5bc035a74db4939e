#include <catch2/catch_amalgamated.hpp>

#include "evenqc/chabauty.hpp"

using namespace evenqc;

static KPoly kpoly(std::initializer_list<long> cs) {
    std::vector<QuadRat> v;
    for (long c : cs) v.emplace_back(c);
    return KPoly(std::move(v));
}

static CurveModel g2_model() { return validate_curve(kpoly({9, 20, 2, -18, -7, 2, 1}), {}, 7); }

static std::vector<GeneratorQ> g2_generators() {
    // [Q0 - Q], [Q1 - Q] with Q0 = (0,3), Q1 = (1,3), Q = (-1,1); all away
    // local heights vanish for this curve
    GeneratorQ a1{"a1", {{{0, 3}, 1}, {{-1, 1}, -1}}, {}};
    GeneratorQ a2{"a2", {{{1, 3}, 1}, {{-1, 1}, -1}}, {}};
    return {a1, a2};
}

static std::map<std::string, BadPrimeData> g2_bad_data() {
    // at q = 2 the model is non-minimal and the local height vanishes on the
    // smooth minimal model; supplied as an override
    BadPrimeData d2;
    d2.q = 2;
    d2.tq_override = std::vector<Rat>{Rat(0)};
    return {{"2", d2}};
}

TEST_CASE("alpha reproduction") {
    CurveModel m = g2_model();
    PrecisionPolicy target(7, 10);
    CohomologyData coh = compute_cohomology(m, 0, target);
    unit_root_subspace(coh, target);
    normalization_constants(coh);
    ColemanIntegrator ci(coh, 20);
    IdeleCharacter chi(IdeleCharacter::Kind::CyclotomicQ, target);
    HeightContextQ hctx = solve_alpha(ci, chi, g2_generators());

    // alpha_0 = 5 + 4*7 + 6*7^2 + 7^3 + 6*7^4 + O(7^5)
    // alpha_1 = 6 + 3*7 + 5*7^2 + 3*7^3 + 4*7^4 + O(7^5)
    REQUIRE(hctx.alpha[0].abs_precision() >= 5);
    REQUIRE(hctx.alpha[1].abs_precision() >= 5);
    REQUIRE(hctx.alpha[0].residue(5) == 15076);
    REQUIRE(hctx.alpha[1].residue(5) == 10905);
    REQUIRE(hctx.k_det >= 0);

    // linearity witness: lambda(a1 + a2) = h(a1) + h(a2)
    CurvePoint Q0 = detail::to_padic_point({0, 3}, 7, coh.internal_digits);
    CurvePoint Q1 = detail::to_padic_point({1, 3}, 7, coh.internal_digits);
    CurvePoint Q = detail::to_padic_point({-1, 1}, 7, coh.internal_digits);
    auto v = ci.integrate_divisor({{Q0, 1}, {Q1, 1}, {Q, -2}});
    Padic lhs = Padic::exact_zero(7);
    for (long i = 0; i < 2; ++i) lhs = lhs + hctx.alpha[i] * v.values[i];
    Padic rhs = v.values[2];
    for (long i = 0; i < 2; ++i) rhs = rhs - hctx.u[i] * v.values[i];
    REQUIRE((lhs - rhs).valuation_bound() >= 5);
}

TEST_CASE("rho series at the disc of (0,3)") {
    CurveModel m = g2_model();
    QCConfig cfg;
    cfg.target = PrecisionPolicy(7, 10);
    cfg.search_bound = 50;
    auto rep = find_candidates(m, cfg, g2_generators(), g2_bad_data());

    // locate the disc of (0, 3)
    const DiscReport* d03 = nullptr;
    for (auto& d : rep.discs)
        if (d.xbar == 0 && d.ybar == 3) d03 = &d;
    REQUIRE(d03 != nullptr);
    REQUIRE(d03->strassmann.size() == 1);
    REQUIRE(d03->strassmann[0] == 1);
    REQUIRE(d03->roots.size() == 1);
    REQUIRE(d03->roots[0].certified);
    REQUIRE(d03->roots[0].z.is_zero());
    REQUIRE(d03->roots[0].status == RootRecord::Status::KnownIntegralPoint);
}

TEST_CASE("rho series coefficients match the printed digits") {
    CurveModel m = g2_model();
    PrecisionPolicy target(7, 10);
    CohomologyData coh = compute_cohomology(m, 0, target);
    unit_root_subspace(coh, target);
    normalization_constants(coh);
    ColemanIntegrator ci(coh, 20);
    IdeleCharacter chi(IdeleCharacter::Kind::CyclotomicQ, target);
    CurvePoint Q0 = detail::to_padic_point({0, 3}, 7, coh.internal_digits);
    CurvePoint Q = detail::to_padic_point({-1, 1}, 7, coh.internal_digits);
    long d03 = ci.disc_index_of(Q0);
    ci.override_center(d03, Q0);
    HeightContextQ hctx = solve_alpha(ci, chi, g2_generators());
    RhoSeries rho = build_rho_series(ci, hctx, d03, Q, 20);

    // rho(z) in the scaled variable z (x = 7z):
    // (6*7 + O(7^2)) z + (6*7^3 + O(7^4)) z^2 + (6*7^3 + O(7^4)) z^3 + (7^4 + O(7^5)) z^4
    PadicSeries G = rho.series.rescale_p();
    REQUIRE(rho.constant.is_zero());  // rho(Q0) = 0: base and center differences vanish
    struct Want {
        long idx, value, prec;
    };
    for (auto [idx, value, prec] : {Want{1, 42, 2}, Want{2, 2058, 4}, Want{3, 2058, 4},
                                    Want{4, 2401, 5}}) {
        INFO("coefficient " << idx);
        REQUIRE(G.c[idx].abs_precision() >= prec);
        REQUIRE(G.c[idx].residue(prec) == value % pow_p(7, prec));
    }
}

TEST_CASE("full pipeline over Q certifies the ten points") {
    CurveModel m = g2_model();
    QCConfig cfg;
    cfg.target = PrecisionPolicy(7, 10);
    cfg.search_bound = 50;
    auto rep = find_candidates(m, cfg, g2_generators(), g2_bad_data());

    REQUIRE(rep.T.size() == 1);
    REQUIRE(rep.T[0].is_zero());
    std::vector<IntegerPoint> expect{{-4, -37}, {-4, 37}, {-2, -3}, {-2, 3}, {-1, -1},
                                     {-1, 1},   {0, -3},  {0, 3},  {1, -3}, {1, 3}};
    std::sort(expect.begin(), expect.end());
    REQUIRE(rep.known_points == expect);
    REQUIRE(rep.complete);
    REQUIRE(rep.unexplained_count() == 0);
    // ten affine discs, all with Strassmann bound 1
    long discs_solved = 0;
    for (auto& d : rep.discs) {
        if (d.kind != ResidueDisc::Kind::Affine) continue;
        ++discs_solved;
        REQUIRE(d.strassmann == std::vector<long>{1});
        REQUIRE(d.roots.size() == 1);
        REQUIRE(d.roots[0].certified);
        REQUIRE(d.roots[0].status == RootRecord::Status::KnownIntegralPoint);
    }
    REQUIRE(discs_solved == 10);
}

TEST_CASE("reduced search bound surfaces unexplained candidates") {
    // with B = 3 the points (-4, +-37) are not in the known list, so their
    // disc roots must come back as unexplained p-adic candidates
    CurveModel m = g2_model();
    QCConfig cfg;
    cfg.target = PrecisionPolicy(7, 10);
    cfg.search_bound = 3;
    auto rep = find_candidates(m, cfg, g2_generators(), g2_bad_data());
    REQUIRE(!rep.complete);
    REQUIRE(rep.unexplained_count() == 2);
    for (auto& d : rep.discs)
        for (auto& r : d.roots)
            if (r.status == RootRecord::Status::UnexplainedCandidate) {
                // the candidate is x = -4 in disguise: x = 3 mod 7
                REQUIRE(mpz_class(r.x.residue(1)) == 3);
                REQUIRE((r.x - Padic::from_integer(-4, cfg.target)).valuation_bound() >= 4);
            }
}

TEST_CASE("involution variant without a base point") {
    CurveModel m = g2_model();
    QCConfig cfg;
    cfg.target = PrecisionPolicy(7, 10);
    cfg.search_bound = 50;
    cfg.no_base_point = true;
    auto rep = find_candidates(m, cfg, g2_generators(), g2_bad_data());
    REQUIRE(rep.complete);
    REQUIRE(rep.known_points.size() == 10);
    REQUIRE(rep.unexplained_count() == 0);
}
