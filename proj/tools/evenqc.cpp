// Command-line driver: quadratic Chabauty and Runge pipelines for integral
// points on even-degree hyperelliptic curves.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "evenqc/io.hpp"

using namespace evenqc;

namespace {

struct CommonOpts {
    std::string curve_path;
    std::string out_path;
    std::string generators_path;
    std::string bad_primes_path;
    long precision = 0;
    long truncation = 0;
    long search_bound = -1;
    bool no_base_point = false;
    std::string prescreen;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--curve", o.curve_path, "curve input file (JSON)")->required();
    cmd->add_option("--out", o.out_path, "report output path (JSON)");
    cmd->add_option("--precision", o.precision, "p-adic working digits N");
    cmd->add_option("--truncation", o.truncation, "power series truncation M (default 2N)");
    cmd->add_option("--search-bound", o.search_bound, "naive search bound for |x|");
    cmd->add_option("--generators", o.generators_path, "extra generators file (JSON)");
    cmd->add_option("--bad-primes", o.bad_primes_path, "bad prime data file (JSON)");
    cmd->add_option("--prescreen-primes", o.prescreen, "comma-separated prescreen primes");
    cmd->add_flag("--no-base-point", o.no_base_point,
                  "use the involution variant of rho (no integral base point)");
}

std::vector<long> parse_primes(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
    return out;
}

void merge_side_files(CurveFile& cf, const CommonOpts& o) {
    if (!o.generators_path.empty()) {
        std::ifstream in(o.generators_path);
        if (!in) throw InputError("cannot open " + o.generators_path);
        json j;
        in >> j;
        json wrapper;
        wrapper["f"] = json::array();
        // reuse the curve-file parser by patching the generators into a copy
        // of the original file is heavier than needed; parse inline instead
        for (auto& gj : j.at("generators")) {
            if (cf.model.field.is_rational()) {
                GeneratorQ gen;
                gen.id = gj.value("id", "g");
                for (auto& pt : gj.at("points"))
                    gen.points.push_back({{mpz_class(pt.at(0).get<long>()),
                                           mpz_class(pt.at(1).get<long>())},
                                          pt.at(2).get<long>()});
                gen.away = parse_away(gj);
                cf.generators_q.push_back(std::move(gen));
            } else {
                throw InputError("separate generator files for K-curves: put them in the "
                                 "curve file");
            }
        }
    }
    if (!o.bad_primes_path.empty()) {
        std::ifstream in(o.bad_primes_path);
        if (!in) throw InputError("cannot open " + o.bad_primes_path);
        json j;
        in >> j;
        for (auto& bj : j.at("bad_primes")) {
            BadPrimeData d;
            d.q = mpz_class(bj.at("q").get<long>());
            d.residue_degree = bj.value("residue_degree", 1);
            if (bj.contains("Tq_override")) {
                std::vector<Rat> tq;
                for (auto& t : bj["Tq_override"]) tq.push_back(parse_rational(t));
                d.tq_override = std::move(tq);
            }
            cf.bad_primes[d.q.get_str()] = std::move(d);
        }
    }
}

void write_report(const json& j, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    std::cout << "report written to " << path << "\n";
}

int run_qc(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    merge_side_files(cf, o);
    QCConfig cfg;
    cfg.target = PrecisionPolicy(cf.model.p, o.precision > 0 ? o.precision : cf.precision);
    cfg.truncation = o.truncation > 0 ? o.truncation : cf.truncation;
    cfg.search_bound = o.search_bound >= 0 ? mpz_class(o.search_bound) : cf.search_bound;
    cfg.no_base_point = o.no_base_point;
    if (!o.prescreen.empty()) cfg.prescreen_primes = parse_primes(o.prescreen);
    if (cf.generators_q.empty())
        throw InputError("qc: the curve file must supply g independent generators");
    auto rep = find_candidates(cf.model, cfg, cf.generators_q, cf.bad_primes,
                               cf.known_points);
    std::cout << "p = " << cf.model.p << ", genus " << cf.model.genus << ", N = "
              << cfg.target.digits << "\n";
    std::cout << "T has " << rep.T.size() << " element(s)\n";
    std::cout << "alpha:";
    for (auto& a : rep.heights.alpha) std::cout << "  " << a.to_string();
    std::cout << "\nknown integral points: " << rep.known_points.size() << "\n";
    for (auto& P : rep.known_points)
        std::cout << "  (" << P.x.get_str() << ", " << P.y.get_str() << ")\n";
    std::cout << "unexplained candidates: " << rep.unexplained_count() << "\n";
    if (rep.complete)
        std::cout << "certified: the known points are the complete set of integral points\n";
    else
        std::cout << "NOT certified complete; pass the report to a Mordell-Weil sieve\n";
    for (auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    write_report(report_json(rep, cf.model), o.out_path);
    return rep.complete ? 0 : 0;
}

int run_qc_nf(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    NFConfig cfg;
    cfg.target = PrecisionPolicy(cf.model.p, o.precision > 0 ? o.precision : cf.precision);
    cfg.truncation = o.truncation > 0 ? o.truncation : cf.truncation;
    cfg.search_bound = o.search_bound >= 0 ? mpz_class(o.search_bound) : cf.search_bound;
    if (cf.generators_nf.empty())
        throw InputError("qc-nf: the curve file must supply generators");
    auto rep = nf_find_candidates(cf.model, cfg, cf.generators_nf, cf.bad_primes,
                                  cf.known_points_ok);
    std::cout << "p = " << cf.model.p << " split in Q(sqrt " << cf.model.field.disc
              << "), N = " << cfg.target.digits << "\n";
    std::cout << "relation kernel dimension: " << rep.sys.beta.size() << "\n";
    std::cout << "known integral points: " << rep.known_points.size() << "\n";
    for (auto& P : rep.known_points)
        std::cout << "  (" << P.x.str() << ", " << P.y.str() << ")\n";
    std::cout << "sigma-images recovered as roots: " << rep.known_roots
              << ", extra common zeros: " << rep.extra_roots
              << ", unresolved boxes: " << rep.boxes << "\n";
    if (!rep.complete)
        std::cout << "extra zeros require a Mordell-Weil sieve to rule out\n";
    for (auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    write_report(report_json(rep, cf.model), o.out_path);
    return 0;
}

int run_runge(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    ZPoly f = cf.model.f_integer();
    RungeConfig rcfg;
    if (!o.prescreen.empty()) rcfg.prescreen_primes = parse_primes(o.prescreen);
    auto pts = runge_points(f, rcfg);
    std::cout << "integral points (" << pts.size() << "):\n";
    for (auto& P : pts)
        std::cout << "  (" << P.x.get_str() << ", " << P.y.get_str() << ")\n";
    if (f.lead() > 0) {
        auto dec = runge_decompose(f);
        Rat M = runge_bound(dec);
        std::cout << "bound |x| <= " << M.get_str() << "\n";
        write_report(report_json(pts, dec, M), o.out_path);
    }
    return 0;
}

int run_frobenius(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    PrecisionPolicy target(cf.model.p, o.precision > 0 ? o.precision : cf.precision);
    long embs = cf.model.field.is_rational() ? 1 : 2;
    json out;
    out["subcommand"] = "frobenius";
    for (long e = 0; e < embs; ++e) {
        CohomologyData coh = compute_cohomology(monicize(cf.model).monic, e, target);
        unit_root_subspace(coh, target);
        normalization_constants(coh);
        std::cout << "embedding " << e << ": char poly of Frobenius on H^1_dR:\n";
        json cj = json::array();
        for (size_t k = 0; k < coh.charpoly.size(); ++k) {
            std::cout << "  T^" << k << ": "
                      << coh.charpoly[k].with_absprec_capped(target.digits).to_string()
                      << "\n";
            cj.push_back(coh.charpoly[k].to_string());
        }
        std::cout << "  u:";
        for (auto& u : coh.u) std::cout << " " << u.with_absprec_capped(target.digits).to_string();
        std::cout << "\n";
        out["embeddings"].push_back(
            {{"charpoly", cj}, {"kmax", coh.kmax}, {"tail_cap", coh.tail_cap}});
    }
    write_report(out, o.out_path);
    return 0;
}

int run_heights(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    if (!cf.model.field.is_rational())
        throw InputError("heights: direct height printing is for curves over Q");
    if (cf.generators_q.empty())
        throw InputError("heights: supply generators in the curve file");
    PrecisionPolicy target(cf.model.p, o.precision > 0 ? o.precision : cf.precision);
    CurveModel m = monicize(cf.model).monic;
    CohomologyData coh = compute_cohomology(m, 0, target);
    unit_root_subspace(coh, target);
    normalization_constants(coh);
    ColemanIntegrator ci(coh, 2 * target.digits);
    IdeleCharacter chi(IdeleCharacter::Kind::CyclotomicQ, target);
    HeightContextQ hctx = solve_alpha(ci, chi, cf.generators_q);
    std::cout << "u (height normalization):";
    for (auto& u : hctx.u) std::cout << "  " << u.with_absprec_capped(target.digits).to_string();
    std::cout << "\nalpha:";
    for (auto& a : hctx.alpha) std::cout << "  " << a.to_string();
    std::cout << "\nord_p det N = " << hctx.k_det << "\n";
    json out;
    out["subcommand"] = "heights";
    out["u"] = json::array();
    for (auto& u : hctx.u) out["u"].push_back(u.to_string());
    out["alpha"] = json::array();
    for (auto& a : hctx.alpha) out["alpha"].push_back(a.to_string());
    out["k_det"] = hctx.k_det;
    write_report(out, o.out_path);
    return 0;
}

int run_crosscheck(const CommonOpts& o) {
    CurveFile cf = load_curve_file(o.curve_path);
    ZPoly f = cf.model.f_integer();
    auto runge_set = runge_points(f);
    QCConfig cfg;
    cfg.target = PrecisionPolicy(cf.model.p, o.precision > 0 ? o.precision : cf.precision);
    cfg.search_bound = o.search_bound >= 0 ? mpz_class(o.search_bound) : cf.search_bound;
    cfg.no_base_point = o.no_base_point;
    if (cf.generators_q.empty())
        throw InputError("crosscheck: the curve file must supply generators");
    auto rep = find_candidates(cf.model, cfg, cf.generators_q, cf.bad_primes,
                               cf.known_points);
    std::vector<IntegerPoint> qc_set = rep.known_points;
    bool same = (runge_set == qc_set) && rep.complete;
    std::cout << "runge points: " << runge_set.size() << ", qc points: " << qc_set.size()
              << (rep.complete ? " (certified)" : " (not certified)") << "\n";
    if (same) {
        std::cout << "crosscheck: the two pipelines agree\n";
    } else {
        std::cout << "crosscheck: MISMATCH\n";
        for (auto& P : runge_set)
            if (std::find(qc_set.begin(), qc_set.end(), P) == qc_set.end())
                std::cout << "  runge only: (" << P.x.get_str() << ", " << P.y.get_str()
                          << ")\n";
        for (auto& P : qc_set)
            if (std::find(runge_set.begin(), runge_set.end(), P) == runge_set.end())
                std::cout << "  qc only: (" << P.x.get_str() << ", " << P.y.get_str()
                          << ")\n";
    }
    json out;
    out["subcommand"] = "crosscheck";
    out["agree"] = same;
    out["runge_count"] = runge_set.size();
    out["qc_count"] = qc_set.size();
    out["qc_certified"] = rep.complete;
    write_report(out, o.out_path);
    return same ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integral points on even-degree hyperelliptic curves: linear quadratic "
                 "Chabauty and a Runge-type solver"};
    app.require_subcommand(1);
    CommonOpts o;

    auto* qc = app.add_subcommand("qc", "quadratic Chabauty over Q");
    add_common(qc, o);
    auto* qcnf = app.add_subcommand("qc-nf", "quadratic Chabauty over a real quadratic field");
    add_common(qcnf, o);
    auto* runge = app.add_subcommand("runge", "elementary Runge-type solver");
    add_common(runge, o);
    auto* frob = app.add_subcommand("frobenius", "Frobenius matrix diagnostics");
    add_common(frob, o);
    auto* heights = app.add_subcommand("heights", "height constants and alpha");
    add_common(heights, o);
    auto* cross = app.add_subcommand("crosscheck", "run runge and qc, diff the point sets");
    add_common(cross, o);

    CLI11_PARSE(app, argc, argv);
    try {
        if (qc->parsed()) return run_qc(o);
        if (qcnf->parsed()) return run_qc_nf(o);
        if (runge->parsed()) return run_runge(o);
        if (frob->parsed()) return run_frobenius(o);
        if (heights->parsed()) return run_heights(o);
        if (cross->parsed()) return run_crosscheck(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return 3;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
