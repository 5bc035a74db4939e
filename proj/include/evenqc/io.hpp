#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "evenqc/chabauty.hpp"
#include "evenqc/chabauty_nf.hpp"
#include "evenqc/runge.hpp"

namespace evenqc {

using nlohmann::json;

inline Rat parse_rational(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long>()));
    if (j.is_string()) {
        Rat r(j.get<std::string>());
        r.canonicalize();
        return r;
    }
    throw InputError("expected an integer or a rational string \"a/b\"");
}

inline QuadRat parse_coefficient(const json& j, long field_disc) {
    if (j.is_array()) {
        if (j.size() != 2) throw InputError("field coefficients are [a, b] pairs");
        if (field_disc == 0) throw InputError("[a,b] coefficient on a curve over Q");
        return QuadRat(parse_rational(j[0]), parse_rational(j[1]), field_disc);
    }
    return QuadRat(parse_rational(j));
}

struct CurveFile {
    CurveModel model;
    long precision = 0;
    long truncation = 0;
    mpz_class search_bound = 100;
    std::vector<IntegerPoint> known_points;        // over Q
    std::vector<OKPoint> known_points_ok;          // over K
    std::vector<GeneratorQ> generators_q;
    std::vector<GeneratorNF> generators_nf;
    std::map<std::string, BadPrimeData> bad_primes;
};

inline std::vector<std::tuple<mpz_class, long, Rat>> parse_away(const json& j) {
    std::vector<std::tuple<mpz_class, long, Rat>> away;
    if (!j.contains("away")) return away;
    for (auto& a : j["away"]) {
        mpz_class q(a.at(0).get<long>());
        long f = a.at(1).get<long>();
        away.emplace_back(q, f, parse_rational(a.at(2)));
    }
    return away;
}

inline CurveFile load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open curve file " + path);
    json j;
    in >> j;

    CurveFile out;
    long disc = 0;
    if (j.contains("field") && j["field"].is_object())
        disc = j["field"].at("disc").get<long>();
    std::vector<QuadRat> coeffs;
    for (auto& c : j.at("f")) coeffs.push_back(parse_coefficient(c, disc));
    long p = j.at("p").get<long>();
    out.model = validate_curve(KPoly(std::move(coeffs)), QuadField{disc}, p);
    out.precision = j.value("precision", 10);
    out.truncation = j.value("truncation", 0);
    if (j.contains("search_bound")) out.search_bound = j["search_bound"].get<long>();

    if (j.contains("known_points")) {
        for (auto& pt : j["known_points"]) {
            if (disc == 0) {
                out.known_points.push_back(
                    {mpz_class(pt.at(0).get<long>()), mpz_class(pt.at(1).get<long>())});
            } else {
                OKPoint P;
                P.x = parse_coefficient(pt.at(0), disc);
                P.y = parse_coefficient(pt.at(1), disc);
                out.known_points_ok.push_back(P);
            }
        }
    }
    if (j.contains("generators")) {
        for (auto& gj : j["generators"]) {
            if (disc == 0) {
                GeneratorQ gen;
                gen.id = gj.value("id", "a" + std::to_string(out.generators_q.size() + 1));
                for (auto& pt : gj.at("points"))
                    gen.points.push_back({{mpz_class(pt.at(0).get<long>()),
                                           mpz_class(pt.at(1).get<long>())},
                                          pt.at(2).get<long>()});
                gen.away = parse_away(gj);
                out.generators_q.push_back(std::move(gen));
            } else {
                GeneratorNF gen;
                gen.id = gj.value("id", "a" + std::to_string(out.generators_nf.size() + 1));
                if (gj.contains("k_points"))
                    for (auto& pt : gj["k_points"]) {
                        OKPoint P;
                        P.x = parse_coefficient(pt.at(0), disc);
                        P.y = parse_coefficient(pt.at(1), disc);
                        gen.k_points.push_back({P, pt.at(2).get<long>()});
                    }
                if (gj.contains("local_points"))
                    for (auto& pt : gj["local_points"])
                        gen.local_points.push_back({pt.at(0).get<long>(),
                                                    mpz_class(pt.at(1).get<long>()),
                                                    pt.at(2).get<long>(), pt.at(3).get<long>()});
                gen.relation_only = gj.value("relation_only", false);
                gen.away = parse_away(gj);
                out.generators_nf.push_back(std::move(gen));
            }
        }
    }
    if (j.contains("bad_primes")) {
        for (auto& bj : j["bad_primes"]) {
            BadPrimeData d;
            d.q = mpz_class(bj.at("q").get<long>());
            d.residue_degree = bj.value("residue_degree", 1);
            if (bj.contains("components"))
                for (auto& c : bj["components"]) d.components.push_back(c.get<std::string>());
            if (bj.contains("M")) {
                long n = static_cast<long>(bj["M"].size());
                d.M = QMat(n, n);
                for (long i = 0; i < n; ++i)
                    for (long k = 0; k < n; ++k) d.M(i, k) = parse_rational(bj["M"][i][k]);
            }
            d.sp_inf_plus = bj.value("sp_inf_plus", "");
            d.sp_inf_minus = bj.value("sp_inf_minus", "");
            if (bj.contains("sp_points"))
                for (auto& [k, v] : bj["sp_points"].items())
                    d.sp_points[k] = v.get<std::string>();
            if (bj.contains("Tq_override")) {
                std::vector<Rat> tq;
                for (auto& t : bj["Tq_override"]) tq.push_back(parse_rational(t));
                d.tq_override = std::move(tq);
            }
            if (bj.contains("generator_local_heights"))
                for (auto& [k, v] : bj["generator_local_heights"].items())
                    d.generator_local_heights[k] = parse_rational(v);
            out.bad_primes[d.q.get_str()] = std::move(d);
        }
    }
    return out;
}

// ----- report serialization -----

inline json report_json(const CandidateReport& rep, const CurveModel& m) {
    json j;
    j["subcommand"] = "qc";
    j["p"] = m.p;
    j["genus"] = m.genus;
    j["precision_ledger"] = {{"digits", rep.digits},
                             {"truncation", rep.truncation},
                             {"k_det", rep.heights.k_det},
                             {"frobenius_terms", rep.kmax},
                             {"frobenius_tail_cap", rep.tail_cap},
                             {"frobenius_internal_digits", rep.frob_internal}};
    j["T"] = json::array();
    for (auto& t : rep.T) j["T"].push_back(t.to_string());
    j["alpha"] = json::array();
    for (auto& a : rep.heights.alpha) j["alpha"].push_back(a.to_string());
    j["u"] = json::array();
    for (auto& u : rep.heights.u) j["u"].push_back(u.to_string());
    j["known_points"] = json::array();
    for (auto& P : rep.known_points)
        j["known_points"].push_back({P.x.get_str(), P.y.get_str()});
    j["complete"] = rep.complete;
    j["warnings"] = rep.warnings;
    j["discs"] = json::array();
    for (auto& d : rep.discs) {
        json dj;
        dj["xbar"] = d.xbar;
        dj["ybar"] = d.ybar;
        dj["kind"] = d.kind == ResidueDisc::Kind::Weierstrass ? "weierstrass" : "affine";
        dj["strassmann"] = d.strassmann;
        dj["notes"] = d.notes;
        dj["roots"] = json::array();
        for (auto& r : d.roots) {
            json rj;
            rj["z"] = r.z.to_string();
            rj["x"] = r.x.to_string();
            rj["t_index"] = r.t_index;
            rj["certified"] = r.certified;
            rj["status"] = r.status == RootRecord::Status::KnownIntegralPoint
                               ? "known-integral-point"
                               : r.status == RootRecord::Status::UnexplainedCandidate
                                     ? "unexplained-padic-candidate"
                                     : "uncertified-box";
            dj["roots"].push_back(std::move(rj));
        }
        j["discs"].push_back(std::move(dj));
    }
    return j;
}

inline json report_json(const NFReport& rep, const CurveModel& m) {
    json j;
    j["subcommand"] = "qc-nf";
    j["p"] = m.p;
    j["genus"] = m.genus;
    j["field_disc"] = m.field.disc;
    j["precision_ledger"] = {{"digits", rep.digits}, {"truncation", rep.truncation}};
    j["T"] = json::array();
    for (auto& t : rep.T) j["T"].push_back(t.to_string());
    j["known_points"] = json::array();
    for (auto& P : rep.known_points)
        j["known_points"].push_back({P.x.str(), P.y.str()});
    j["relation_kernel_dim"] = rep.sys.beta.size();
    j["complete"] = rep.complete;
    j["known_roots"] = rep.known_roots;
    j["extra_roots"] = rep.extra_roots;
    j["unresolved_boxes"] = rep.boxes;
    j["warnings"] = rep.warnings;
    j["polydiscs"] = json::array();
    for (auto& pd : rep.polydiscs) {
        json pj;
        pj["xbar"] = pd.xbar;
        pj["ybar"] = pd.ybar;
        pj["unresolved"] = pd.unresolved_boxes;
        pj["roots"] = json::array();
        for (auto& r : pd.roots) {
            json rj;
            rj["z"] = {r.z[0].to_string(), r.z[1].to_string()};
            rj["known"] = r.known;
            rj["certified"] = r.certified;
            rj["unique_in_polydisc"] = r.unique_in_polydisc;
            pj["roots"].push_back(std::move(rj));
        }
        j["polydiscs"].push_back(std::move(pj));
    }
    return j;
}

inline json report_json(const std::vector<IntegerPoint>& pts, const RungeDecomposition& dec,
                        const Rat& bound) {
    json j;
    j["subcommand"] = "runge";
    j["g"] = json::array();
    for (auto& c : dec.G.c) j["g"].push_back(c.get_str());
    j["h"] = json::array();
    for (auto& c : dec.H.c) j["h"].push_back(c.get_str());
    j["bound"] = bound.get_str();
    j["points"] = json::array();
    for (auto& P : pts) j["points"].push_back({P.x.get_str(), P.y.get_str()});
    return j;
}

}  // namespace evenqc
