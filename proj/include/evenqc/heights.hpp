#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evenqc/coleman.hpp"
#include "evenqc/linalg.hpp"

namespace evenqc {

// Continuous idele class character with values in Q_p: the cyclotomic
// character over Q, or over a real quadratic field in which p splits. In
// both cases chi_p = log_p (Iwasawa branch, log_p(p) = 0) and tr_p = id.
struct IdeleCharacter {
    enum class Kind { CyclotomicQ, CyclotomicRealQuadraticSplit };
    Kind kind = Kind::CyclotomicQ;
    PrecisionPolicy pol;

    IdeleCharacter(Kind k, const PrecisionPolicy& policy) : kind(k), pol(policy) {}

    // chi_q(pi_q) = -log_p(Norm(pi_q)) = -f log_p(q) for a prime of residue
    // characteristic q and residue degree f
    Padic value_at_prime(const mpz_class& q, long residue_degree = 1) const {
        if (q == pol.prime) throw InputError("character: q = p is the ramified place");
        Padic lq = padic_log(Padic::from_integer(q, pol));
        Padic f = Padic::from_integer(residue_degree, pol);
        return -(f * lq);
    }
};

// Per-prime data of a regular model: multiplicity-one components, the
// intersection matrix, and the specializations of the infinite sections.
struct BadPrimeData {
    mpz_class q;
    long residue_degree = 1;             // F_{q^f}; only f = 1 is computed on
    std::vector<std::string> components; // labels of V_1(X)
    QMat M;                              // intersection matrix on those labels
    std::string sp_inf_plus, sp_inf_minus;
    std::map<std::string, std::string> sp_points;  // optional point -> label
    std::optional<std::vector<Rat>> tq_override;
    std::map<std::string, Rat> generator_local_heights;  // divisor id -> l_q

    long index_of(const std::string& label) const {
        for (size_t i = 0; i < components.size(); ++i)
            if (components[i] == label) return static_cast<long>(i);
        throw InputError("bad-prime data: unknown component label " + label);
    }
};

// v1^T pinv(-M) v2 on component-difference vectors, exact over Q
inline Rat lplus_pairing(const BadPrimeData& data, const std::vector<Rat>& v1,
                         const std::vector<Rat>& v2) {
    long n = static_cast<long>(data.components.size());
    if (data.M.rows != n || data.M.cols != n ||
        static_cast<long>(v1.size()) != n || static_cast<long>(v2.size()) != n)
        throw InputError("lplus_pairing: dimension mismatch");
    QMat A(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) A(i, j) = -data.M(i, j);
    QMat P = pseudoinverse_symmetric(A);
    Rat out(0);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out += v1[i] * P(i, j) * v2[j];
    return out;
}

namespace detail {
inline std::vector<Rat> component_diff(const BadPrimeData& d, const std::string& a,
                                       const std::string& b) {
    std::vector<Rat> v(d.components.size(), Rat(0));
    v[d.index_of(a)] += 1;
    v[d.index_of(b)] -= 1;
    return v;
}
}  // namespace detail

// The finite set T_q of away local height values (as exact rationals):
//   {0} at good primes and when monic f stays a non-square mod q,
//   otherwise all L+(sp(inf-)-sp(inf+), Gamma - Gamma') over components
//   (or against sp(Q) when a base-point specialization is known).
inline std::vector<Rat> tq_set(const CurveModel& monic_model,
                               const std::optional<BadPrimeData>& data, const mpz_class& q,
                               std::optional<mpz_class> w_residue = {},
                               const std::string& base_point_label = "") {
    if (!monic_model.is_monic()) throw InputError("tq_set: monicize the model first");
    if (data && data->tq_override) return *data->tq_override;

    // reduction criteria need the residue field to be F_q
    bool small_field = !data || data->residue_degree == 1;
    if (small_field) {
        std::vector<mpz_class> coeffs;
        bool reducible = true;
        for (auto& c : monic_model.f.c) {
            if (c.a.get_den() != 1 || c.b.get_den() != 1) {
                reducible = false;
                break;
            }
            if (c.b == 0) {
                coeffs.push_back(c.a.get_num());
            } else {
                // w maps to a residue mod q determined by the prime ideal
                if (!w_residue)
                    throw InputError("tq_set: K-curve needs the residue of w at q");
                coeffs.push_back(c.a.get_num() + c.b.get_num() * *w_residue);
            }
        }
        if (reducible) {
            FqPoly fq = fq_reduce(coeffs, q);
            // good reduction: degree preserved (monic) and squarefree mod q
            if (static_cast<long>(fq.size()) - 1 == monic_model.f.degree()) {
                FqPoly dfq;
                for (size_t i = 1; i < fq.size(); ++i)
                    dfq.push_back(fq[i] * i % q);
                fq_trim(dfq);
                // gcd(f, f') constant <=> smooth model at q
                FqPoly a = fq, b = dfq;
                while (!b.empty()) {
                    // a mod b
                    FqPoly r = a;
                    mpz_class lead_inv = invert_mod(b.back(), q);
                    while (r.size() >= b.size()) {
                        mpz_class s = r.back() * lead_inv % q;
                        long k = static_cast<long>(r.size() - b.size());
                        for (size_t i = 0; i < b.size(); ++i)
                            r[i + k] = ((r[i + k] - s * b[i]) % q + q) % q;
                        r.pop_back();
                        fq_trim(r);
                        if (r.size() < b.size()) break;
                    }
                    a = b;
                    b = r;
                }
                if (a.size() == 1) return {Rat(0)};  // good reduction at q
            }
            // Lemma: monic f with non-square reduction gives T_q = {0}
            if (!fq_is_square(fq, q)) return {Rat(0)};
        }
    }
    if (!data)
        throw InputError("tq_set: bad prime " + q.get_str() +
                         " needs intersection data (no criterion applies)");
    std::vector<Rat> vals;
    std::vector<Rat> infdiff =
        detail::component_diff(*data, data->sp_inf_minus, data->sp_inf_plus);
    auto push_unique = [&](const Rat& r) {
        for (auto& x : vals)
            if (x == r) return;
        vals.push_back(r);
    };
    if (!base_point_label.empty()) {
        for (auto& gamma : data->components) {
            std::vector<Rat> diff = detail::component_diff(*data, gamma, base_point_label);
            push_unique(lplus_pairing(*data, infdiff, diff));
        }
    } else {
        for (auto& gamma : data->components)
            for (auto& gammap : data->components) {
                std::vector<Rat> diff = detail::component_diff(*data, gamma, gammap);
                push_unique(lplus_pairing(*data, infdiff, diff));
            }
    }
    return vals;
}

// T = { sum_q -l_q f_q log_p(q) : l_q in T_q }, duplicates merged at the
// working precision
inline std::vector<Padic> assemble_T(
    const std::vector<std::tuple<mpz_class, long, std::vector<Rat>>>& tq_sets,
    const IdeleCharacter& chi) {
    std::vector<Padic> acc{Padic::exact_zero(chi.pol.prime)};
    for (auto& [q, f, tq] : tq_sets) {
        if (tq.size() == 1 && tq[0] == 0) continue;
        Padic chi_q = chi.value_at_prime(q, f);
        std::vector<Padic> next;
        for (auto& base : acc)
            for (auto& l : tq) {
                Padic v = base + Padic::from_rational(l, chi.pol) * chi_q;
                bool dup = false;
                for (auto& existing : next)
                    if ((existing - v).is_zero()) dup = true;
                if (!dup) next.push_back(v);
            }
        acc = std::move(next);
    }
    return acc;
}

// h_p(infty_- - infty_+, R - S) = int_S^R omega_g - sum u_i int_S^R omega_i
inline Padic local_height_p(ColemanIntegrator& ci, const CurvePoint& R, const CurvePoint& S) {
    const CohomologyData& coh = ci.cohomology();
    long g = ci.curve().genus;
    IntegralVector v = ci.integrate(S, R);
    Padic h = v.values[g];
    for (long i = 0; i < g; ++i) h = h - coh.u[i] * v.values[i];
    return h;
}

// same combination against a full integral vector (int from S to R)
inline Padic height_combination(const CohomologyData& coh, const std::vector<Padic>& v) {
    long g = coh.curve.genus;
    Padic h = v[g];
    for (long i = 0; i < g; ++i) h = h - coh.u[i] * v[i];
    return h;
}

// global height of the infinity divisor against a degree-zero divisor with
// known away-from-p local heights (exact rationals l_q)
inline Padic global_height_infty(ColemanIntegrator& ci, const IdeleCharacter& chi,
                                 const std::vector<std::pair<CurvePoint, long>>& divisor,
                                 const std::vector<std::tuple<mpz_class, long, Rat>>& away) {
    IntegralVector v = ci.integrate_divisor(divisor);
    Padic h = height_combination(ci.cohomology(), v.values);
    for (auto& [q, f, lq] : away) {
        if (lq == 0) continue;
        h = h + Padic::from_rational(lq, chi.pol) * chi.value_at_prime(q, f);
    }
    return h;
}

}  // namespace evenqc
