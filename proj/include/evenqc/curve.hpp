#pragma once

#include <optional>
#include <vector>

#include "evenqc/polynomial.hpp"
#include "evenqc/series.hpp"

namespace evenqc {

struct QuadField {
    long disc = 0;  // w^2 = disc; 0 encodes Q
    bool is_rational() const { return disc == 0; }
};

// y^2 = f(x), deg f = 2g+2, over Q or a real quadratic field
struct CurveModel {
    QuadField field;
    KPoly f;
    long genus = 0;
    mpz_class lead_sqrt = 1;  // b with b^2 = leading coefficient (rational case)
    long p = 0;

    bool is_monic() const { return f.lead() == QuadRat(1); }

    ZPoly f_integer() const {
        if (!field.is_rational()) throw InputError("f_integer: curve not over Q");
        std::vector<mpz_class> c;
        for (auto& q : f.c) {
            if (q.a.get_den() != 1) throw InputError("f_integer: non-integral coefficient");
            c.push_back(q.a.get_num());
        }
        return ZPoly(std::move(c));
    }
};

// the monic p-adic working model for one embedding
struct PadicCurve {
    long p = 0;
    PrecisionPolicy pol;
    PPoly f;  // monic, degree 2g+2
    long genus = 0;
    std::vector<long> fbar;  // coefficients mod p
    Padic w_image;           // image of w under this embedding (exact zero over Q)

    long degree() const { return 2 * genus + 2; }

    long fbar_eval(long x) const {
        long r = 0;
        for (size_t i = fbar.size(); i-- > 0;) r = (r * x % p + fbar[i]) % p;
        return (r + p) % p;
    }
};

struct CurvePoint {
    enum class Kind { Affine, InfPlus, InfMinus };
    Kind kind = Kind::Affine;
    Padic x, y;
    bool weierstrass = false;  // y exactly 0 (a ramification point of x)

    static CurvePoint affine(Padic xx, Padic yy) {
        CurvePoint P;
        P.x = std::move(xx);
        P.y = std::move(yy);
        P.weierstrass = P.y.is_exact_zero();
        return P;
    }
    static CurvePoint infinity(int sign) {
        CurvePoint P;
        P.kind = sign > 0 ? Kind::InfPlus : Kind::InfMinus;
        return P;
    }
    bool at_infinity() const { return kind != Kind::Affine; }

    CurvePoint involution() const {
        if (kind == Kind::InfPlus) return infinity(-1);
        if (kind == Kind::InfMinus) return infinity(+1);
        return affine(x, -y);
    }
};

struct IntegerPoint {
    mpz_class x, y;
    friend bool operator==(const IntegerPoint& a, const IntegerPoint& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator<(const IntegerPoint& a, const IntegerPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    }
};

struct OKPoint {
    QuadRat x, y;
};

struct ResidueDisc {
    enum class Kind { Affine, Weierstrass, InfPlus, InfMinus };
    Kind kind = Kind::Affine;
    long xbar = 0, ybar = 0;  // reduction (affine case)
    CurvePoint center;
};

// ----- validation -----

inline CurveModel validate_curve(const KPoly& f, const QuadField& field, long p) {
    CurveModel m;
    m.field = field;
    m.f = f;
    m.p = p;
    long deg = f.degree();
    if (deg < 2 || deg % 2 != 0) throw HypothesisError("curve: degree must be even and >= 2");
    m.genus = (deg - 2) / 2;
    if (p < 3 || p % 2 == 0) throw InputError("curve: need an odd prime p");
    if (!is_probable_prime(mpz_class(p))) throw InputError("curve: p is not prime");
    if (p <= m.genus) throw HypothesisError("curve: need p > g");
    QuadRat disc = poly_discriminant(f);
    if (disc.is_zero()) throw HypothesisError("curve: f is not squarefree");
    // leading coefficient must be a square (integer square over Q; monic over K)
    if (field.is_rational()) {
        Rat lead = f.lead().a;
        if (lead.get_den() != 1 || lead < 0)
            throw HypothesisError("curve: leading coefficient not a positive integer");
        mpz_class ln = lead.get_num();
        if (mpz_perfect_square_p(ln.get_mpz_t()) == 0)
            throw HypothesisError("curve: leading coefficient is not a square");
        mpz_class b;
        mpz_sqrt(b.get_mpz_t(), ln.get_mpz_t());
        m.lead_sqrt = b;
    } else {
        if (!m.is_monic())
            throw HypothesisError("curve: number-field models must be monic");
        if (field.disc <= 1) throw InputError("curve: field discriminant must be > 1");
        long r = field.disc % 4;
        if (r == 1) throw InputError("curve: only Z[w] integer rings supported (d = 2,3 mod 4)");
    }
    // good reduction at p: v_p(disc) = 0 and v_p(lead) = 0; for K, p split
    if (field.is_rational()) {
        Rat dq = disc.a;
        if (mpz_class(dq.get_num()) % p == 0 || mpz_class(dq.get_den()) % p == 0)
            throw HypothesisError("curve: bad reduction at p");
        if (mpz_class(f.lead().a.get_num()) % p == 0)
            throw HypothesisError("curve: leading coefficient vanishes mod p");
    } else {
        mpz_class D(field.disc);
        if (D % p == 0) throw HypothesisError("curve: p ramifies in the field");
        if (!sqrt_mod_p(D, p)) throw HypothesisError("curve: p is inert in the field");
        Rat n = disc.norm();
        if (mpz_class(n.get_num()) % p == 0 || mpz_class(n.get_den()) % p == 0)
            throw HypothesisError("curve: bad reduction above p");
    }
    return m;
}

// ----- monicization -----

struct Monicization {
    CurveModel monic;
    mpz_class b;  // scaling: (x, y) -> (b^2 x, b^(2g+1) y)

    IntegerPoint forward(const IntegerPoint& P) const {
        return {b * b * P.x, pow_ui(b, static_cast<unsigned long>(2 * monic.genus + 1)) * P.y};
    }
    std::optional<IntegerPoint> backward(const IntegerPoint& P) const {
        mpz_class b2 = b * b, bg = pow_ui(b, static_cast<unsigned long>(2 * monic.genus + 1));
        if (P.x % b2 != 0 || P.y % bg != 0) return std::nullopt;
        return IntegerPoint{P.x / b2, P.y / bg};
    }
};

// Y^2 = b^(4g+2) f(X / b^2); integral points are preserved
inline Monicization monicize(const CurveModel& m) {
    if (!m.field.is_rational()) {
        if (!m.is_monic()) throw InputError("monicize: K-curves must already be monic");
        return {m, 1};
    }
    Monicization out;
    out.b = m.lead_sqrt;
    long n = m.f.degree(), g = m.genus;
    std::vector<QuadRat> c(n + 1);
    for (long j = 0; j <= n; ++j) {
        // coefficient of X^j: f_j b^(4g+2) / b^(2j); integral since the top
        // coefficient is b^2
        Rat scale = Rat(pow_ui(out.b, static_cast<unsigned long>(4 * g + 2))) /
                    Rat(pow_ui(out.b, static_cast<unsigned long>(2 * j)));
        c[j] = QuadRat(m.f[j].a * scale);
    }
    out.monic = m;
    out.monic.f = KPoly(std::move(c));
    out.monic.lead_sqrt = 1;
    return out;
}

// ----- embeddings into Q_p -----

inline std::vector<PadicCurve> embeddings(const CurveModel& m, const PrecisionPolicy& pol) {
    if (pol.prime != m.p) throw InputError("embeddings: policy prime mismatch");
    if (!m.is_monic()) throw InputError("embeddings: monicize first");
    std::vector<Padic> ws;
    if (m.field.is_rational()) {
        ws.push_back(Padic::exact_zero(m.p));
    } else {
        PrecisionPolicy wide(pol.prime, pol.digits + 2);
        auto r = padic_sqrt(Padic::from_integer(m.field.disc, wide));
        if (!r) throw HypothesisError("embeddings: p not split in the field");
        // smaller residue mod p first (padic_sqrt already picks it)
        ws.push_back(*r);
        ws.push_back(-*r);
    }
    std::vector<PadicCurve> out;
    for (auto& w : ws) {
        PadicCurve c;
        c.p = m.p;
        c.pol = pol;
        c.genus = m.genus;
        std::vector<Padic> fc;
        for (auto& q : m.f.c) fc.push_back(embed(q, w, pol));
        c.f = PPoly(std::move(fc));
        c.w_image = w;
        for (auto& x : c.f.c)
            c.fbar.push_back(x.is_zero() || x.valuation() > 0
                                 ? 0
                                 : mpz_class(x.residue(1)).get_si());
        out.push_back(std::move(c));
    }
    return out;
}

// ----- residue discs -----

inline bool is_square_mod(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return true;
    return sqrt_mod_p(a, p).has_value();
}

// the 0, 1 or 2 points of X(Q_p) above the residue x0, centered at the
// Teichmueller (or given integer) lift
inline std::vector<CurvePoint> lift_point(long x0, const PadicCurve& c,
                                          std::optional<mpz_class> integer_lift = {}) {
    std::vector<CurvePoint> out;
    x0 = ((x0 % c.p) + c.p) % c.p;
    if (c.fbar_eval(x0) == 0) {
        // Weierstrass disc: x is the unique root of f above x0 (simple mod p
        // by good reduction), found by Newton; the disc point has y = 0
        Padic xr = Padic::from_integer(x0, c.pol);
        PPoly df = c.f.derivative();
        for (int it = 0; it < 200; ++it) {
            Padic num = c.f.eval(xr);
            if (num.is_zero()) break;
            xr = xr - num / df.eval(xr);
        }
        out.push_back(CurvePoint::affine(xr, Padic::exact_zero(c.p)));
        return out;
    }
    Padic x = integer_lift ? Padic::from_integer(*integer_lift, c.pol)
             : (x0 == 0)   ? Padic::exact_zero(c.p)
                           : teichmuller(x0, c.pol);
    Padic fx = c.f.eval(x);
    if (fx.is_zero()) throw PrecisionError("lift_point: f(x0) indistinguishable from 0");
    auto y = padic_sqrt(fx);
    if (!y) return out;
    out.push_back(CurvePoint::affine(x, *y));
    out.push_back(CurvePoint::affine(x, -*y));
    return out;
}

// all residue discs: affine ones from X(F_p), plus the two infinite discs
inline std::vector<ResidueDisc> enumerate_discs(const PadicCurve& c) {
    std::vector<ResidueDisc> out;
    for (long x0 = 0; x0 < c.p; ++x0) {
        long v = c.fbar_eval(x0);
        if (v == 0) {
            ResidueDisc d;
            d.kind = ResidueDisc::Kind::Weierstrass;
            d.xbar = x0;
            d.ybar = 0;
            d.center = lift_point(x0, c)[0];
            out.push_back(std::move(d));
        } else if (is_square_mod(v, c.p)) {
            auto pts = lift_point(x0, c);
            for (auto& P : pts) {
                ResidueDisc d;
                d.kind = ResidueDisc::Kind::Affine;
                d.xbar = x0;
                d.ybar = static_cast<long>(mpz_class(P.y.residue(1)).get_si());
                d.center = P;
                out.push_back(std::move(d));
            }
        }
    }
    ResidueDisc dp;
    dp.kind = ResidueDisc::Kind::InfPlus;
    dp.center = CurvePoint::infinity(+1);
    out.push_back(dp);
    ResidueDisc dm;
    dm.kind = ResidueDisc::Kind::InfMinus;
    dm.center = CurvePoint::infinity(-1);
    out.push_back(dm);
    return out;
}

// which disc a point belongs to (by reduction)
inline bool point_in_disc(const CurvePoint& P, const ResidueDisc& d, long p) {
    if (P.at_infinity() || (!P.x.is_zero() && P.x.valuation() < 0)) {
        // infinite discs; branch sign handled by the caller for affine x
        if (P.kind == CurvePoint::Kind::InfPlus) return d.kind == ResidueDisc::Kind::InfPlus;
        if (P.kind == CurvePoint::Kind::InfMinus) return d.kind == ResidueDisc::Kind::InfMinus;
        return false;
    }
    if (d.kind == ResidueDisc::Kind::InfPlus || d.kind == ResidueDisc::Kind::InfMinus)
        return false;
    long xb = P.x.is_zero() ? 0 : mpz_class(P.x.residue(1)).get_si();
    if (xb != d.xbar) return false;
    if (d.kind == ResidueDisc::Kind::Weierstrass) return true;
    long yb = P.y.is_zero() ? 0 : mpz_class(P.y.residue(1)).get_si();
    return yb == d.ybar;
}

// ----- local charts -----

// evaluate an exact polynomial at a series argument, truncated at M
inline PadicSeries eval_poly_series(const PPoly& f, const PadicSeries& x, long M) {
    PadicSeries r = PadicSeries::zero(x.p, x.dom_val);
    r.coeff_floor = PadicSeries::PLUS_INF;
    r.tail_val = PadicSeries::PLUS_INF;
    for (size_t j = f.c.size(); j-- > 0;) {
        r = PadicSeries::mul(r, x, M);
        PadicSeries cst(x.p, x.dom_val);
        cst.c = {f.c[j]};
        cst.coeff_floor = std::min(0L, f.c[j].valuation_bound());
        cst.tail_val = PadicSeries::PLUS_INF;
        r = r + cst;
    }
    return r;
}

struct LocalChart {
    ResidueDisc disc;
    // affine non-Weierstrass: x(t) = x0 + t, y(t) = ys(t)
    // Weierstrass:            t = y, x(t) = xs(t)
    // infinite discs:         t = 1/x, y t^(g+1) = sign * S(t)
    PadicSeries xs, ys, S;
    int inf_sign = 0;
    long genus = 0;
};

inline PadicSeries poly_shift_series(const PPoly& f, const Padic& x0, long p, long M) {
    // f(x0 + t) as a series in t (exact polynomial)
    std::vector<Padic> c = f.c;
    size_t n = c.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = n - 1; j > i; --j) c[j - 1] = c[j - 1] + x0 * c[j];
    PadicSeries s(p, 1);
    s.c = std::move(c);
    if (s.order() > M) s.c.resize(M);
    s.coeff_floor = 0;
    for (auto& x : s.c) s.coeff_floor = std::min(s.coeff_floor, x.valuation_bound());
    s.tail_val = PadicSeries::PLUS_INF;
    return s;
}

inline LocalChart local_expansion(const ResidueDisc& d, const PadicCurve& c, long M) {
    LocalChart ch;
    ch.disc = d;
    ch.genus = c.genus;
    long p = c.p;
    switch (d.kind) {
        case ResidueDisc::Kind::Affine: {
            PadicSeries fx = poly_shift_series(c.f, d.center.x, p, M);
            ch.xs = PadicSeries(p, 1);
            ch.xs.c = {d.center.x, Padic::from_integer(1, c.pol)};
            ch.xs.coeff_floor = 0;
            ch.xs.tail_val = PadicSeries::PLUS_INF;
            ch.ys = series_sqrt(fx, d.center.y, M);
            break;
        }
        case ResidueDisc::Kind::Weierstrass: {
            // solve f(x(t)) = t^2 with x(0) the root of f; well-behaved since
            // f'(x(0)) is a unit
            PadicSeries x(p, 1);
            x.c = {d.center.x};
            x.coeff_floor = 0;
            x.tail_val = 1;
            PPoly df = c.f.derivative();
            PadicSeries t2(p, 1);
            t2.c = {Padic::exact_zero(p), Padic::exact_zero(p),
                    Padic::from_integer(1, c.pol)};
            t2.coeff_floor = 0;
            t2.tail_val = PadicSeries::PLUS_INF;
            long k = 1;
            while (k < M) {
                k = std::min(2 * k, M);
                // x <- x - (f(x) - t^2) / f'(x)
                PadicSeries fx = eval_poly_series(c.f, x, k);
                PadicSeries dfx = eval_poly_series(df, x, k);
                PadicSeries delta = PadicSeries::mul(fx - t2.truncated(k),
                                                     series_inverse(dfx, k), k);
                x = x - delta;
                x = x.truncated(k);
                x.coeff_floor = 0;
                x.tail_val = k;
            }
            ch.xs = x;
            ch.ys = PadicSeries(p, 1);
            ch.ys.c = {Padic::exact_zero(p), Padic::from_integer(1, c.pol)};
            ch.ys.coeff_floor = 0;
            ch.ys.tail_val = PadicSeries::PLUS_INF;
            break;
        }
        default: {
            // t = 1/x; t^(2g+2) f(1/t) is the reversed polynomial, constant 1
            std::vector<Padic> rev(c.f.c.rbegin(), c.f.c.rend());
            PadicSeries fr(p, 1);
            fr.c = std::move(rev);
            if (fr.order() > M) fr.c.resize(M);
            fr.coeff_floor = 0;
            fr.tail_val = PadicSeries::PLUS_INF;
            ch.S = series_sqrt(fr, Padic::from_integer(1, c.pol), M);
            ch.inf_sign = d.kind == ResidueDisc::Kind::InfPlus ? +1 : -1;
            break;
        }
    }
    return ch;
}

// parameter of a point inside a disc
inline Padic parameter_of_point(const LocalChart& ch, const CurvePoint& P) {
    switch (ch.disc.kind) {
        case ResidueDisc::Kind::Affine:
            return P.x - ch.disc.center.x;
        case ResidueDisc::Kind::Weierstrass:
            return P.y;
        default:
            return P.x.inverse();
    }
}

inline CurvePoint point_at_parameter(const LocalChart& ch, const Padic& z) {
    switch (ch.disc.kind) {
        case ResidueDisc::Kind::Affine:
            return CurvePoint::affine(ch.disc.center.x + z, ch.ys.eval(z));
        case ResidueDisc::Kind::Weierstrass:
            return CurvePoint::affine(ch.xs.eval(z), z);
        default: {
            if (z.is_zero()) return CurvePoint::infinity(ch.inf_sign);
            // y = sign * S(t) / t^(g+1)
            Padic x = z.inverse();
            Padic y = ch.S.eval(z) * z.pow(-(ch.genus + 1));
            if (ch.inf_sign < 0) y = -y;
            return CurvePoint::affine(x, y);
        }
    }
}

// ----- integral point search -----

struct SearchConfig {
    mpz_class bound = 100;
    std::vector<long> prescreen_primes = {3, 5, 7, 11};
};

inline std::vector<IntegerPoint> point_search(const CurveModel& m, const SearchConfig& cfg) {
    if (!m.field.is_rational()) throw InputError("point_search: use point_search_ok over K");
    ZPoly f = m.f_integer();
    // per-prime admissible residues (f(r) a square or 0 mod q)
    std::vector<std::pair<long, std::vector<bool>>> screens;
    for (long q : cfg.prescreen_primes) {
        if (q == 2) continue;
        std::vector<bool> ok(q, false);
        FqPoly fq = fq_reduce(f.c, q);
        bool all = true;
        for (long r = 0; r < q; ++r) {
            mpz_class v = fq_eval(fq, r, q);
            ok[r] = (v == 0) || is_square_mod(v.get_si(), q);
            all = all && ok[r];
        }
        if (!all) screens.emplace_back(q, std::move(ok));
    }
    std::vector<IntegerPoint> out;
    for (mpz_class x = -cfg.bound; x <= cfg.bound; ++x) {
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
    return out;
}

// search over O_K = Z[w]: |sigma_i(x)| <= B for both embeddings
inline std::vector<OKPoint> point_search_ok(const CurveModel& m, const mpz_class& bound) {
    if (m.field.is_rational()) throw InputError("point_search_ok: curve is over Q");
    long D = m.field.disc;
    std::vector<OKPoint> out;
    double sq = std::sqrt(static_cast<double>(D));
    long bmax = static_cast<long>(mpz_get_d(bound.get_mpz_t()) / sq) + 1;
    for (mpz_class a = -bound; a <= bound; ++a) {
        for (long b = -bmax; b <= bmax; ++b) {
            // |a + b sqrt(D)| <= B and |a - b sqrt(D)| <= B
            double av = mpz_get_d(a.get_mpz_t());
            if (std::abs(av + b * sq) > mpz_get_d(bound.get_mpz_t()) + 0.5 ||
                std::abs(av - b * sq) > mpz_get_d(bound.get_mpz_t()) + 0.5)
                continue;
            QuadRat x(Rat(a), Rat(b), D);
            QuadRat v = m.f.eval(x);
            // v = c + d w must be a square (s + t w)^2: s^2 + D t^2 = c, 2 s t = d
            if (v.a.get_den() != 1 || v.b.get_den() != 1) continue;
            mpz_class cc = v.a.get_num(), dd = v.b.get_num();
            if (v.is_zero()) {
                out.push_back({x, QuadRat(0)});
                continue;
            }
            if (dd % 2 != 0) continue;
            mpz_class half = dd / 2;
            bool found = false;
            if (dd == 0) {
                mpz_class r, rem;
                if (cc >= 0) {
                    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), cc.get_mpz_t());
                    if (rem == 0) {
                        out.push_back({x, QuadRat(Rat(r), Rat(0), D)});
                        if (r != 0) out.push_back({x, QuadRat(Rat(-r), Rat(0), D)});
                        found = true;
                    }
                }
                if (!found && cc % D == 0) {
                    mpz_class q = cc / D, r2, rem2;
                    if (q >= 0) {
                        mpz_sqrtrem(r2.get_mpz_t(), rem2.get_mpz_t(), q.get_mpz_t());
                        if (rem2 == 0 && r2 != 0) {
                            out.push_back({x, QuadRat(Rat(0), Rat(r2), D)});
                            out.push_back({x, QuadRat(Rat(0), Rat(-r2), D)});
                        }
                    }
                }
            } else {
                // y = s + t w with 2 s t = dd, s^2 + D t^2 = cc; take t > 0
                for (mpz_class t = 1; t * t * D <= cc; ++t) {
                    if (half % t != 0) continue;
                    mpz_class s = half / t;
                    if (s * s + D * t * t == cc) {
                        out.push_back({x, QuadRat(Rat(s), Rat(t), D)});
                        out.push_back({x, QuadRat(Rat(-s), Rat(-t), D)});
                        break;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace evenqc
