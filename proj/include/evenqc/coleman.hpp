#pragma once

#include <map>
#include <vector>

#include "evenqc/frobenius.hpp"

namespace evenqc {

struct IntegralVector {
    std::vector<Padic> values;  // indexed by omega_0..omega_2g
    CurvePoint from, to;
};

// Coleman integration context: caches charts, pullbacks and anchor points per
// residue disc of one embedded curve.
class ColemanIntegrator {
  public:
    ColemanIntegrator(const CohomologyData& coh, long truncation)
        : coh_(coh), M_(truncation) {
        discs_ = enumerate_discs(coh_.curve);
    }

    const PadicCurve& curve() const { return coh_.curve; }
    const CohomologyData& cohomology() const { return coh_; }
    long truncation() const { return M_; }
    long disc_count() const { return static_cast<long>(discs_.size()); }

    // re-center a disc (e.g. at a known integral point) before any chart of
    // it has been built
    void override_center(long disc_idx, const CurvePoint& P) {
        if (charts_.count(disc_idx))
            throw InputError("override_center: chart already built for this disc");
        if (!point_in_disc(P, discs_[disc_idx], coh_.curve.p))
            throw InputError("override_center: point not in the disc");
        discs_[disc_idx].center = P;
    }

    long disc_index_of(const CurvePoint& P) const {
        if (P.at_infinity() || (!P.x.is_zero() && P.x.valuation() < 0))
            throw InputError("coleman: endpoints in infinite discs are not supported");
        long p = coh_.curve.p;
        long xb = P.x.is_zero() ? 0 : mpz_class(P.x.residue(1)).get_si();
        if (coh_.curve.fbar_eval(xb) == 0) {
            for (size_t i = 0; i < discs_.size(); ++i)
                if (discs_[i].kind == ResidueDisc::Kind::Weierstrass && discs_[i].xbar == xb)
                    return static_cast<long>(i);
            throw InputError("coleman: Weierstrass disc not found");
        }
        if (P.y.is_zero()) throw PrecisionError("coleman: y indistinguishable from zero");
        long yb = mpz_class(P.y.residue(1)).get_si();
        for (size_t i = 0; i < discs_.size(); ++i)
            if (discs_[i].kind == ResidueDisc::Kind::Affine && discs_[i].xbar == xb &&
                discs_[i].ybar == yb)
                return static_cast<long>(i);
        throw InputError("coleman: point not on the curve reduction");
    }

    const ResidueDisc& disc(long i) const { return discs_[i]; }

    const LocalChart& chart(long disc_idx) {
        auto it = charts_.find(disc_idx);
        if (it == charts_.end())
            it = charts_.emplace(disc_idx, local_expansion(discs_[disc_idx], coh_.curve, M_))
                     .first;
        return it->second;
    }

    // pullback of omega_i through the chart, as a series in the disc parameter
    const PadicSeries& pullback(long disc_idx, long i) {
        auto key = std::make_pair(disc_idx, i);
        auto it = pullbacks_.find(key);
        if (it != pullbacks_.end()) return it->second;
        const LocalChart& ch = chart(disc_idx);
        const PadicCurve& c = coh_.curve;
        PadicSeries s;
        switch (ch.disc.kind) {
            case ResidueDisc::Kind::Affine: {
                // x(t)^i / y(t)
                PadicSeries xi = power_of_x(disc_idx, i);
                s = PadicSeries::mul(xi, inv_y(disc_idx), M_);
                break;
            }
            case ResidueDisc::Kind::Weierstrass: {
                // omega_i = 2 x(t)^i / f'(x(t)) dt in the t = y chart
                PadicSeries xi = power_of_x(disc_idx, i);
                s = PadicSeries::mul(xi, w_factor(disc_idx), M_);
                break;
            }
            default: {
                if (i >= c.genus)
                    throw InputError("coleman: omega_i has a pole on the infinite disc");
                // -+ t^{g-1-i} / S(t)
                PadicSeries sinv = inf_sinv(disc_idx);
                PadicSeries shifted(c.p, 1);
                shifted.c.assign(c.genus - 1 - i, Padic::exact_zero(c.p));
                shifted.c.insert(shifted.c.end(), sinv.c.begin(), sinv.c.end());
                if (shifted.order() > M_) shifted.c.resize(M_);
                shifted.coeff_floor = 0;
                shifted.tail_val = M_;
                s = (ch.inf_sign > 0)
                        ? -shifted
                        : shifted;
                break;
            }
        }
        return pullbacks_.emplace(key, std::move(s)).first->second;
    }

    // antiderivative of the pullback with zero constant term
    const PadicSeries& primitive(long disc_idx, long i) {
        auto key = std::make_pair(disc_idx, i);
        auto it = primitives_.find(key);
        if (it != primitives_.end()) return it->second;
        PadicSeries F = pullback(disc_idx, i).integrate();
        return primitives_.emplace(key, std::move(F)).first->second;
    }

    // tiny integral of omega_i between two parameters of one disc
    Padic tiny_integral(long disc_idx, long i, const Padic& z1, const Padic& z2) {
        const PadicSeries& F = primitive(disc_idx, i);
        return F.eval(z2) - F.eval(z1);
    }

    // anchor of a disc: the Teichmueller point (non-Weierstrass) or the
    // Weierstrass point itself
    const CurvePoint& anchor(long disc_idx) {
        auto it = anchors_.find(disc_idx);
        if (it != anchors_.end()) return it->second;
        const ResidueDisc& d = discs_[disc_idx];
        const PadicCurve& c = coh_.curve;
        CurvePoint A;
        if (d.kind == ResidueDisc::Kind::Weierstrass) {
            A = d.center;  // y = 0 point
        } else {
            PrecisionPolicy internal(c.p, coh_.internal_digits);
            Padic xt = d.xbar == 0 ? Padic::exact_zero(c.p) : teichmuller(d.xbar, internal);
            auto y = padic_sqrt(c.f.eval(xt));
            if (!y) throw PrecisionError("coleman: no Teichmueller point in disc");
            Padic yt = *y;
            if (mpz_class(yt.residue(1)).get_si() != d.ybar) yt = -yt;
            A = CurvePoint::affine(xt, yt);
        }
        return anchors_.emplace(disc_idx, std::move(A)).first->second;
    }

    // full Coleman integral vector between good affine points
    IntegralVector integrate(const CurvePoint& P, const CurvePoint& Q) {
        long n = 2 * coh_.curve.genus + 1;
        IntegralVector out;
        out.from = P;
        out.to = Q;
        out.values.assign(n, Padic::exact_zero(coh_.curve.p));

        bool pw = P.weierstrass, qw = Q.weierstrass;
        if (pw && qw) return out;  // odd differentials integrate to 0
        if (pw) {
            // int_{w0}^{Q} = (1/2) int_{iota Q}^{Q}
            IntegralVector half = integrate(Q.involution(), Q);
            Padic two_inv =
                Padic::from_integer(2, PrecisionPolicy(coh_.curve.p, coh_.internal_digits))
                    .inverse();
            for (long i = 0; i < n; ++i) out.values[i] = two_inv * half.values[i];
            return out;
        }
        if (qw) {
            IntegralVector rev = integrate(Q, P);
            for (long i = 0; i < n; ++i) out.values[i] = -rev.values[i];
            return out;
        }

        long dp = disc_index_of(P), dq = disc_index_of(Q);
        const LocalChart& chp = chart(dp);
        const LocalChart& chq = chart(dq);
        if (dp == dq) {
            Padic z1 = parameter_of_point(chp, P), z2 = parameter_of_point(chp, Q);
            for (long i = 0; i < n; ++i) out.values[i] = tiny_integral(dp, i, z1, z2);
            return cap(out);
        }
        const CurvePoint& A = anchor(dp);
        const CurvePoint& B = anchor(dq);
        std::vector<Padic> mid = anchor_to_anchor(dp, dq);
        Padic zP = parameter_of_point(chp, P), zA = parameter_of_point(chp, A);
        Padic zB = parameter_of_point(chq, B), zQ = parameter_of_point(chq, Q);
        for (long i = 0; i < n; ++i) {
            Padic head = tiny_integral(dp, i, zP, zA);
            Padic tail = tiny_integral(dq, i, zB, zQ);
            out.values[i] = head + mid[i] + tail;
        }
        return cap(out);
    }

    // multiplicity-weighted integral over a degree-zero divisor
    IntegralVector integrate_divisor(const std::vector<std::pair<CurvePoint, long>>& divisor) {
        long n = 2 * coh_.curve.genus + 1;
        long deg = 0;
        for (auto& [P, m] : divisor) deg += m;
        if (deg != 0) throw InputError("integrate_divisor: divisor has nonzero degree");
        IntegralVector out;
        out.values.assign(n, Padic::exact_zero(coh_.curve.p));
        if (divisor.empty()) return out;
        const CurvePoint& base = divisor.front().first;
        for (auto& [P, m] : divisor) {
            if (m == 0) continue;
            IntegralVector part = integrate(base, P);
            Padic mult = Padic::from_integer(
                m, PrecisionPolicy(coh_.curve.p, coh_.internal_digits));
            for (long i = 0; i < n; ++i)
                out.values[i] = out.values[i] + mult * part.values[i];
        }
        return out;
    }

    // residual of the Frobenius linear system for diagnostics
    Padic frobenius_residual(long dp, long dq) {
        auto v = anchor_to_anchor(dp, dq);
        auto c = correction(dp, dq);
        long n = 2 * coh_.curve.genus + 1;
        Padic worst = Padic::zero_to(coh_.curve.p, 1L << 30);
        for (long i = 0; i < n; ++i) {
            // v_i = sum_j phi_{ji} v_j + c_i
            Padic acc = c[i] - v[i];
            for (long j = 0; j < n; ++j) acc = acc + coh_.phi(j, i) * v[j];
            if (acc.valuation_bound() < worst.valuation_bound()) worst = acc;
        }
        return worst;
    }

  private:
    IntegralVector& cap(IntegralVector& v) {
        for (auto& x : v.values) x = x.with_absprec_capped(coh_.tail_cap);
        return v;
    }
    IntegralVector cap(IntegralVector&& v) {
        cap(v);
        return std::move(v);
    }

    PadicSeries power_of_x(long disc_idx, long i) {
        const LocalChart& ch = chart(disc_idx);
        PadicSeries r(coh_.curve.p, 1);
        r.c = {Padic::from_integer(1, PrecisionPolicy(coh_.curve.p, coh_.internal_digits))};
        r.coeff_floor = 0;
        r.tail_val = PadicSeries::PLUS_INF;
        for (long e = 0; e < i; ++e) r = PadicSeries::mul(r, ch.xs, M_);
        return r;
    }

    const PadicSeries& inv_y(long disc_idx) {
        auto it = invy_.find(disc_idx);
        if (it == invy_.end())
            it = invy_.emplace(disc_idx, series_inverse(chart(disc_idx).ys, M_)).first;
        return it->second;
    }

    // 2 / f'(x(t)) for Weierstrass charts
    const PadicSeries& w_factor(long disc_idx) {
        auto it = wfac_.find(disc_idx);
        if (it == wfac_.end()) {
            PadicSeries dfx =
                eval_poly_series(coh_.curve.f.derivative(), chart(disc_idx).xs, M_);
            PadicSeries inv = series_inverse(dfx, M_);
            Padic two =
                Padic::from_integer(2, PrecisionPolicy(coh_.curve.p, coh_.internal_digits));
            it = wfac_.emplace(disc_idx, two * inv).first;
        }
        return it->second;
    }

    const PadicSeries& inf_sinv(long disc_idx) {
        auto it = sinv_.find(disc_idx);
        if (it == sinv_.end())
            it = sinv_.emplace(disc_idx, series_inverse(chart(disc_idx).S, M_)).first;
        return it->second;
    }

    // H_m evaluated at a point (x, y) with y a unit
    std::vector<Padic> eval_h(const CurvePoint& P) {
        long n = 2 * coh_.curve.genus + 1;
        std::vector<Padic> out(n, Padic::exact_zero(coh_.curve.p));
        for (long i = 0; i < n; ++i) {
            Padic acc = Padic::exact_zero(coh_.curve.p);
            for (const HTerm& t : coh_.h[i]) {
                Padic val = t.poly.eval(P.x);
                acc = acc + val * P.y.pow(t.ypow);
            }
            out[i] = acc;
        }
        return out;
    }

    std::vector<Padic> correction(long dp, long dq) {
        auto hp = eval_h(anchor(dp));
        auto hq = eval_h(anchor(dq));
        long n = 2 * coh_.curve.genus + 1;
        std::vector<Padic> c(n);
        for (long i = 0; i < n; ++i) c[i] = hq[i] - hp[i];
        return c;
    }

    // int from anchor(dp) to anchor(dq) of all omega_i, by the Frobenius
    // linear system (phi^T - 1) v = -c between Frobenius-fixed anchors
    std::vector<Padic> anchor_to_anchor(long dp, long dq) {
        auto key = std::make_pair(dp, dq);
        auto it = anchor_ints_.find(key);
        if (it != anchor_ints_.end()) return it->second;
        long n = 2 * coh_.curve.genus + 1, p = coh_.curve.p;
        std::vector<Padic> result(n, Padic::exact_zero(p));
        const ResidueDisc& Dp = discs_[dp];
        const ResidueDisc& Dq = discs_[dq];
        if (dp == dq) {
            anchor_ints_.emplace(key, result);
            return result;
        }
        bool pw = Dp.kind == ResidueDisc::Kind::Weierstrass;
        bool qw = Dq.kind == ResidueDisc::Kind::Weierstrass;
        if (pw && qw) {
            anchor_ints_.emplace(key, result);
            return result;
        }
        if (pw || qw) {
            // int_{w0}^{T} = (1/2) int_{iota T}^{T}; iota T is the anchor of
            // the conjugate disc
            long dt = pw ? dq : dp;
            long dit = conjugate_disc(dt);
            std::vector<Padic> full = anchor_to_anchor(dit, dt);
            Padic half =
                Padic::from_integer(2, PrecisionPolicy(p, coh_.internal_digits)).inverse();
            for (long i = 0; i < n; ++i) result[i] = half * full[i];
            if (qw)
                for (long i = 0; i < n; ++i) result[i] = -result[i];
            anchor_ints_.emplace(key, result);
            return result;
        }
        PMat A(n, n), rhs(n, 1);
        auto c = correction(dp, dq);
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                A(i, j) = coh_.phi(j, i);  // phi^T
                if (i == j)
                    A(i, j) = A(i, j) - Padic::from_integer(1, PrecisionPolicy(
                                                                   p, coh_.internal_digits));
            }
            rhs(i, 0) = -c[i];
        }
        PMat v = padic_solve(A, rhs);
        for (long i = 0; i < n; ++i) result[i] = v(i, 0);
        anchor_ints_.emplace(key, result);
        return result;
    }

    long conjugate_disc(long idx) const {
        const ResidueDisc& d = discs_[idx];
        for (size_t i = 0; i < discs_.size(); ++i)
            if (discs_[i].kind == d.kind && discs_[i].xbar == d.xbar &&
                discs_[i].ybar == (coh_.curve.p - d.ybar) % coh_.curve.p)
                return static_cast<long>(i);
        throw InputError("coleman: conjugate disc not found");
    }

    const CohomologyData& coh_;
    long M_;
    std::vector<ResidueDisc> discs_;
    std::map<long, LocalChart> charts_;
    std::map<long, CurvePoint> anchors_;
    std::map<std::pair<long, long>, PadicSeries> pullbacks_, primitives_;
    std::map<long, PadicSeries> invy_, wfac_, sinv_;
    std::map<std::pair<long, long>, std::vector<Padic>> anchor_ints_;
};

}  // namespace evenqc
