#pragma once

#include <vector>

#include "evenqc/padic.hpp"
#include "evenqc/rationals.hpp"

namespace evenqc {

template <class T>
struct Mat {
    long rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(long r, long c) : rows(r), cols(c), a(r * c, T{}) {}

    T& operator()(long i, long j) { return a[i * cols + j]; }
    const T& operator()(long i, long j) const { return a[i * cols + j]; }

    static Mat identity(long n) {
        Mat m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    Mat transpose() const {
        Mat m(cols, rows);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw InputError("Mat: dimension mismatch");
        Mat m(x.rows, y.cols);
        for (long i = 0; i < x.rows; ++i)
            for (long k = 0; k < x.cols; ++k) {
                const T& s = x(i, k);
                for (long j = 0; j < y.cols; ++j) m(i, j) = m(i, j) + s * y(k, j);
            }
        return m;
    }
    friend Mat operator+(const Mat& x, const Mat& y) {
        Mat m(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
        return m;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        Mat m(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] - y.a[i];
        return m;
    }
};

using QMat = Mat<Rat>;
using PMat = Mat<Padic>;

// ---------- exact rational linear algebra ----------

// reduced row echelon form in place; returns pivot columns
inline std::vector<long> rref(QMat& m) {
    std::vector<long> pivots;
    long r = 0;
    for (long c = 0; c < m.cols && r < m.rows; ++c) {
        long piv = -1;
        for (long i = r; i < m.rows; ++i)
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (long j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
        Rat inv = 1 / m(r, c);
        for (long j = 0; j < m.cols; ++j) m(r, j) *= inv;
        for (long i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat s = m(i, c);
            for (long j = 0; j < m.cols; ++j) m(i, j) -= s * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline long rank(QMat m) { return static_cast<long>(rref(m).size()); }

// basis of the right kernel, as columns
inline std::vector<std::vector<Rat>> kernel(QMat m) {
    auto pivots = rref(m);
    std::vector<bool> ispiv(m.cols, false);
    for (long c : pivots) ispiv[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (long c = 0; c < m.cols; ++c) {
        if (ispiv[c]) continue;
        std::vector<Rat> v(m.cols, Rat(0));
        v[c] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline QMat inverse(const QMat& m) {
    if (m.rows != m.cols) throw InputError("inverse: not square");
    long n = m.rows;
    QMat aug(n, 2 * n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (static_cast<long>(piv.size()) != n || piv.back() != n - 1)
        throw InputError("inverse: singular matrix");
    QMat out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

// Moore-Penrose pseudoinverse of a symmetric rational matrix:
// A+ = B (B^T A B)^{-1} B^T for any basis B of col(A).
inline QMat pseudoinverse_symmetric(const QMat& A) {
    if (A.rows != A.cols) throw InputError("pseudoinverse: not square");
    long n = A.rows;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if (A(i, j) != A(j, i)) throw InputError("pseudoinverse: not symmetric");
    // column space basis: pivot columns of A
    QMat cp = A;
    auto piv = rref(cp);
    long r = static_cast<long>(piv.size());
    if (r == 0) return QMat(n, n);
    QMat B(n, r);
    for (long k = 0; k < r; ++k)
        for (long i = 0; i < n; ++i) B(i, k) = A(i, piv[k]);
    QMat Bt = B.transpose();
    QMat core = inverse(Bt * A * B);
    return B * core * Bt;
}

// ---------- p-adic linear algebra (valuation-pivoted Gauss) ----------

namespace detail {
inline long pivot_val(const Padic& x) { return x.is_zero() ? (1L << 40) : x.valuation(); }
}

// Solve M x = rhs (rhs may have several columns). Throws PrecisionError when a
// pivot cannot be distinguished from zero.
inline PMat padic_solve(PMat m, PMat rhs) {
    if (m.rows != m.cols || rhs.rows != m.rows) throw InputError("padic_solve: shape");
    long n = m.rows;
    for (long c = 0; c < n; ++c) {
        long piv = -1, best = (1L << 40);
        for (long i = c; i < n; ++i) {
            long v = detail::pivot_val(m(i, c));
            if (v < best) {
                best = v;
                piv = i;
            }
        }
        if (piv < 0 || m(piv, c).is_zero())
            throw PrecisionError("padic_solve: pivot indistinguishable from zero");
        for (long j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
        for (long j = 0; j < rhs.cols; ++j) std::swap(rhs(piv, j), rhs(c, j));
        Padic inv = m(c, c).inverse();
        for (long i = 0; i < n; ++i) {
            if (i == c || m(i, c).is_zero()) continue;
            Padic s = m(i, c) * inv;
            for (long j = c; j < n; ++j) m(i, j) = m(i, j) - s * m(c, j);
            for (long j = 0; j < rhs.cols; ++j) rhs(i, j) = rhs(i, j) - s * rhs(c, j);
        }
    }
    PMat x(n, rhs.cols);
    for (long i = 0; i < n; ++i) {
        Padic inv = m(i, i).inverse();
        for (long j = 0; j < rhs.cols; ++j) x(i, j) = rhs(i, j) * inv;
    }
    return x;
}

inline Padic padic_det(PMat m) {
    if (m.rows != m.cols) throw InputError("padic_det: not square");
    long n = m.rows;
    bool neg = false;
    Padic det;
    bool first = true;
    for (long c = 0; c < n; ++c) {
        long piv = -1, best = (1L << 40);
        for (long i = c; i < n; ++i) {
            long v = detail::pivot_val(m(i, c));
            if (v < best) {
                best = v;
                piv = i;
            }
        }
        if (piv < 0 || m(piv, c).is_zero()) {
            // determinant is zero to available precision
            long vb = 0;
            for (long i = c; i < n; ++i) vb = std::max(vb, m(i, c).abs_precision());
            return Padic::zero_to(m(0, 0).prime(), vb);
        }
        if (piv != c) {
            neg = !neg;
            for (long j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
        }
        Padic d = m(c, c);
        det = first ? d : det * d;
        first = false;
        Padic inv = d.inverse();
        for (long i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Padic s = m(i, c) * inv;
            for (long j = c; j < n; ++j) m(i, j) = m(i, j) - s * m(c, j);
        }
    }
    return neg ? -det : det;
}

// Right kernel basis of m, pivoting by valuation. A column whose entries are
// all precision-zero below `minval_tол` is treated as free.
inline std::vector<std::vector<Padic>> padic_kernel(PMat m, long zero_threshold) {
    long R = m.rows, C = m.cols;
    std::vector<long> pivot_of_col(C, -1);
    long r = 0;
    std::vector<long> pivots;
    for (long c = 0; c < C && r < R; ++c) {
        long piv = -1, best = (1L << 40);
        for (long i = r; i < R; ++i) {
            long v = detail::pivot_val(m(i, c));
            if (v < best) {
                best = v;
                piv = i;
            }
        }
        if (piv < 0 || best >= zero_threshold) continue;  // numerically-zero column
        for (long j = 0; j < C; ++j) std::swap(m(piv, j), m(r, j));
        Padic inv = m(r, c).inverse();
        for (long j = 0; j < C; ++j) m(r, j) = m(r, j) * inv;
        for (long i = 0; i < R; ++i) {
            if (i == r) continue;
            if (m(i, c).is_zero()) continue;
            Padic s = m(i, c);
            for (long j = 0; j < C; ++j) m(i, j) = m(i, j) - s * m(r, j);
        }
        pivot_of_col[c] = r;
        pivots.push_back(c);
        ++r;
    }
    std::vector<std::vector<Padic>> basis;
    long p = 0;
    for (auto& x : m.a)
        if (x.prime()) {
            p = x.prime();
            break;
        }
    for (long c = 0; c < C; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<Padic> v(C, Padic::exact_zero(p));
        v[c] = Padic::from_unit(p, 0, 1, zero_threshold);
        for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(k, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

// characteristic polynomial det(T - M) via evaluation at integer nodes and
// exact Lagrange interpolation (n is small here)
inline std::vector<Padic> padic_charpoly(const PMat& m, const PrecisionPolicy& pol) {
    if (m.rows != m.cols) throw InputError("charpoly: not square");
    long n = m.rows;
    std::vector<Padic> vals;
    for (long t = 0; t <= n; ++t) {
        PMat a(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                a(i, j) = -m(i, j);
                if (i == j) a(i, j) = a(i, j) + Padic::from_integer(t, pol);
            }
        vals.push_back(padic_det(a));
    }
    // Lagrange interpolation with exact rational weights
    std::vector<Padic> coeffs(n + 1, Padic::exact_zero(pol.prime));
    for (long i = 0; i <= n; ++i) {
        // numerator poly prod_{j != i} (X - j), denominator prod_{j != i} (i - j)
        std::vector<Rat> numer{1};
        mpz_class den = 1;
        for (long j = 0; j <= n; ++j) {
            if (j == i) continue;
            std::vector<Rat> next(numer.size() + 1, Rat(0));
            for (size_t k = 0; k < numer.size(); ++k) {
                next[k + 1] += numer[k];
                next[k] -= Rat(j) * numer[k];
            }
            numer = std::move(next);
            den *= (i - j);
        }
        Padic w = vals[i] / Padic::from_integer(den, pol);
        for (size_t k = 0; k < numer.size(); ++k)
            coeffs[k] = coeffs[k] + w * Padic::from_rational(numer[k], pol);
    }
    return coeffs;  // constant term first
}

}  // namespace evenqc
