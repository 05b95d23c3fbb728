#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

#include "beamvi/errors.hpp"

namespace beamvi {

/// Symmetric band matrix stored as its lower band.
///
/// Column j of the packed array holds A(j, j), A(j+1, j), ..., A(j+b, j), so
/// entry (d, j) is A(j+d, j). Only the lower triangle is stored, which makes
/// the represented matrix symmetric by construction.
template <typename Scalar>
class BandedSpd {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BandedSpd() = default;

    BandedSpd(Eigen::Index n, Eigen::Index half_bandwidth)
        : n_(n), b_(half_bandwidth), band_(Dense::Zero(half_bandwidth + 1, n)) {
        if (n < 0 || half_bandwidth < 0) {
            throw std::invalid_argument("BandedSpd: negative dimension or bandwidth");
        }
    }

    /// Packs the lower band of a dense symmetric matrix. Entries outside the
    /// band must be zero.
    static BandedSpd from_dense(const Dense& a, Eigen::Index half_bandwidth) {
        if (a.rows() != a.cols()) throw std::invalid_argument("from_dense: matrix not square");
        BandedSpd out(a.rows(), half_bandwidth);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index i = j; i < a.rows(); ++i) {
                if (i - j <= half_bandwidth) {
                    out.band_(i - j, j) = a(i, j);
                } else if (a(i, j) != Scalar(0)) {
                    throw std::invalid_argument("from_dense: nonzero entry outside the band");
                }
            }
        }
        return out;
    }

    Eigen::Index size() const noexcept { return n_; }
    Eigen::Index half_bandwidth() const noexcept { return b_; }
    const Dense& band() const noexcept { return band_; }

    Scalar operator()(Eigen::Index i, Eigen::Index j) const {
        if (i < j) std::swap(i, j);
        return (i - j > b_) ? Scalar(0) : band_(i - j, j);
    }

    /// Adds v to A(i, j) (and implicitly to A(j, i)).
    void add(Eigen::Index i, Eigen::Index j, const Scalar& v) {
        if (i < j) std::swap(i, j);
        if (i - j > b_) throw std::out_of_range("BandedSpd::add outside the band");
        band_(i - j, j) += v;
    }

    Vector operator*(const Vector& x) const {
        if (x.size() != n_) throw std::invalid_argument("BandedSpd: dimension mismatch");
        Vector y = Vector::Zero(n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            y(j) += band_(0, j) * x(j);
            const Eigen::Index last = std::min(n_ - 1, j + b_);
            for (Eigen::Index i = j + 1; i <= last; ++i) {
                const Scalar a = band_(i - j, j);
                y(i) += a * x(j);
                y(j) += a * x(i);
            }
        }
        return y;
    }

    Dense to_dense() const {
        Dense a = Dense::Zero(n_, n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            const Eigen::Index last = std::min(n_ - 1, j + b_);
            for (Eigen::Index i = j; i <= last; ++i) {
                a(i, j) = band_(i - j, j);
                a(j, i) = band_(i - j, j);
            }
        }
        return a;
    }

    /// x^T A y
    Scalar bilinear(const Vector& x, const Vector& y) const { return x.dot((*this) * y); }

    Scalar max_abs() const { return band_.size() == 0 ? Scalar(0) : band_.cwiseAbs().maxCoeff(); }

    /// Copy with row and column c deleted.
    BandedSpd without(Eigen::Index c) const {
        if (c < 0 || c >= n_) throw std::out_of_range("BandedSpd::without");
        BandedSpd out(n_ - 1, b_);
        auto map = [c](Eigen::Index k) { return k < c ? k : k - 1; };
        for (Eigen::Index j = 0; j < n_; ++j) {
            if (j == c) continue;
            const Eigen::Index last = std::min(n_ - 1, j + b_);
            for (Eigen::Index i = j; i <= last; ++i) {
                if (i == c) continue;
                out.band_(map(i) - map(j), map(j)) = band_(i - j, j);
            }
        }
        return out;
    }

private:
    Eigen::Index n_ = 0;
    Eigen::Index b_ = 0;
    Dense band_;
};

/// a + s * b for two band matrices of equal size.
template <typename Scalar>
BandedSpd<Scalar> combine(const BandedSpd<Scalar>& a, const Scalar& s, const BandedSpd<Scalar>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("combine: dimension mismatch");
    const Eigen::Index bw = std::max(a.half_bandwidth(), b.half_bandwidth());
    BandedSpd<Scalar> out(a.size(), bw);
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const Eigen::Index last = std::min(a.size() - 1, j + bw);
        for (Eigen::Index i = j; i <= last; ++i) out.add(i, j, a(i, j) + s * b(i, j));
    }
    return out;
}

/// Banded Cholesky factor L with L L^T = A, stored in the same packed layout.
template <typename Scalar>
class BandedCholesky {
public:
    using Vector = typename BandedSpd<Scalar>::Vector;
    using Dense = typename BandedSpd<Scalar>::Dense;

    BandedCholesky() = default;

    explicit BandedCholesky(const BandedSpd<Scalar>& a) : n_(a.size()), b_(a.half_bandwidth()), l_(a.band()) {
        using std::sqrt;
        for (Eigen::Index j = 0; j < n_; ++j) {
            Scalar d = l_(0, j);
            for (Eigen::Index k = std::max<Eigen::Index>(0, j - b_); k < j; ++k) {
                const Scalar ljk = l_(j - k, k);
                d -= ljk * ljk;
            }
            if (!(d > Scalar(0))) throw NotPositiveDefinite(static_cast<std::size_t>(j));
            const Scalar ljj = sqrt(d);
            l_(0, j) = ljj;
            const Eigen::Index last = std::min(n_ - 1, j + b_);
            for (Eigen::Index i = j + 1; i <= last; ++i) {
                Scalar s = l_(i - j, j);
                for (Eigen::Index k = std::max<Eigen::Index>(0, i - b_); k < j; ++k) {
                    s -= l_(i - k, k) * l_(j - k, k);
                }
                l_(i - j, j) = s / ljj;
            }
        }
    }

    Eigen::Index size() const noexcept { return n_; }

    Vector solve(const Vector& rhs) const {
        if (rhs.size() != n_) throw std::invalid_argument("BandedCholesky::solve: dimension mismatch");
        Vector x = rhs;
        for (Eigen::Index i = 0; i < n_; ++i) {
            Scalar s = x(i);
            for (Eigen::Index k = std::max<Eigen::Index>(0, i - b_); k < i; ++k) s -= l_(i - k, k) * x(k);
            x(i) = s / l_(0, i);
        }
        for (Eigen::Index i = n_ - 1; i >= 0; --i) {
            Scalar s = x(i);
            const Eigen::Index last = std::min(n_ - 1, i + b_);
            for (Eigen::Index k = i + 1; k <= last; ++k) s -= l_(k - i, i) * x(k);
            x(i) = s / l_(0, i);
        }
        return x;
    }

    /// Dense lower-triangular factor.
    Dense matrix_l() const {
        Dense l = Dense::Zero(n_, n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            const Eigen::Index last = std::min(n_ - 1, j + b_);
            for (Eigen::Index i = j; i <= last; ++i) l(i, j) = l_(i - j, j);
        }
        return l;
    }

private:
    Eigen::Index n_ = 0;
    Eigen::Index b_ = 0;
    Dense l_;
};

template <typename Scalar>
BandedCholesky<Scalar> cholesky(const BandedSpd<Scalar>& a) {
    return BandedCholesky<Scalar>(a);
}

template <typename Scalar>
typename BandedCholesky<Scalar>::Vector solve(const BandedCholesky<Scalar>& factor,
                                              const typename BandedCholesky<Scalar>::Vector& rhs) {
    return factor.solve(rhs);
}

using BandedMatrix = BandedSpd<double>;
using Factor = BandedCholesky<double>;

}  // namespace beamvi
