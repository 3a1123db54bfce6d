// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Small dense linear algebra used by every other module. All matrices in
// this library are tiny (<= 16 x 16), so everything is dense and dynamic.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "iflab/errors.hpp"

namespace iflab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Pivots at or below this value are treated as loss of definiteness.
inline constexpr double kCholeskyPivotFloor = 1e-12;

inline double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Lower-triangular L with m = L L^T.
//
// Throws definiteness_error when a pivot drops to kCholeskyPivotFloor or
// below, and shape_error for non-square or visibly asymmetric input.
inline RMatrix cholesky_lower(const RMatrix& m)
{
    if (m.rows() != m.cols())
        throw shape_error("cholesky_lower: matrix must be square");
    const Eigen::Index n = m.rows();
    const double scale = std::max(1.0, max_abs(m));
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw shape_error("cholesky_lower: matrix is not symmetric");

    RMatrix l = RMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            pivot -= l(j, k) * l(j, k);
        if (!(pivot > kCholeskyPivotFloor))
            throw definiteness_error("cholesky_lower: non-positive pivot at column " + std::to_string(j));
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / d;
        }
    }
    return l;
}

// Real representation [[Re H, -Im H], [Im H, Re H]] acting on [Re x; Im x].
inline RMatrix complex_to_real(const CMatrix& h)
{
    const Eigen::Index r = h.rows(), c = h.cols();
    RMatrix out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = h.real();
    out.topRightCorner(r, c) = -h.imag();
    out.bottomLeftCorner(r, c) = h.imag();
    out.bottomRightCorner(r, c) = h.real();
    return out;
}

// I_t (x) h : block diagonal with t copies of h (one block per channel use).
inline CMatrix time_extend(const CMatrix& h, int t)
{
    if (t < 1)
        throw domain_error("time_extend: t must be >= 1");
    const Eigen::Index r = h.rows(), c = h.cols();
    CMatrix out = CMatrix::Zero(r * t, c * t);
    for (int k = 0; k < t; ++k)
        out.block(k * r, k * c, r, c) = h;
    return out;
}

// log2 det(I + X) for Hermitian positive semidefinite X.
inline double log2det_identity_plus(const CMatrix& x)
{
    const Eigen::Index n = x.rows();
    CMatrix m = CMatrix::Identity(n, n) + x;
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw definiteness_error("log2det_identity_plus: I + X not positive definite");
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        s += std::log2(llt.matrixL()(i, i).real());
    return 2.0 * s;
}

inline double log2det_identity_plus(const RMatrix& x)
{
    const Eigen::Index n = x.rows();
    RMatrix m = RMatrix::Identity(n, n) + x;
    Eigen::LLT<RMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw definiteness_error("log2det_identity_plus: I + X not positive definite");
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        s += std::log2(llt.matrixL()(i, i));
    return 2.0 * s;
}

// White-input mutual information log2 det(I + H^H H), bits per complex channel use.
// Evaluated on the smaller of the two Gram matrices.
inline double wi_capacity(const CMatrix& h)
{
    if (h.size() == 0)
        return 0.0;
    if (h.cols() <= h.rows())
        return log2det_identity_plus(CMatrix(h.adjoint() * h));
    return log2det_identity_plus(CMatrix(h * h.adjoint()));
}

// Diagonal compound-channel member: d_ii = 1 + rho_i with sum log2(1 + rho_i) = C.
// Modes are stored strongest first, so rho.back() is the weakest.
struct CompoundChannel {
    int n_t = 2;
    double capacity_bits = 0.0;
    RVector rho;

    // n_t = 2 member parameterised by the weaker mode; rho1 follows from C.
    static CompoundChannel two_mode(double capacity_bits, double rho2)
    {
        const double rho2_max = std::exp2(capacity_bits / 2.0) - 1.0;
        if (!(rho2 >= 0.0) || rho2 > rho2_max * (1.0 + 1e-12) + 1e-12)
            throw domain_error("CompoundChannel: rho2 outside [0, 2^(C/2) - 1]");
        rho2 = std::min(rho2, rho2_max);
        CompoundChannel ch;
        ch.n_t = 2;
        ch.capacity_bits = capacity_bits;
        ch.rho.resize(2);
        ch.rho(1) = rho2;
        ch.rho(0) = std::max(std::exp2(capacity_bits) / (1.0 + rho2) - 1.0, rho2);
        return ch;
    }

    // n_weak modes at rho_weak, the remaining n_t - n_weak modes share what is left of C.
    static CompoundChannel two_level(int n_t, double capacity_bits, int n_weak, double rho_weak)
    {
        if (n_t < 1 || n_weak < 0 || n_weak >= n_t)
            throw domain_error("CompoundChannel: need 0 <= n_weak < n_t");
        const double rho_max = std::exp2(capacity_bits / n_t) - 1.0;
        if (!(rho_weak >= 0.0) || rho_weak > rho_max * (1.0 + 1e-12) + 1e-12)
            throw domain_error("CompoundChannel: weak-mode SNR outside [0, 2^(C/n_t) - 1]");
        rho_weak = std::min(rho_weak, rho_max);
        const double strong_bits = (capacity_bits - n_weak * std::log2(1.0 + rho_weak)) / (n_t - n_weak);
        CompoundChannel ch;
        ch.n_t = n_t;
        ch.capacity_bits = capacity_bits;
        ch.rho.resize(n_t);
        for (int i = 0; i < n_t; ++i)
            ch.rho(i) = i < n_t - n_weak ? std::max(std::exp2(strong_bits) - 1.0, rho_weak) : rho_weak;
        return ch;
    }

    // n_r x n_t matrix diag(sqrt(rho_i)) padded with zero rows.
    CMatrix matrix(int n_r) const
    {
        if (n_r < n_t)
            throw shape_error("CompoundChannel: n_r must be >= n_t for the diagonal representative");
        CMatrix h = CMatrix::Zero(n_r, n_t);
        for (int i = 0; i < n_t; ++i)
            h(i, i) = std::sqrt(rho(i));
        return h;
    }

    double mutual_information() const
    {
        double s = 0.0;
        for (Eigen::Index i = 0; i < rho.size(); ++i)
            s += std::log2(1.0 + rho(i));
        return s;
    }
};

} // namespace iflab
