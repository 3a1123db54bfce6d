// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Random-matrix ensembles: Haar (CUE) unitaries, the Jacobi ensemble and
// its density, entry-magnitude laws and capacity-conditioned sphere draws.
// Every sampler is a pure function of its parameters and an RngSeed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "iflab/errors.hpp"
#include "iflab/matrix_core.hpp"

namespace iflab {

// (seed, stream_id): one reproducible, independent stream per Monte Carlo trial.
inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// (seed, stream_id): one reproducible, independent stream per Monte Carlo trial.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    // derived stream, kept apart from the trial streams of the same seed
    RngSeed substream(std::uint64_t salt) const { return {seed ^ splitmix64(stream_id + 0x5bd1e995ULL * (salt + 1)), stream_id}; }
};

using Engine = std::mt19937_64;

// Single-word seeding keeps engine setup cheap (one engine per trial); the
// pair is hashed first so neighbouring stream ids land far apart.
inline Engine make_engine(RngSeed s) { return Engine(splitmix64(splitmix64(s.seed) ^ s.stream_id)); }

// Circularly-symmetric CN(0, 1) draws.
inline CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Engine& eng)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    CMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = nd(eng);
            const double im = nd(eng);
            g(i, j) = cplx(re, im);
        }
    return g;
}

struct JacobiSpec {
    int m1 = 1;
    int m2 = 1;
    int n = 1;

    void validate() const
    {
        if (n < 1 || m1 < n || m2 < n)
            throw domain_error("JacobiSpec: need n >= 1 and m1, m2 >= n");
    }
    friend bool operator==(const JacobiSpec&, const JacobiSpec&) = default;
};

struct UnitaryMatrix {
    CMatrix entries;
    int dim() const { return static_cast<int>(entries.rows()); }
};

// Haar unitary via QR of a Ginibre matrix. The phases of diag(R) are moved
// into Q (Q <- Q diag(r_jj / |r_jj|)) so the result is exactly Haar.
inline UnitaryMatrix sample_cue(int n, Engine& eng)
{
    if (n < 1)
        throw domain_error("sample_cue: n must be >= 1");
    const CMatrix z = complex_gaussian(n, n, eng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= mag > 0.0 ? d / mag : cplx(1.0, 0.0);
    }
    return {std::move(q)};
}

inline UnitaryMatrix sample_cue(int n, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return sample_cue(n, eng);
}

// Density of |U_11|^2 for an m x m Haar unitary: (m-1)(1-mu)^(m-2) on [0, 1].
inline double entry_sq_magnitude_pdf(double mu, int m)
{
    if (m < 2)
        throw domain_error("entry_sq_magnitude_pdf: m must be >= 2");
    if (mu < 0.0 || mu > 1.0)
        return 0.0;
    return (m - 1) * std::pow(1.0 - mu, m - 2);
}

// log of the Selberg normaliser
//   kappa = prod_j Gamma(m1-n+j) Gamma(m2-n+j) Gamma(1+j) / (Gamma(2) Gamma(m1+m2-n+j)),
// i.e. the integral of the unnormalised Jacobi weight over the unordered cube [0,1]^n.
inline double log_selberg_kappa(const JacobiSpec& spec)
{
    spec.validate();
    double s = 0.0;
    for (int j = 1; j <= spec.n; ++j) {
        s += std::lgamma(spec.m1 - spec.n + j) + std::lgamma(spec.m2 - spec.n + j) + std::lgamma(1.0 + j);
        s -= std::lgamma(2.0) + std::lgamma(spec.m1 + spec.m2 - spec.n + j);
    }
    return s;
}

inline double selberg_kappa(const JacobiSpec& spec)
{
    const double v = std::exp(log_selberg_kappa(spec));
    if (!std::isfinite(v) || v <= 0.0)
        throw domain_error("selberg_kappa: normaliser not representable as a double");
    return v;
}

// log of the symmetric Jacobi weight kappa^{-1} prod l^(m1-n) (1-l)^(m2-n) prod (l_i - l_j)^2.
// This integrates to one over the unordered cube; no ordering check.
inline double jacobi_symmetric_logpdf(const std::vector<double>& lambda, const JacobiSpec& spec)
{
    spec.validate();
    if (static_cast<int>(lambda.size()) != spec.n)
        throw shape_error("jacobi_logpdf: eigenvalue count does not match n");
    double s = -log_selberg_kappa(spec);
    const int a = spec.m1 - spec.n;
    const int b = spec.m2 - spec.n;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double l = lambda[i];
        if (l < 0.0 || l > 1.0)
            throw domain_error("jacobi_logpdf: eigenvalue outside [0, 1]");
        if (a > 0)
            s += a * std::log(l);
        if (b > 0)
            s += b * std::log1p(-l);
        for (std::size_t j = i + 1; j < lambda.size(); ++j)
            s += 2.0 * std::log(std::abs(lambda[j] - l));
    }
    return s;
}

// Log-density of the ordered eigenvalues 0 <= l_1 <= ... <= l_n <= 1 of J(m1, m2, n).
// The ordered vector carries the n! permutations of the symmetric weight.
inline double jacobi_logpdf(const std::vector<double>& lambda, const JacobiSpec& spec)
{
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0.0 || lambda[i] > 1.0)
            throw domain_error("jacobi_logpdf: eigenvalue outside [0, 1]");
        if (i > 0 && lambda[i] < lambda[i - 1])
            throw domain_error("jacobi_logpdf: eigenvalues must be ascending");
    }
    return jacobi_symmetric_logpdf(lambda, spec) + std::lgamma(spec.n + 1.0);
}

// Eigenvalues of A (A + B)^{-1}, A = G1^H G1 (G1: m1 x n), B = G2^H G2 (G2: m2 x n), ascending.
inline std::vector<double> sample_jacobi(const JacobiSpec& spec, Engine& eng)
{
    spec.validate();
    const CMatrix g1 = complex_gaussian(spec.m1, spec.n, eng);
    const CMatrix g2 = complex_gaussian(spec.m2, spec.n, eng);
    const CMatrix a = g1.adjoint() * g1;
    const CMatrix s = a + g2.adjoint() * g2;
    // (A+B)^{-1/2} A (A+B)^{-1/2} shares its spectrum with A (A+B)^{-1}
    Eigen::LLT<CMatrix> llt(s);
    const auto l = llt.matrixL();
    CMatrix m = l.solve(a);
    m = l.solve(CMatrix(m.adjoint())).adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i)
        out[static_cast<std::size_t>(i)] = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<double> sample_jacobi(const JacobiSpec& spec, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return sample_jacobi(spec, eng);
}

// Law of the squared singular values of a rows x cols block of a
// total_dim x total_dim Haar unitary, with total_dim = 2 * rows.
// For cols > rows the returned law describes the 2*rows - cols
// non-trivial values; the remaining ones sit at 0 and 1.
inline JacobiSpec submatrix_singular_spec(int total_dim, int rows, int cols)
{
    if (rows < 1 || total_dim != 2 * rows)
        throw domain_error("submatrix_singular_spec: expected total_dim = 2 * rows");
    if (cols < 1 || cols > total_dim)
        throw domain_error("submatrix_singular_spec: cols out of range [1, total_dim]");
    return {rows, rows, std::min(cols, total_dim - cols)};
}

// Complex vector of length n_t, Haar-uniform direction, squared norm exactly 2^c - 1.
// This is the law of an i.i.d. Rayleigh MAC channel conditioned on its sum capacity.
inline CVector sample_sphere_given_c(int n_t, double c, Engine& eng)
{
    if (n_t < 1)
        throw domain_error("sample_sphere_given_c: n_t must be >= 1");
    if (!(c >= 0.0))
        throw domain_error("sample_sphere_given_c: c must be >= 0");
    CVector g = complex_gaussian(n_t, 1, eng).col(0);
    const double nrm = g.norm();
    const double radius = std::sqrt(std::expm1(c * std::log(2.0)));
    return g * (radius / nrm);
}

inline CVector sample_sphere_given_c(int n_t, double c, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return sample_sphere_given_c(n_t, c, eng);
}

} // namespace iflab
