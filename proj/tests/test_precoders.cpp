// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "iflab/integer_forcing.hpp"
#include "iflab/precoders.hpp"

using namespace iflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CMatrix random_channel(int r, int c, std::uint64_t id, double snr = 20.0)
{
    Engine eng = make_engine({61, id});
    return complex_gaussian(r, c, eng) * std::sqrt(snr);
}

double orthonormality_error(const RMatrix& m)
{
    return max_abs(RMatrix(m.transpose() * m) - RMatrix::Identity(m.cols(), m.cols()));
}

} // namespace

TEST_CASE("precoder maps have orthonormal columns")
{
    Engine eng = make_engine({62, 0});
    CHECK(orthonormality_error(identity_precoder(3, 2).map) < 1e-15);
    for (int n = 1; n <= 4; ++n)
        CHECK(orthonormality_error(cue_space(n, eng).map) < 1e-12);
    CHECK(orthonormality_error(cue_space_time(2, 3, eng).map) < 1e-12);
    CHECK(orthonormality_error(golden_code().map) < 1e-12);
    const auto [b1, b2] = badr_belfiore();
    CHECK(orthonormality_error(b1.map) < 1e-12);
    CHECK(orthonormality_error(b2.map) < 1e-12);
    const Precoder a = alamouti();
    CHECK(orthonormality_error(a.map) < 1e-15);
    CHECK_THAT(a.power_gain, WithinRel(std::sqrt(2.0), 1e-15));
    CHECK(a.map.rows() == 8);
    CHECK(a.n_symbols == 4);
}

TEST_CASE("Alamouti effective Gram is a scaled identity and IF-SIC attains the ML rate")
{
    const Precoder a = alamouti();
    for (int n_r : {1, 2, 3})
        for (std::uint64_t i = 0; i < 20; ++i) {
            const CMatrix h = random_channel(n_r, 2, 100 * n_r + i);
            const RMatrix he = apply_precoder(h, a);
            const RMatrix g = he.transpose() * he;
            const double f = h.squaredNorm();
            CHECK(max_abs(RMatrix(g - f * RMatrix::Identity(4, 4))) < 1e-9 * f);
            const double sic = if_sic_rate(he, a.t).rate_bits;
            CHECK_THAT(sic, WithinRel(std::log2(1 + f), 1e-9));
            CHECK_THAT(sic, WithinRel(ml_mac_rate_real(he, a.t), 1e-9));
        }
}

TEST_CASE("golden code: unitary generator and non-vanishing determinant")
{
    const CMatrix g = golden_generator();
    CHECK(max_abs(RMatrix((g.adjoint() * g - CMatrix::Identity(4, 4)).cwiseAbs())) < 1e-12);
    Engine eng = make_engine({63, 0});
    std::uniform_int_distribution<int> d(-3, 3);
    double min_det = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20000; ++trial) {
        CVector s(4);
        for (int i = 0; i < 4; ++i)
            s(i) = cplx(d(eng), d(eng));
        if (s.squaredNorm() == 0)
            continue;
        const CVector v = g * s; // column-major vec of the 2 x 2 codeword
        const cplx det = v(0) * v(3) - v(2) * v(1);
        min_det = std::min(min_det, std::norm(det));
    }
    CHECK(min_det >= 1.0 / 5.0 - 1e-9);
    // the minimum is attained by a single unit symbol
    CVector e = CVector::Zero(4);
    e(0) = 1.0;
    const CVector v = g * e;
    CHECK_THAT(std::norm(v(0) * v(3) - v(2) * v(1)), WithinAbs(0.2, 1e-12));
}

TEST_CASE("Badr-Belfiore maps")
{
    const double phi = std::numbers::phi;
    const cplx alpha(1.0, 1.0 - phi);
    CHECK_THAT(std::norm(alpha) * (1 + phi * phi), WithinRel(5.0, 1e-12));
    const auto [p1, p2] = badr_belfiore_matrices();
    CHECK(max_abs(RMatrix((p1.adjoint() * p1 - CMatrix::Identity(2, 2)).cwiseAbs())) < 1e-12);
    CHECK(max_abs(RMatrix((p2.adjoint() * p2 - CMatrix::Identity(2, 2)).cwiseAbs())) < 1e-12);
    CHECK(std::abs(p2(0, 0) - cplx(0, 1) * p1(0, 0)) < 1e-15);
    CHECK(std::abs(p2(1, 1) - p1(1, 1)) < 1e-15);
}

TEST_CASE("unitary precoding preserves white-input information")
{
    Engine eng = make_engine({64, 0});
    for (std::uint64_t i = 0; i < 30; ++i) {
        const CMatrix h = random_channel(2, 2, i);
        const double c = wi_capacity(h);
        for (const Precoder& p : {identity_precoder(2), cue_space(2, eng), cue_space_time(2, 2, eng), golden_code()}) {
            const RMatrix he = apply_precoder(h, p);
            const RMatrix m = RMatrix::Identity(he.cols(), he.cols()) + he.transpose() * he;
            CHECK_THAT(0.5 * std::log2(m.determinant()), WithinRel(p.t * c, 1e-9));
        }
    }
}

TEST_CASE("labels and construction guards")
{
    for (auto l : {PrecoderLabel::none, PrecoderLabel::cue, PrecoderLabel::cue_st, PrecoderLabel::alamouti,
                   PrecoderLabel::golden, PrecoderLabel::badr_belfiore})
        CHECK(parse_precoder_label(to_string(l)) == l);
    CHECK_THROWS_AS(parse_precoder_label("dft"), domain_error);
    CHECK(precoder_time_extension(PrecoderLabel::cue_st, 3) == 3);
    CHECK(precoder_time_extension(PrecoderLabel::golden, 3) == 2);
    CHECK(precoder_time_extension(PrecoderLabel::cue, 3) == 1);
    Engine eng = make_engine({65, 0});
    CHECK_THROWS_AS(make_precoder(PrecoderLabel::badr_belfiore, 2, 2, eng), domain_error);
    CHECK_THROWS_AS(make_precoder(PrecoderLabel::alamouti, 3, 2, eng), domain_error);
    CHECK(make_precoder(PrecoderLabel::cue_st, 2, 3, eng).t == 3);
    CHECK_THROWS_AS(apply_precoder(random_channel(2, 3, 0), golden_code()), shape_error);
    CHECK_THROWS_AS(identity_precoder(0), domain_error);
}

TEST_CASE("CUE precoders are reproducible per seed")
{
    const Precoder a = cue_space_time(2, 2, RngSeed{66, 3});
    const Precoder b = cue_space_time(2, 2, RngSeed{66, 3});
    const Precoder c = cue_space_time(2, 2, RngSeed{66, 4});
    CHECK(a.map == b.map);
    CHECK(a.map != c.map);
}
