// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Space and space-time precoders. Every precoder is carried as a real map
// from the real symbol vector [Re s; Im s] to the real transmit vector
// [Re x; Im x], where x stacks the N_t antenna samples of slot 1, then slot 2, ...

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "iflab/ensembles.hpp"
#include "iflab/errors.hpp"
#include "iflab/matrix_core.hpp"

namespace iflab {

enum class PrecoderKind { identity, cue_space, cue_space_time, fixed };

struct Precoder {
    PrecoderKind kind = PrecoderKind::identity;
    int n_t = 1;
    int t = 1;
    int n_symbols = 2;
    RMatrix map;       // (2 n_t t) x n_symbols, orthonormal columns
    std::string label;
    // Amplitude applied on transmission so each slot carries power n_t.
    // 1 for full-rate maps; sqrt(2 n_t t / n_symbols) for rate-deficient ones.
    double power_gain = 1.0;
};

namespace detail {

inline Precoder from_complex(PrecoderKind kind, int n_t, int t, const CMatrix& p, std::string label)
{
    Precoder out;
    out.kind = kind;
    out.n_t = n_t;
    out.t = t;
    out.map = complex_to_real(p);
    out.n_symbols = static_cast<int>(out.map.cols());
    out.label = std::move(label);
    return out;
}

inline constexpr double kGolden = std::numbers::phi;          // (1 + sqrt 5) / 2
inline constexpr double kGoldenConj = 1.0 - std::numbers::phi; // (1 - sqrt 5) / 2

inline cplx golden_alpha() { return {1.0, 1.0 - kGolden}; }
inline cplx golden_alpha_conj() { return {1.0, 1.0 - kGoldenConj}; }

} // namespace detail

inline Precoder identity_precoder(int n_t, int t = 1)
{
    if (n_t < 1 || t < 1)
        throw domain_error("identity_precoder: n_t and t must be >= 1");
    return detail::from_complex(PrecoderKind::identity, n_t, t, CMatrix::Identity(n_t * t, n_t * t), "none");
}

inline Precoder cue_space(int n_t, Engine& eng)
{
    if (n_t < 1)
        throw domain_error("cue_space: n_t must be >= 1");
    return detail::from_complex(PrecoderKind::cue_space, n_t, 1, sample_cue(n_t, eng).entries, "cue");
}

inline Precoder cue_space(int n_t, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return cue_space(n_t, eng);
}

inline Precoder cue_space_time(int n_t, int t, Engine& eng)
{
    if (n_t < 1 || t < 1)
        throw domain_error("cue_space_time: n_t and t must be >= 1");
    return detail::from_complex(PrecoderKind::cue_space_time, n_t, t, sample_cue(n_t * t, eng).entries, "cue-st");
}

inline Precoder cue_space_time(int n_t, int t, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return cue_space_time(n_t, t, eng);
}

// Alamouti over two slots: slot 1 sends (s1, s2), slot 2 sends (-s2*, s1*), scaled by 1/sqrt 2.
// Conjugation makes this real-linear only, hence the explicit 8 x 4 real map.
inline Precoder alamouti()
{
    const double h = 1.0 / std::sqrt(2.0);
    Precoder p;
    p.kind = PrecoderKind::fixed;
    p.n_t = 2;
    p.t = 2;
    p.n_symbols = 4;
    p.label = "alamouti";
    p.power_gain = std::sqrt(2.0);
    // columns: Re s1, Re s2, Im s1, Im s2; rows: Re x (4), Im x (4)
    RMatrix m = RMatrix::Zero(8, 4);
    m(0, 0) = h;  // Re x1 =  Re s1
    m(1, 1) = h;  // Re x2 =  Re s2
    m(2, 1) = -h; // Re x3 = -Re s2
    m(3, 0) = h;  // Re x4 =  Re s1
    m(4, 2) = h;  // Im x1 =  Im s1
    m(5, 3) = h;  // Im x2 =  Im s2
    m(6, 3) = h;  // Im x3 =  Im s2
    m(7, 2) = -h; // Im x4 = -Im s1
    p.map = std::move(m);
    return p;
}

// Complex generator of the golden code: vec(X) = G [a b c d]^T with
//   X = 1/sqrt5 [[alpha(a + b th),    alpha(c + d th)],
//                [i abar(c + d thb),  abar(a + b thb)]],
// th = (1 + sqrt 5)/2, thb = 1 - th, alpha = 1 + i - i th, abar = 1 + i - i thb.
inline CMatrix golden_generator()
{
    const cplx a = detail::golden_alpha(), ab = detail::golden_alpha_conj();
    const double th = detail::kGolden, thb = detail::kGoldenConj;
    const cplx i(0.0, 1.0);
    CMatrix g = CMatrix::Zero(4, 4);
    g(0, 0) = a;
    g(0, 1) = a * th;
    g(1, 2) = i * ab;
    g(1, 3) = i * ab * thb;
    g(2, 2) = a;
    g(2, 3) = a * th;
    g(3, 0) = ab;
    g(3, 1) = ab * thb;
    return g / std::sqrt(5.0);
}

inline Precoder golden_code()
{
    return detail::from_complex(PrecoderKind::fixed, 2, 2, golden_generator(), "golden");
}

// Per-user 2 x 2 maps for the two-user MAC over two slots.
inline std::pair<CMatrix, CMatrix> badr_belfiore_matrices()
{
    const cplx a = detail::golden_alpha(), ab = detail::golden_alpha_conj();
    const double ph = detail::kGolden, phb = detail::kGoldenConj;
    CMatrix p1(2, 2);
    p1 << a, a * ph, ab, ab * phb;
    p1 /= std::sqrt(5.0);
    CMatrix p2 = p1;
    p2.row(0) *= cplx(0.0, 1.0);
    return {p1, p2};
}

inline std::pair<Precoder, Precoder> badr_belfiore()
{
    auto [p1, p2] = badr_belfiore_matrices();
    return {detail::from_complex(PrecoderKind::fixed, 1, 2, p1, "badr-belfiore"),
            detail::from_complex(PrecoderKind::fixed, 1, 2, p2, "badr-belfiore")};
}

// Effective real channel complex_to_real(I_t (x) h) * map, scaled by the power gain.
inline RMatrix apply_precoder(const CMatrix& h, const Precoder& p)
{
    if (h.cols() != p.n_t)
        throw shape_error("apply_precoder: channel has " + std::to_string(h.cols()) + " transmit antennas, precoder expects " +
                          std::to_string(p.n_t));
    if (p.map.rows() != 2 * p.n_t * p.t)
        throw shape_error("apply_precoder: precoder map has the wrong row count");
    return p.power_gain * (complex_to_real(time_extend(h, p.t)) * p.map);
}

enum class PrecoderLabel { none, cue, cue_st, alamouti, golden, badr_belfiore };

inline PrecoderLabel parse_precoder_label(std::string_view s)
{
    if (s == "none") return PrecoderLabel::none;
    if (s == "cue") return PrecoderLabel::cue;
    if (s == "cue-st") return PrecoderLabel::cue_st;
    if (s == "alamouti") return PrecoderLabel::alamouti;
    if (s == "golden") return PrecoderLabel::golden;
    if (s == "badr-belfiore") return PrecoderLabel::badr_belfiore;
    throw domain_error("unknown precoder label '" + std::string(s) + "'");
}

inline std::string_view to_string(PrecoderLabel l)
{
    switch (l) {
    case PrecoderLabel::none: return "none";
    case PrecoderLabel::cue: return "cue";
    case PrecoderLabel::cue_st: return "cue-st";
    case PrecoderLabel::alamouti: return "alamouti";
    case PrecoderLabel::golden: return "golden";
    case PrecoderLabel::badr_belfiore: return "badr-belfiore";
    }
    return "?";
}

// Time extension a label implies for an N_t-antenna transmitter; `t` is only
// consulted by cue-st.
inline int precoder_time_extension(PrecoderLabel l, int t)
{
    switch (l) {
    case PrecoderLabel::cue_st: return t;
    case PrecoderLabel::alamouti:
    case PrecoderLabel::golden:
    case PrecoderLabel::badr_belfiore: return 2;
    default: return 1;
    }
}

// Point-to-point precoder for a label. Random labels draw from `eng`.
// badr-belfiore is a per-user MAC construction and is rejected here.
inline Precoder make_precoder(PrecoderLabel l, int n_t, int t, Engine& eng)
{
    switch (l) {
    case PrecoderLabel::none: return identity_precoder(n_t, 1);
    case PrecoderLabel::cue: return cue_space(n_t, eng);
    case PrecoderLabel::cue_st: return cue_space_time(n_t, t, eng);
    case PrecoderLabel::alamouti:
    case PrecoderLabel::golden:
        if (n_t != 2)
            throw domain_error("alamouti/golden precoders need n_t = 2");
        return l == PrecoderLabel::alamouti ? alamouti() : golden_code();
    case PrecoderLabel::badr_belfiore: break;
    }
    throw domain_error("badr-belfiore is a per-user MAC precoder");
}

} // namespace iflab
