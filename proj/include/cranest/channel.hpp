// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/config.hpp"
#include "cranest/cvec.hpp"
#include "cranest/rng.hpp"

#include <string>
#include <vector>

namespace cranest {

/// Basis coefficients, length 2Q+1; entry i holds the coefficient of the
/// complex exponential with frequency index q = i - Q.
struct BemCoefficients {
    CVec lambda;
};

/// One channel draw: basis coefficients, backhaul gain, and the expanded
/// access-link samples h(n) = sum_q lambda_q * exp(j*2*pi*q*n / n_s).
struct ChannelRealization {
    BemCoefficients bem;
    cxd g{0.0, 0.0};
    CVec h;
};

/// lambda_q ~ CN(0, v_q), independent across q.
BemCoefficients draw_bem(const ValidatedParams& params, RngStream& rng);

/// Time expansion of the coefficients over one block.
CVec expand(const BemCoefficients& bem, std::size_t n_s);

/// g ~ CN(0, v_g).
cxd draw_backhaul(const ValidatedParams& params, RngStream& rng);

/// n i.i.d. CN(0, sigma2) samples; sigma2 must be > 0.
CVec awgn(std::size_t n, double sigma2, RngStream& rng);

/// Draws coefficients and gain, stores the expansion alongside.
ChannelRealization draw_realization(const ValidatedParams& params, RngStream& bem_rng,
                                    RngStream& gain_rng);

/// Debug dump, one row per (trial, n): trial,n,re_h,im_h,re_g,im_g.
std::string channels_to_csv(const std::vector<ChannelRealization>& realizations);

} // namespace cranest
