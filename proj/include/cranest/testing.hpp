// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/config.hpp"

namespace cranest::testing {

/// Builds ValidatedParams without running the invariant checks, so tests
/// can reach configurations production validate() rejects (sigma_n2 = 0
/// noiseless chains, enormous prior variances, and so on). Production code
/// must never include this header.
inline ValidatedParams force_params(const SystemParams& p)
{
    ValidatedParams out;
    out.n_s = p.n_s;
    out.n_p = p.n_p;
    out.n_r = p.n_r;
    out.q_order = p.q_order;
    out.epsilon = p.epsilon;
    out.p_s = p.p_s;
    out.p_r = p.p_r;
    out.sigma_n2 = p.sigma_n2;
    out.v_h = p.v_h;
    out.v_g = p.v_g;
    out.v_q_profile = p.v_q_profile.empty() ? uniform_profile(p.q_order, p.v_h) : p.v_q_profile;
    out.mpsk_order = p.mpsk_order;
    out.i_times = p.i_times;
    out.seed = p.seed;
    out.k = p.n_s / p.n_p;
    out.alpha = std::sqrt(p.p_r / (p.v_h * p.p_s + p.sigma_n2));
    out.v_n = noise_variance_vn(out);
    return out;
}

} // namespace cranest::testing
