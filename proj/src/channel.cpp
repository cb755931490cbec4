// SPDX-License-Identifier: Apache-2.0
#include "cranest/channel.hpp"

#include <cstdio>

namespace cranest {

BemCoefficients draw_bem(const ValidatedParams& params, RngStream& rng)
{
    BemCoefficients out;
    out.lambda.reserve(params.bem_size());
    for (double vq : params.v_q_profile) {
        out.lambda.push_back(rng.complex_gaussian(vq));
    }
    return out;
}

CVec expand(const BemCoefficients& bem, std::size_t n_s)
{
    const std::size_t width = bem.lambda.size();
    const std::ptrdiff_t q_order = static_cast<std::ptrdiff_t>(width / 2);
    const CVec tw = unit_phases(n_s);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_s);

    CVec h(n_s, cxd{0.0, 0.0});
    for (std::size_t i = 0; i < width; ++i) {
        const cxd coeff = bem.lambda[i];
        const std::ptrdiff_t q = static_cast<std::ptrdiff_t>(i) - q_order;
        // exp(j*2*pi*q*m/n_s) = tw[(q*m) mod n_s], kept exact via the table.
        std::ptrdiff_t idx = 0;
        const std::ptrdiff_t step = ((q % n) + n) % n;
        for (std::size_t m = 0; m < n_s; ++m) {
            h[m] += coeff * tw[static_cast<std::size_t>(idx)];
            idx += step;
            if (idx >= n) idx -= n;
        }
    }
    return h;
}

cxd draw_backhaul(const ValidatedParams& params, RngStream& rng)
{
    return rng.complex_gaussian(params.v_g);
}

CVec awgn(std::size_t n, double sigma2, RngStream& rng)
{
    return complex_gaussian_vector(rng, n, sigma2);
}

ChannelRealization draw_realization(const ValidatedParams& params, RngStream& bem_rng,
                                    RngStream& gain_rng)
{
    ChannelRealization out;
    out.bem = draw_bem(params, bem_rng);
    out.g = draw_backhaul(params, gain_rng);
    out.h = expand(out.bem, params.n_s);
    return out;
}

std::string channels_to_csv(const std::vector<ChannelRealization>& realizations)
{
    std::string out = "trial,n,re_h,im_h,re_g,im_g\n";
    char buf[160];
    for (std::size_t t = 0; t < realizations.size(); ++t) {
        const ChannelRealization& r = realizations[t];
        for (std::size_t n = 0; n < r.h.size(); ++n) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", t, n,
                          r.h[n].real(), r.h[n].imag(), r.g.real(), r.g.imag());
            out += buf;
        }
    }
    return out;
}

} // namespace cranest
