// SPDX-License-Identifier: Apache-2.0
#include "cranest/transceiver.hpp"

#include <cmath>
#include <numbers>

namespace cranest {

CVec generate_data(const ValidatedParams& params, RngStream& rng)
{
    const double mag = std::sqrt(params.p_s);
    const unsigned m_order = params.mpsk_order;
    CVec out(params.n_s);
    for (std::size_t n = 0; n < params.n_s; ++n) {
        const std::uint32_t sym = rng.uniform_int(m_order);
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(sym) /
                           static_cast<double>(m_order);
        out[n] = std::polar(mag, ang);
    }
    return out;
}

AccessTraining generate_access_training(const ValidatedParams& params)
{
    AccessTraining out;
    out.t_s_tilde = dft_column(params.n_p, 1);
    const double mag = std::sqrt(params.p_s);
    for (cxd& v : out.t_s_tilde) v *= mag;

    out.t_s.resize(params.n_s);
    for (std::size_t n = 0; n < params.n_s; ++n) {
        out.t_s[n] = out.t_s_tilde[n % params.n_p];
    }
    return out;
}

CVec generate_backhaul_training(const ValidatedParams& params)
{
    CVec t_r = dft_column(params.n_r, 2);
    const double mag = std::sqrt(params.p_r);
    for (cxd& v : t_r) v *= mag;
    return t_r;
}

CVec superimpose(const CVec& b, const CVec& t_s, double epsilon)
{
    if (b.size() != t_s.size()) {
        throw LengthMismatch("superimpose: data and training lengths differ");
    }
    const double wb = std::sqrt(1.0 - epsilon);
    const double wt = std::sqrt(epsilon);
    CVec s(b.size());
    for (std::size_t n = 0; n < b.size(); ++n) {
        s[n] = wb * b[n] + wt * t_s[n];
    }
    return s;
}

TransmitBlock make_transmit_block(const ValidatedParams& params, RngStream& data_rng)
{
    TransmitBlock out;
    out.b = generate_data(params, data_rng);
    out.t_s = generate_access_training(params).t_s;
    out.s = superimpose(out.b, out.t_s, params.epsilon);
    return out;
}

ReceivedSignals simulate_uplink(const ValidatedParams& params, const ChannelRealization& chan,
                                const TransmitBlock& block, const CVec& t_r,
                                NoiseStreams& noise)
{
    const std::size_t n_s = params.n_s;
    const bool noiseless = params.sigma_n2 == 0.0;

    const CVec w_r = noiseless ? CVec(n_s, cxd{0.0, 0.0}) : awgn(n_s, params.sigma_n2, noise.relay);
    const CVec w_ds =
        noiseless ? CVec(n_s, cxd{0.0, 0.0}) : awgn(n_s, params.sigma_n2, noise.direct);
    const CVec w_dr = noiseless ? CVec(params.n_r, cxd{0.0, 0.0})
                                : awgn(params.n_r, params.sigma_n2, noise.backhaul);

    ReceivedSignals out;
    out.x_s.resize(n_s);
    const cxd ag = params.alpha * chan.g;
    for (std::size_t n = 0; n < n_s; ++n) {
        out.x_s[n] = ag * (chan.h[n] * block.s[n] + w_r[n]) + w_ds[n];
    }
    out.x_r.resize(params.n_r);
    for (std::size_t n = 0; n < params.n_r; ++n) {
        out.x_r[n] = chan.g * t_r[n] + w_dr[n];
    }
    return out;
}

} // namespace cranest
