// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cranest/channel.hpp"
#include "cranest/config.hpp"
#include "cranest/cvec.hpp"
#include "cranest/rng.hpp"

namespace cranest {

/// Periodic access training: the full-length tiled sequence and one period.
struct AccessTraining {
    CVec t_s;       ///< length n_s, period n_p
    CVec t_s_tilde; ///< one period, length n_p, |entry|^2 = p_s
};

/// One transmitted block: data, training, and their superposition
/// s(n) = sqrt(1-eps)*b(n) + sqrt(eps)*t_s(n).
struct TransmitBlock {
    CVec b;
    CVec t_s;
    CVec s;
};

/// Receiver-side observation pair: the relayed data-phase block (length
/// n_s) and the relay's own training segment (length n_r).
struct ReceivedSignals {
    CVec x_s;
    CVec x_r;
};

/// Per-trial noise streams for the two hops.
struct NoiseStreams {
    RngStream relay;    ///< noise at the relay input
    RngStream direct;   ///< noise on the forwarded block
    RngStream backhaul; ///< noise on the relay training segment
};

/// n_s i.i.d. uniform MPSK symbols of magnitude sqrt(p_s).
CVec generate_data(const ValidatedParams& params, RngStream& rng);

/// sqrt(p_s) times DFT column 1 of size n_p, tiled K times.
AccessTraining generate_access_training(const ValidatedParams& params);

/// sqrt(p_r) times DFT column 2 of size n_r.
CVec generate_backhaul_training(const ValidatedParams& params);

/// Elementwise sqrt(1-eps)*b + sqrt(eps)*t_s; lengths must match.
CVec superimpose(const CVec& b, const CVec& t_s, double epsilon);

TransmitBlock make_transmit_block(const ValidatedParams& params, RngStream& data_rng);

/// End-to-end block simulation:
///   x_R(n) = h(n)*s(n) + w_R(n)
///   x_s    = alpha*g*x_R + w_Ds
///   x_r    = g*t_r + w_Dr
/// sigma_n2 == 0 produces a noiseless chain (reachable only through the
/// testing hooks; validated configs always have sigma_n2 > 0).
ReceivedSignals simulate_uplink(const ValidatedParams& params, const ChannelRealization& chan,
                                const TransmitBlock& block, const CVec& t_r,
                                NoiseStreams& noise);

} // namespace cranest
