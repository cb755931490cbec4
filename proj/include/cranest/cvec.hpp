// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cranest {

using cxd = std::complex<double>;

/// Dense complex vector. A plain std::vector so the standard library and
/// range algorithms interoperate without adapters; entries are expected to
/// be finite on construction (all_finite checks that where it matters).
using CVec = std::vector<cxd>;

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Column `col` of the n x n DFT matrix, entry m = exp(-j*2*pi*m*col/n).
/// Throws IndexOutOfRange unless 0 <= col < n.
CVec dft_column(std::size_t n, std::size_t col);

/// Table of the n unit roots exp(+j*2*pi*k/n), k = 0..n-1.
CVec unit_phases(std::size_t n);

/// <x, y> = sum_i conj(x_i) * y_i  (conjugate-linear in the first argument).
cxd inner(const CVec& x, const CVec& y);

/// Squared two-norm.
double norm2(const CVec& x);

bool all_finite(const CVec& x);

} // namespace cranest
