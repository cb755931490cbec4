// SPDX-License-Identifier: Apache-2.0
#include "cranest/cvec.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cranest {

CVec dft_column(std::size_t n, std::size_t col)
{
    if (col >= n) {
        throw IndexOutOfRange("dft_column: col " + std::to_string(col) +
                              " out of range for n = " + std::to_string(n));
    }
    CVec out(n);
    const double step = -2.0 * std::numbers::pi * static_cast<double>(col) / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        out[m] = std::polar(1.0, step * static_cast<double>(m));
    }
    return out;
}

CVec unit_phases(std::size_t n)
{
    CVec out(n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = std::polar(1.0, step * static_cast<double>(k));
    }
    return out;
}

cxd inner(const CVec& x, const CVec& y)
{
    if (x.size() != y.size()) {
        throw LengthMismatch("inner: length mismatch");
    }
    cxd acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

double norm2(const CVec& x)
{
    double acc = 0.0;
    for (const cxd& v : x) {
        acc += std::norm(v);
    }
    return acc;
}

bool all_finite(const CVec& x)
{
    for (const cxd& v : x) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

} // namespace cranest
