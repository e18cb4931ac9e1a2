#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace mbm {

// Lemarie-Meyer mother wavelet, Fourier side only.
// psi_hat(xi) = e^{i xi/2} chi(|xi|), with chi supported on [2pi/3, 8pi/3]:
//   chi(xi) = sin(pi/2 nu(3 xi/(2pi) - 1))   on the rising flank [2pi/3, 4pi/3]
//   chi(xi) = cos(pi/2 nu(3 xi/(4pi) - 1))   on the falling flank [4pi/3, 8pi/3]
// nu is the smoothstep polynomial of order `smoothness_order` (C^s matching,
// nu(x) + nu(1-x) = 1), which makes sum_j chi(2^j xi)^2 = 1 for xi != 0.
class MeyerWindow {
public:
    static constexpr double support_lo = 2.0 * std::numbers::pi / 3.0;
    static constexpr double support_hi = 8.0 * std::numbers::pi / 3.0;

    explicit MeyerWindow(int smoothness_order = 3);

    // nu on [0,1], clamped outside.
    double flank(double x) const;

    double chi(double xi) const;

    std::complex<double> psi_hat(double xi) const;

    int smoothness_order() const { return order_; }

private:
    int order_;
    std::vector<double> coeff_;  // nu(x) = sum_m coeff_[m] x^{order_+1+m}
};

}  // namespace mbm
