#include "mbm/meyer.hpp"

#include <cmath>
#include <stdexcept>

namespace mbm {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

}  // namespace

MeyerWindow::MeyerWindow(int smoothness_order) : order_(smoothness_order) {
    if (smoothness_order < 1)
        throw std::invalid_argument("MeyerWindow: smoothness_order must be >= 1");
    // smoothstep S_n(x) = sum_{k=0}^n C(n+k,k) C(2n+1,n-k) (-x)^k x^{n+1}
    coeff_.resize(order_ + 1);
    for (int k = 0; k <= order_; ++k) {
        double c = binom(order_ + k, k) * binom(2 * order_ + 1, order_ - k);
        coeff_[k] = (k % 2 == 0) ? c : -c;
    }
}

double MeyerWindow::flank(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double acc = 0.0;
    for (int k = order_; k >= 0; --k) acc = acc * x + coeff_[k];
    for (int i = 0; i <= order_; ++i) acc *= x;
    return acc;
}

double MeyerWindow::chi(double xi) const {
    xi = std::abs(xi);
    if (xi <= support_lo || xi >= support_hi) return 0.0;
    constexpr double pi = std::numbers::pi;
    if (xi <= 2.0 * support_lo)
        return std::sin(0.5 * pi * flank(3.0 * xi / (2.0 * pi) - 1.0));
    return std::cos(0.5 * pi * flank(3.0 * xi / (4.0 * pi) - 1.0));
}

std::complex<double> MeyerWindow::psi_hat(double xi) const {
    double c = chi(xi);
    if (c == 0.0) return {0.0, 0.0};
    return std::polar(c, 0.5 * xi);
}

}  // namespace mbm
