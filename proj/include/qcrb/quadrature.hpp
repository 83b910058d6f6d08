#pragma once

#include <array>

namespace qcrb::quadrature {

inline constexpr int kGaussOrder = 10;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussRule {
    std::array<double, kGaussOrder> nodes;
    std::array<double, kGaussOrder> weights;
};

const GaussRule& gauss_legendre();

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
template <typename F>
auto composite_gauss(F&& f, double a, double b, int panels) {
    const auto& rule = gauss_legendre();
    const double width = (b - a) / panels;
    using Value = decltype(f(a));
    Value sum{};
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        for (int g = 0; g < kGaussOrder; ++g) {
            sum += rule.weights[g] * f(mid + 0.5 * width * rule.nodes[g]);
        }
    }
    return sum * (0.5 * width);
}

}  // namespace qcrb::quadrature
