#include "qcrb/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace qcrb::quadrature {

namespace {

GaussRule build_rule() {
    using Boost = boost::math::quadrature::gauss<double, kGaussOrder>;
    const auto& abscissa = Boost::abscissa();
    const auto& weights = Boost::weights();
    // Boost stores the non-negative half; order is even so there is no zero node.
    static_assert(kGaussOrder % 2 == 0);
    constexpr int half = kGaussOrder / 2;
    GaussRule rule{};
    for (int i = 0; i < half; ++i) {
        rule.nodes[half - 1 - i] = -abscissa[i];
        rule.weights[half - 1 - i] = weights[i];
        rule.nodes[half + i] = abscissa[i];
        rule.weights[half + i] = weights[i];
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre() {
    static const GaussRule rule = build_rule();
    return rule;
}

}  // namespace qcrb::quadrature
