#include <cmath>

#include "netsel/random.hpp"

namespace netsel {
namespace {

double standard_normal(Rng& rng) {
    // Box–Muller; one of the pair is discarded to keep the stream stateless.
    double u1 = rng.uniform_open();
    double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        double g = gamma(shape + 1.0);
        return g * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = standard_normal(*this);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

}  // namespace netsel
