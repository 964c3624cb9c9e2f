#pragma once

// Shared test-side oracles: quadrature, Lambert-W branches, and a small
// parameter sampler. These stay independent of the library paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/rng.hpp"

namespace testutil {

using Complex = std::complex<double>;

// composite Simpson on [a,b]
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    if (n % 2) ++n;
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline Complex simpson_c(const std::function<Complex(double)>& f, double a, double b,
                         int n = 4000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    Complex acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// branch-k Lambert W via Newton from the asymptotic seed log(u) + 2 pi i k
inline Complex lambert_w(int k, Complex u) {
    Complex l1 = std::log(u) + Complex(0, 2 * M_PI * k);
    Complex w = (std::abs(l1) > 1e-3) ? l1 - std::log(l1) : Complex(-1.0);
    if (k == 0 && std::abs(u) < 0.3) w = u; // principal branch near 0
    for (int it = 0; it < 300; ++it) {
        Complex f = w * std::exp(w) - u;
        Complex fp = (w + 1.0) * std::exp(w);
        Complex step = f / fp;
        w -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

// principal real branch on (-1/e, 0) by bisection + Newton (W_0 >= -1)
inline double lambert_w0_real(double u) {
    double lo = -1.0, hi = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct ParamSampler {
    renewal::CounterRng rng;
    explicit ParamSampler(std::uint64_t seed, std::uint64_t stream = 0) : rng(seed, stream) {}

    double uniform(double a, double b) { return a + (b - a) * rng.next_uniform(); }
    int integer(int a, int b) { return a + int(rng.next_u64() % std::uint64_t(b - a + 1)); }

    std::vector<double> simplex(int n) {
        std::vector<double> w(n);
        double s = 0;
        for (double& v : w) {
            v = 0.05 + rng.next_uniform();
            s += v;
        }
        for (double& v : w) v /= s;
        return w;
    }
};

} // namespace testutil
