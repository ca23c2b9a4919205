#pragma once

// Reference computations that share no code with the library. Used by the
// unit tests and by the acceptance binary.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Winding number of f around the rectangle by dense sampling with phase
// unwrapping. Returns -1 when a sample lands on a zero or the phase jump
// between neighbours is not resolved.
inline int winding(const std::function<cplx(cplx)>& f, double x0, double x1, double y0, double y1,
                   int per_edge = 800) {
    const cplx corners[] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
    double total = 0.0;
    double prev = std::arg(f(corners[0]));
    for (int e = 0; e < 4; ++e) {
        for (int s = 1; s <= per_edge; ++s) {
            const cplx z = corners[e] + (corners[e + 1] - corners[e]) * (double(s) / per_edge);
            const cplx v = f(z);
            if (std::abs(v) == 0.0) return -1;
            const double cur = std::arg(v);
            const double d = std::remainder(cur - prev, 2.0 * kPi);
            if (std::abs(d) > 1.0) return -1;
            total += d;
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// Newton polish of a simple zero.
inline cplx newton(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& df, cplx z) {
    for (int it = 0; it < 100; ++it) {
        const cplx step = f(z) / df(z);
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

// Simple zeros of f in [x0, x1] x [y0, y1] by a uniform cell scan. Each cell
// with winding one is refined by bisection until Newton from its centre
// stays inside it. Cells with higher winding are subdivided; cells whose
// boundary is unresolved are retried on a shifted grid.
inline std::vector<cplx> simple_zeros(const std::function<cplx(cplx)>& f,
                                      const std::function<cplx(cplx)>& df, double x0, double x1,
                                      double y0, double y1, double cell = 0.5) {
    std::vector<cplx> out;
    std::function<void(double, double, double, double, int)> cellwork =
        [&](double a0, double a1, double b0, double b1, int depth) {
            const int w = winding(f, a0, a1, b0, b1);
            if (w == 0) return;
            if (w == 1 || depth > 12) {
                const cplx z = newton(f, df, cplx{0.5 * (a0 + a1), 0.5 * (b0 + b1)});
                if (w == 1 && z.real() >= a0 && z.real() <= a1 && z.imag() >= b0 && z.imag() <= b1) {
                    out.push_back(z);
                    return;
                }
                if (depth > 12) return;
            }
            const double am = 0.5 * (a0 + a1) + 1.3e-3 * (a1 - a0);
            const double bm = 0.5 * (b0 + b1) - 0.7e-3 * (b1 - b0);
            cellwork(a0, am, b0, bm, depth + 1);
            cellwork(am, a1, b0, bm, depth + 1);
            cellwork(a0, am, bm, b1, depth + 1);
            cellwork(am, a1, bm, b1, depth + 1);
        };
    const int nx = static_cast<int>(std::ceil((x1 - x0) / cell));
    const int ny = static_cast<int>(std::ceil((y1 - y0) / cell));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            cellwork(x0 + i * (x1 - x0) / nx, x0 + (i + 1) * (x1 - x0) / nx, y0 + j * (y1 - y0) / ny,
                     y0 + (j + 1) * (y1 - y0) / ny, 0);
    return out;
}

// Nonzero roots of sin k = k in the closed upper half-plane with |Re k| <= re_max
// and 0 < Im k <= im_max.
inline std::vector<cplx> sin_equals_identity_roots(double re_max, double im_max) {
    const auto f = [](cplx k) { return std::sin(k) - k; };
    const auto df = [](cplx k) { return std::cos(k) - 1.0; };
    // The lower edge avoids the triple zero at the origin.
    return simple_zeros(f, df, -re_max - 0.0123, re_max + 0.0171, 0.0313, im_max + 0.0219);
}

// Green's function of -u'' + u on [0, pi] with Dirichlet ends.
inline double dirichlet_green_pi(double x, double y) {
    const double lo = std::min(x, y), hi = std::max(x, y);
    return std::sinh(lo) * std::sinh(kPi - hi) / std::sinh(kPi);
}

// Composite Simpson rule with n (even) panels.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    cplx s = f(a) + f(b);
    for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
    return s * (h / 3.0);
}

}  // namespace oracle
