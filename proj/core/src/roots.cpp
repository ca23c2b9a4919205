#include "qgraph/roots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

namespace qgraph {

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double wrap_phase(double d) { return std::remainder(d, kTwoPi); }

std::string point_text(cplx z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

class Walker {
public:
    Walker(const HolomorphicFunction& f, const RootOptions& opt) : f_(f), opt_(opt) {}

    long evaluations() const { return evals_; }

    double phase(cplx z) {
        ++evals_;
        const LogDet v = f_.log(z);
        if (v.singular || !std::isfinite(v.value.real()) || !std::isfinite(v.value.imag()))
            throw ContourHit("zero on contour near " + point_text(z));
        return v.value.imag();
    }

    int winding(const Rect& r) {
        const cplx c0{r.re0, r.im0}, c1{r.re1, r.im0}, c2{r.re1, r.im1}, c3{r.re0, r.im1};
        const double total = edge(c0, c1) + edge(c1, c2) + edge(c2, c3) + edge(c3, c0);
        const double w = total / kTwoPi;
        const double n = std::round(w);
        if (std::abs(w - n) > 0.05) throw ContourHit("non-integral winding on contour");
        return static_cast<int>(n);
    }

private:
    struct Sample {
        double phase;
        cplx dlog;
    };

    Sample sample(cplx z) {
        const double ph = phase(z);
        return {ph, f_.dlog(z)};
    }

    // Predicted phase change from the log-derivative at either end guards
    // against wrapping a turn of more than pi into a small step.
    bool too_fast(cplx p, cplx q, const Sample& a, const Sample& b) const {
        const cplx dz = q - p;
        const double pa = std::abs((a.dlog * dz).imag());
        const double pb = std::abs((b.dlog * dz).imag());
        return !(pa <= opt_.max_phase_step) || !(pb <= opt_.max_phase_step);
    }

    double edge(cplx p, cplx q) {
        const double len = std::abs(q - p);
        const int n = std::max(opt_.min_samples_per_edge,
                               static_cast<int>(std::ceil(len * opt_.samples_per_unit)));
        double total = 0.0;
        cplx prev = p;
        Sample prev_s = sample(p);
        for (int s = 1; s <= n; ++s) {
            const cplx cur = p + (q - p) * (static_cast<double>(s) / n);
            const Sample cur_s = sample(cur);
            total += segment(prev, cur, prev_s, cur_s, 0);
            prev = cur;
            prev_s = cur_s;
        }
        return total;
    }

    double segment(cplx p, cplx q, const Sample& sp, const Sample& sq, int depth) {
        const double d = wrap_phase(sq.phase - sp.phase);
        if (std::abs(d) <= opt_.max_phase_step && !too_fast(p, q, sp, sq)) return d;
        if (depth >= opt_.max_bisections) {
            if (std::abs(d) <= opt_.max_phase_step) return d;
            throw ContourHit("phase not resolved near " + point_text(0.5 * (p + q)));
        }
        const cplx m = 0.5 * (p + q);
        const Sample sm = sample(m);
        return segment(p, m, sp, sm, depth + 1) + segment(m, q, sm, sq, depth + 1);
    }

    const HolomorphicFunction& f_;
    const RootOptions& opt_;
    long evals_ = 0;
};

struct StripResult {
    std::vector<Root> roots;
    std::vector<std::string> warnings;
    long evaluations = 0;
    int boxes = 0;
    int winding = 0;
    bool contour_failed = false;
};

class Solver {
public:
    Solver(const HolomorphicFunction& f, const RootOptions& opt, StripResult& out)
        : f_(f), opt_(opt), walker_(f, opt), out_(out) {}

    void run(const Rect& r) {
        try {
            out_.winding = walker_.winding(r);
        } catch (const ContourHit&) {
            out_.contour_failed = true;
            out_.evaluations = walker_.evaluations();
            return;
        }
        solve(r, out_.winding, 0);
        out_.evaluations = walker_.evaluations();
    }

private:
    std::optional<cplx> newton(cplx z, int m, const Rect& r) {
        const double scale = std::max(r.width(), r.height());
        double last_step = 0.0;
        for (int it = 0; it < opt_.newton_max_iter; ++it) {
            const LogDet v = f_.log(z);
            if (v.singular) return z;
            const cplx dl = f_.dlog(z);
            if (!std::isfinite(dl.real()) || !std::isfinite(dl.imag())) return z;
            const cplx step = static_cast<double>(m) / dl;
            z -= step;
            last_step = std::abs(step);
            if (!r.contains(z, 0.5 * scale)) return std::nullopt;
            if (last_step <= opt_.newton_tol * (1.0 + std::abs(z))) return z;
        }
        // A zero of order m is only resolvable to about eps^(1/m).
        const double floor = std::max(1e-9, 10.0 * std::pow(kEps, 1.0 / m));
        if (last_step <= floor * (1.0 + std::abs(z))) return z;
        return std::nullopt;
    }

    bool certify(cplx z, int n, const Rect& r) {
        const double rho =
            std::max(opt_.cluster_radius, 100.0 * std::pow(kEps, 1.0 / n)) * (1.0 + std::abs(z));
        Rect sq{std::max(r.re0, z.real() - rho), std::min(r.re1, z.real() + rho),
                std::max(r.im0, z.imag() - rho), std::min(r.im1, z.imag() + rho)};
        const double tiny = 1e-15 * (1.0 + std::abs(z));
        if (sq.width() <= tiny || sq.height() <= tiny) return false;
        try {
            return walker_.winding(sq) == n;
        } catch (const ContourHit&) {
            return false;
        }
    }

    void solve(const Rect& r, int n, int depth) {
        if (n <= 0) return;
        ++out_.boxes;
        const cplx centre{0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1)};
        if (auto z = newton(centre, n, r); z && r.contains(*z) && certify(*z, n, r)) {
            out_.roots.push_back({*z, n, true});
            return;
        }
        if (depth >= opt_.max_depth) {
            out_.roots.push_back({centre, n, false});
            out_.warnings.push_back("subdivision limit reached near " + point_text(centre));
            return;
        }
        static constexpr double offsets[] = {0.0123, -0.0371, 0.0717, -0.1093, 0.1409, -0.1777};
        const bool vertical = r.width() >= r.height();
        for (double off : offsets) {
            const double frac = 0.5 + (depth % 2 == 0 ? off : -off);
            Rect a = r, b = r;
            if (vertical) {
                const double x = r.re0 + frac * r.width();
                a.re1 = x;
                b.re0 = x;
            } else {
                const double y = r.im0 + frac * r.height();
                a.im1 = y;
                b.im0 = y;
            }
            int na = 0;
            try {
                na = walker_.winding(a);
            } catch (const ContourHit&) {
                continue;
            }
            const int nb = n - na;
            if (na < 0 || nb < 0) continue;
            solve(a, na, depth + 1);
            solve(b, nb, depth + 1);
            return;
        }
        out_.roots.push_back({centre, n, false});
        out_.warnings.push_back("no admissible split line near " + point_text(centre));
    }

    const HolomorphicFunction& f_;
    const RootOptions& opt_;
    Walker walker_;
    StripResult& out_;
};

std::vector<Rect> make_strips(const Rect& r, double strip_width, double shift) {
    const int n = std::max(1, static_cast<int>(std::ceil(r.width() / strip_width)));
    std::vector<Rect> strips;
    const double w = r.width() / n;
    double left = r.re0;
    for (int j = 1; j <= n; ++j) {
        const double right = (j == n) ? r.re1 : r.re0 + (j + shift) * w;
        strips.push_back({left, right, r.im0, r.im1});
        left = right;
    }
    return strips;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

int winding_number(const HolomorphicFunction& f, const Rect& r, const RootOptions& opt,
                   long* evaluations) {
    Walker w(f, opt);
    const int n = w.winding(r);
    if (evaluations) *evaluations += w.evaluations();
    return n;
}

RootSearch find_roots(const HolomorphicFunction& f, Rect r, const RootOptions& opt) {
    RootSearch out;
    bool outer_ok = false;
    for (int attempt = 0; attempt < 8 && !outer_ok; ++attempt) {
        try {
            out.boundary_winding = winding_number(f, r, opt, &out.evaluations);
            outer_ok = true;
        } catch (const ContourHit&) {
            const double grow = 1e-3 * (attempt + 1);
            const double dx = grow * std::max(1.0, r.width());
            const double dy = grow * std::max(1.0, r.height());
            r.re1 += dx;
            if (r.re0 < 0.0) r.re0 -= dx;
            r.im1 += dy;
            if (r.im0 < 0.0) r.im0 -= dy;
            out.warnings.push_back("outer contour nudged outward to avoid a boundary zero");
        }
    }
    out.region = r;
    if (!outer_ok) throw ContourHit("search rectangle boundary passes through a zero");
    if (out.boundary_winding == 0) {
        out.complete = true;
        return out;
    }

    static constexpr double shifts[] = {0.0123, 0.0371, -0.0619, 0.1097, -0.1531, 0.2113};
    for (double shift : shifts) {
        const std::vector<Rect> strips = make_strips(r, opt.strip_width, shift);
        std::vector<StripResult> results(strips.size());
        parallel_for(strips.size(), opt.threads, [&](std::size_t i) {
            Solver(f, opt, results[i]).run(strips[i]);
        });
        const bool failed = std::any_of(results.begin(), results.end(),
                                        [](const StripResult& s) { return s.contour_failed; });
        for (const auto& s : results) {
            out.evaluations += s.evaluations;
            out.boxes += s.boxes;
        }
        if (failed) continue;
        bool converged = true;
        for (auto& s : results) {
            for (const auto& root : s.roots) {
                out.roots.push_back(root);
                out.multiplicity_sum += root.multiplicity;
                converged = converged && root.converged;
            }
            out.warnings.insert(out.warnings.end(), s.warnings.begin(), s.warnings.end());
        }
        std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
            if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
            return a.z.imag() < b.z.imag();
        });
        out.complete = converged && out.multiplicity_sum == out.boundary_winding;
        if (out.multiplicity_sum != out.boundary_winding)
            out.warnings.push_back("multiplicity sum differs from boundary winding");
        return out;
    }
    throw ContourHit("could not place strip boundaries away from zeros");
}

}  // namespace qgraph
