#include "renewal/rootfinder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>

#include "law.hpp"

namespace renewal {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Edge value of int w'/w dz = dlog w by continuous-argument tracking. A step
// is accepted only when (a) the witness rotates < 1.3 rad and its modulus
// moves < e^1.1 between nodes and (b) the step length times the local
// integrand magnitude |w'/w| (= 1/distance to the nearest zero) stays small,
// which drives refinement into the window of any zero hugging the contour.
// The closed-contour winding is then exact up to roundoff.
struct PhaseTracker {
    const Distribution& model;
    std::size_t evals = 0;

    struct Node {
        Complex z, f;
        double rate; // |w'/w|
    };

    Node probe(Complex z) {
        if (++evals > (1u << 16))
            throw QuadratureDivergence("count_zeros: refinement exceeded 2^16 nodes per edge");
        Complex w = model.witness(z);
        double gm1 = std::abs(w) / std::abs(model.law().den(z));
        if (!(gm1 > 1e-8)) throw BoundaryZero("count_zeros: zero of g-1 on the contour");
        double rate = std::abs(model.witness_derivative(z) / w);
        return Node{z, w, rate};
    }

    Complex track(const Node& a, const Node& b, int depth) {
        Complex ratio = b.f / a.f;
        double lmag = std::log(std::abs(ratio));
        double len = std::abs(b.z - a.z);
        bool smooth = std::isfinite(lmag) && std::abs(lmag) < 1.1 &&
                      std::abs(std::arg(ratio)) < 1.3 &&
                      len * std::max(a.rate, b.rate) < 0.8;
        if (smooth) return Complex(lmag, std::arg(ratio));
        if (depth >= 40) // only a zero (numerically) on the contour descends this far
            throw BoundaryZero("count_zeros: zero of g-1 on the contour");
        Node mid = probe(0.5 * (a.z + b.z));
        return track(a, mid, depth + 1) + track(mid, b, depth + 1);
    }

    Complex edge(Complex a, Complex b) {
        evals = 0; // the refinement budget is per edge
        const int pre = 16;
        Complex acc = 0.0;
        Node prev = probe(a);
        for (int i = 1; i <= pre; ++i) {
            Node next = probe(a + (b - a) * (double(i) / pre));
            acc += track(prev, next, 0);
            prev = next;
        }
        return acc;
    }
};

int winding_count(const Distribution& model, const Rect& rect) {
    Complex c1(rect.re_lo, rect.im_lo), c2(rect.re_hi, rect.im_lo);
    Complex c3(rect.re_hi, rect.im_hi), c4(rect.re_lo, rect.im_hi);
    PhaseTracker tracker{model};
    Complex total = tracker.edge(c1, c2) + tracker.edge(c2, c3) + tracker.edge(c3, c4) +
                    tracker.edge(c4, c1);
    double v = total.imag() / kTwoPi;
    double nearest = std::round(v);
    if (std::abs(v - nearest) > 1e-3 || std::abs(total.real()) > 1e-3)
        throw QuadratureDivergence("count_zeros: tracked winding not near an integer");
    if (nearest < -0.5) throw Error("count_zeros: negative winding (pole inside contour?)");
    return static_cast<int>(nearest);
}

// Newton on the witness; multiplicity-aware step m*w/w'.
std::optional<Complex> newton_refine(const Distribution& model, Complex z0, int multiplicity,
                                     double far) {
    Complex z = z0;
    for (int it = 0; it < 100; ++it) {
        Complex w = model.witness(z);
        Complex dw = model.witness_derivative(z);
        if (std::abs(dw) == 0.0) return std::nullopt;
        Complex step = double(multiplicity) * w / dw;
        z -= step;
        if (std::abs(z - z0) > far) return std::nullopt;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) return z;
    }
    return std::nullopt;
}

Rect box_around(Complex z, double half) {
    return Rect{z.real() - half, z.real() + half, z.imag() - half, z.imag() + half};
}

int robust_count(const Distribution& model, Rect rect) {
    // Shift edges slightly when a zero sits on the contour; <= 5 nudges.
    double eps = 1e-6 * std::max({1.0, std::abs(rect.re_hi), std::abs(rect.im_hi)});
    for (int k = 0; k < 5; ++k) {
        try {
            return winding_count(model, rect);
        } catch (const BoundaryZero&) {
            rect.re_lo -= eps;
            rect.re_hi += eps;
            rect.im_lo -= eps;
            rect.im_hi += eps;
        }
    }
    return winding_count(model, rect); // final attempt; throws through
}

} // namespace

int count_zeros(const Distribution& model, const Rect& rect) {
    return winding_count(model, rect);
}

namespace {

struct Pending {
    Rect rect;
    int count;
};

void subdivide(const Distribution& model, const Rect& rect, int count,
               std::deque<Pending>& queue) {
    const bool debug = std::getenv("RENEWAL_DEBUG_ROOTS") != nullptr;
    const bool split_re = (rect.re_hi - rect.re_lo) >= (rect.im_hi - rect.im_lo);
    const double fracs[] = {0.5, 0.53, 0.47, 0.57, 0.43, 0.61, 0.39, 0.65, 0.35};
    for (double t : fracs) {
        Rect lo = rect, hi = rect;
        if (split_re) {
            double cut = rect.re_lo + t * (rect.re_hi - rect.re_lo);
            lo.re_hi = cut;
            hi.re_lo = cut;
        } else {
            double cut = rect.im_lo + t * (rect.im_hi - rect.im_lo);
            lo.im_hi = cut;
            hi.im_lo = cut;
        }
        try {
            int c_lo = winding_count(model, lo);
            int c_hi = winding_count(model, hi);
            if (c_lo + c_hi != count) {
                if (debug)
                    std::fprintf(stderr,
                                 "subdivide mismatch: rect [%g,%g]x[%g,%g] count=%d t=%g -> %d+%d\n",
                                 rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi, count, t, c_lo,
                                 c_hi);
                continue; // a zero slipped onto the cut
            }
            if (c_lo > 0) queue.push_back({lo, c_lo});
            if (c_hi > 0) queue.push_back({hi, c_hi});
            return;
        } catch (const BoundaryZero& e) {
            if (debug)
                std::fprintf(stderr, "subdivide boundary: rect [%g,%g]x[%g,%g] t=%g: %s\n",
                             rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi, t, e.what());
            continue;
        }
    }
    throw BoundaryZero("find_roots: could not split a rectangle off a root");
}

bool inside(const Rect& rect, Complex z, double tol) {
    return z.real() >= rect.re_lo - tol && z.real() <= rect.re_hi + tol &&
           z.imag() >= rect.im_lo - tol && z.imag() <= rect.im_hi + tol;
}

std::vector<std::pair<Complex, int>> isolate_zeros(const Distribution& model, Rect start,
                                                   int total) {
    std::vector<std::pair<Complex, int>> found;
    std::deque<Pending> queue;
    if (total > 0) queue.push_back({start, total});
    while (!queue.empty()) {
        auto [rect, count] = queue.front();
        queue.pop_front();
        double diam = std::hypot(rect.re_hi - rect.re_lo, rect.im_hi - rect.im_lo);
        Complex centre(0.5 * (rect.re_lo + rect.re_hi), 0.5 * (rect.im_lo + rect.im_hi));

        if (count == 1 || diam < 1e-9) {
            // Newton from the centre and corners; a limit only counts when it
            // stays inside this box (escapes mean the box is still too coarse)
            std::vector<Complex> seeds{centre,
                                       Complex(rect.re_lo, rect.im_lo),
                                       Complex(rect.re_hi, rect.im_hi),
                                       Complex(rect.re_lo, rect.im_hi),
                                       Complex(rect.re_hi, rect.im_lo)};
            const double tol = std::max(1e-9, 0.02 * diam) + 1e-12 * std::abs(centre);
            std::vector<Complex> limits;
            for (Complex s : seeds) {
                auto z = newton_refine(model, s, count, 10.0 * (diam + 1.0));
                if (z && inside(rect, *z, tol)) limits.push_back(*z);
            }
            if (limits.empty()) {
                if (diam < 1e-9)
                    throw MultiplicityUnresolved("find_roots: Newton failed to converge in a box");
                subdivide(model, rect, count, queue);
                continue;
            }
            bool coincide = true;
            for (const Complex& l : limits)
                if (std::abs(l - limits.front()) > 1e-8) coincide = false;
            if (count == 1) {
                if (!coincide) {
                    subdivide(model, rect, count, queue);
                    continue;
                }
                Complex z = limits.front();
                auto z1 = newton_refine(model, z, 1, 1.0);
                if (z1 && inside(rect, *z1, tol)) z = *z1;
                found.emplace_back(z, 1);
            } else {
                if (!coincide)
                    throw MultiplicityUnresolved(
                        "find_roots: cluster in a tiny box with distinct Newton limits");
                Complex z = limits.front();
                int m = robust_count(model, box_around(z, std::max(1e-7, 4 * diam)));
                if (m < 1) m = count;
                found.emplace_back(z, m);
            }
            continue;
        }
        try {
            subdivide(model, rect, count, queue);
        } catch (const BoundaryZero&) {
            // a multiple root keeps |g-1| below the boundary threshold on every
            // nearby cut long before boxes reach 1e-9; accept the cluster when
            // multiplicity-aware Newton lands on a point carrying the full count
            if (count < 2 || diam > 0.05 * (1.0 + std::abs(centre))) throw;
            auto z = newton_refine(model, centre, count, 10.0 * (diam + 1.0));
            if (!z || !inside(rect, *z, 0.1 * diam))
                throw MultiplicityUnresolved(
                    "find_roots: unsplittable cluster and Newton found no centre");
            double r_verify = 1e-3 * (1.0 + std::abs(*z));
            int m = robust_count(model, box_around(*z, r_verify));
            if (m != count)
                throw MultiplicityUnresolved(
                    "find_roots: cluster count does not match a single multiple root");
            found.emplace_back(*z, m);
        }
    }
    return found;
}

} // namespace

std::vector<Root> find_roots(const Distribution& model, const SearchRegion& region) {
    if (region.r0 <= 0) throw Error("find_roots: r0 must be > 0");
    const double margin = 0.05; // keeps z_0 = 0 well inside the contour
    double r0 = region.r0;

    Rect box;
    if (region.lattice) {
        if (!model.lattice()) throw Error("find_roots: lattice region given a non-lattice model");
        box = Rect{-margin, r0, -margin, M_PI + margin};
    } else {
        if (model.lattice()) throw Error("find_roots: non-lattice region given a lattice model");
        double m = region.im_bound.value_or(32.0);
        Rect trial{-margin, r0, -margin, m};
        if (region.im_bound) {
            // an explicit im_bound is the requested search box; the strip may
            // hold further roots above it (the defaulted path grows instead)
        } else {
            // grow until the count is stable twice in a row; a strip whose
            // count climbs past the 4096 ceiling holds (for every family here)
            // an infinite vertical lattice of roots, e.g. the truncated
            // exponential above its rate with roots at lambda + 2 pi i k / d
            int stable = 0;
            int prev = robust_count(model, trial);
            while (stable < 2) {
                Rect next = trial;
                next.im_hi *= 2;
                if (next.im_hi > 4096.0)
                    throw Error(
                        "find_roots: strip count did not stabilise by im_bound 4096; the strip "
                        "likely holds infinitely many roots (lower r0 or pass an explicit "
                        "im_bound)");
                int c = robust_count(model, next);
                stable = (c == prev) ? stable + 1 : 0;
                prev = c;
                trial = next;
            }
        }
        box = trial;
    }

    // no root may sit on Re(z) = r0; nudge by +1e-6 up to 5 times
    int total = -1;
    for (int k = 0; k <= 5; ++k) {
        try {
            total = winding_count(model, box);
            break;
        } catch (const BoundaryZero&) {
            if (k == 5) throw;
            box.re_hi += 1e-6;
        }
    }

    auto raw = isolate_zeros(model, box, total);

    // canonicalise: snap hairline imaginary parts, map lattice roots into the
    // fundamental domain, drop lower-half margin duplicates, deduplicate
    std::vector<std::pair<Complex, int>> canon;
    for (auto [z, m] : raw) {
        if (region.lattice && z.imag() > M_PI + 1e-9) z -= Complex(0.0, kTwoPi);
        if (std::abs(z.imag()) < 1e-9) z = Complex(z.real(), 0.0);
        if (std::abs(z) < 1e-10) z = 0.0;
        if (z.imag() < 0.0) continue; // conjugate of an upper-half root in the box
        bool merged = false;
        for (auto& [zc, mc] : canon) {
            if (std::abs(zc - z) < 1e-9) {
                mc = std::max(mc, m);
                merged = true;
                break;
            }
        }
        if (!merged) canon.emplace_back(z, m);
    }

    std::vector<Root> roots;
    for (auto [z, m] : canon) {
        bool self_conjugate =
            z.imag() == 0.0 || (region.lattice && std::abs(z.imag() - M_PI) < 1e-9);
        Root r{z, m, model.mgf_derivative(z, 1), std::nullopt};
        if (self_conjugate) {
            roots.push_back(r);
        } else {
            Root rbar{std::conj(z), m, std::conj(r.g_prime), std::nullopt};
            roots.push_back(r);
            roots.push_back(rbar);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        double ia = std::abs(a.location.imag()), ib = std::abs(b.location.imag());
        if (ia != ib) return ia < ib;
        return a.location.imag() > b.location.imag();
    });
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].location.imag() == 0.0) continue;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j != i && std::abs(roots[j].location - std::conj(roots[i].location)) < 1e-12) {
                roots[i].conjugate_of = j;
                break;
            }
        }
    }
    return roots;
}

namespace {

// Increasing real LHS of the Lundberg equation and its derivative.
struct LundbergFn {
    virtual ~LundbergFn() = default;
    virtual double value(double kappa) const = 0;
    virtual double slope(double kappa) const = 0;
};

double solve_lundberg(const LundbergFn& fn, double radius) {
    auto value = [&](double x) {
        try {
            return fn.value(x);
        } catch (const PoleEvaluation&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    double lo = 1e-8;
    double hi = (radius < 2.0) ? 0.5 * radius : 1.0;
    double flo = value(lo);
    if (flo >= 1.0) lo = 1e-14;
    for (int k = 0;; ++k) {
        if (k > 2000) throw NoFiniteRoot("lundberg_root: no bracket found");
        double fhi = value(hi);
        if (std::isfinite(fhi) && fhi < 1.0) {
            lo = hi;
            hi = (radius < 1e300) ? 0.5 * (hi + radius) : 2.0 * hi;
            if (hi > 700.0) throw NoFiniteRoot("lundberg_root: abscissa beyond overflow guard (700)");
            if (radius < 1e300 && radius - lo < 1e-15)
                throw NoFiniteRoot("lundberg_root: root pinned against the mgf radius");
        } else {
            break; // fn(hi) >= 1 (or overflow): bracket is [lo, hi]
        }
    }
    // safeguarded Newton
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = value(x);
        if (std::isfinite(f)) {
            if (f > 1.0)
                hi = x;
            else
                lo = x;
        } else {
            hi = x;
        }
        double step;
        double d = std::isfinite(f) ? fn.slope(x) : std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(f) && std::isfinite(d) && d > 0) {
            step = (f - 1.0) / d;
            double xn = x - step;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            step = x - xn;
            x = xn;
        } else {
            double xn = 0.5 * (lo + hi);
            step = x - xn;
            x = xn;
        }
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x)) ||
            hi - lo < 1e-15 * std::max(1.0, lo))
            return x;
    }
    return x;
}

} // namespace

double lundberg_root_continuous(const Distribution& claims, double alpha, double premium) {
    if (claims.lattice()) throw Error("lundberg_root_continuous: claims must be continuous");
    double m = claims.raw_moment(1);
    if (premium - alpha * m <= 0)
        throw NegativeLoading("lundberg_root_continuous: needs premium > alpha * mean claim");
    double beta = alpha / premium;

    struct Fn final : LundbergFn {
        const Distribution* claims;
        double beta;
        double value(double k) const override {
            double num = claims->mgf(Complex(k, 0)).real() - 1.0;
            return beta * num / k;
        }
        double slope(double k) const override {
            double m1 = claims->mgf_derivative(Complex(k, 0), 1).real();
            double num = claims->mgf(Complex(k, 0)).real() - 1.0;
            return beta * (m1 * k - num) / (k * k);
        }
    } fn;
    fn.claims = &claims;
    fn.beta = beta;
    return solve_lundberg(fn, claims.moments().mgf_radius);
}

double lundberg_root_discrete(const Distribution& claims) {
    if (!claims.lattice()) throw Error("lundberg_root_discrete: claims must be lattice");
    double m = claims.raw_moment(1);
    if (m >= 1.0)
        throw NegativeLoading("lundberg_root_discrete: needs E[Z] < 1");
    if (m <= 0.0) throw NoFiniteRoot("lundberg_root_discrete: Z is identically 0");

    struct Fn final : LundbergFn {
        const Distribution* claims;
        double value(double k) const override {
            double mz = claims->mgf(Complex(k, 0)).real();
            return (1.0 - mz) / (1.0 - std::exp(k));
        }
        double slope(double k) const override {
            double mz = claims->mgf(Complex(k, 0)).real();
            double mzp = claims->mgf_derivative(Complex(k, 0), 1).real();
            double e = std::exp(k);
            return (-mzp * (1.0 - e) + (1.0 - mz) * e) / ((1.0 - e) * (1.0 - e));
        }
    } fn;
    fn.claims = &claims;
    return solve_lundberg(fn, claims.moments().mgf_radius);
}

GrowthReport diagnose_growth(const Distribution& model, double r0, double theta_max) {
    GrowthReport rep;
    if (model.lattice()) {
        rep.applicable = false;
        return rep;
    }
    const int nr = 64, nt = 256, bands = 8;
    const double theta_probe = 0.1;
    std::vector<double> band_sup(bands, 0.0), band_mid(bands, 0.0);
    for (int b = 0; b < bands; ++b) {
        double t0 = theta_probe + (theta_max - theta_probe) * b / bands;
        double t1 = theta_probe + (theta_max - theta_probe) * (b + 1) / bands;
        band_mid[b] = 0.5 * (t0 + t1);
        for (int j = 0; j < nt / bands; ++j) {
            double theta = t0 + (t1 - t0) * j / (nt / bands);
            for (int i = 0; i < nr; ++i) {
                double r = r0 * i / (nr - 1);
                double v = std::exp(-model.law().log_abs_one_minus_g(Complex(r, theta)));
                if (std::isfinite(v)) {
                    band_sup[b] = std::max(band_sup[b], v);
                    rep.sup = std::max(rep.sup, v);
                }
            }
        }
        rep.band_sups.emplace_back(band_mid[b], band_sup[b]);
    }
    // log-log least squares of band sup against theta
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int b = 0; b < bands; ++b) {
        if (band_sup[b] <= 0) continue;
        double lx = std::log(band_mid[b]), ly = std::log(band_sup[b]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    rep.slope = (n >= 2) ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    rep.likely_violation = rep.slope > 0.05 && band_sup[bands - 1] > band_sup[0];
    return rep;
}

} // namespace renewal
