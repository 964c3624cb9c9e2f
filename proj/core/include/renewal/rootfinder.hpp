#pragma once

#include <optional>
#include <vector>

#include "renewal/distribution.hpp"

namespace renewal {

// A solution of g(z) = 1. Roots come in conjugate pairs; conjugate_of links
// the two indices within a returned root set.
struct Root {
    Complex location;
    int multiplicity = 1;
    Complex g_prime; // recorded even when multiplicity > 1
    std::optional<std::size_t> conjugate_of;
};

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
};

// Strip (non-lattice) or fundamental-domain (lattice) search description.
// An explicit im_bound is honoured as the exact box half-height; when absent
// the box grows from 32, doubling until the strip count is stable twice, so
// the full strip is covered. Lattice searches are fixed to |Im z| <= pi.
struct SearchRegion {
    double r0 = 1.0;
    bool lattice = false;
    std::optional<double> im_bound;
};

// Argument-principle zero count of g-1 inside rect, computed as the winding
// integral of w'/w for the entire witness w (same zeros, no poles).
// Throws BoundaryZero / QuadratureDivergence.
int count_zeros(const Distribution& model, const Rect& rect);

// All roots of g(z)=1 with Re(z) < r0 (strip or fundamental domain), with
// multiplicities, sorted by Re then |Im|, closed under conjugation.
std::vector<Root> find_roots(const Distribution& model, const SearchRegion& region);

// Unique positive solution of the Lundberg equation, to absolute 1e-12.
double lundberg_root_continuous(const Distribution& claims, double alpha, double premium);
double lundberg_root_discrete(const Distribution& claims);

// Advisory scan of sup |1/(1-g(r+i theta))| over r in [0,r0],
// theta in [0.1, theta_max]; flags growth in theta.
struct GrowthReport {
    bool applicable = true; // false for lattice models
    double sup = 0;
    double slope = 0; // log-log trend of per-band sup against theta
    bool likely_violation = false;
    std::vector<std::pair<double, double>> band_sups; // (theta midpoint, band sup)
};
GrowthReport diagnose_growth(const Distribution& model, double r0, double theta_max);

} // namespace renewal
