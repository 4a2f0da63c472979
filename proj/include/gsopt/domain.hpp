#pragma once

#include <cmath>
#include <limits>

#include "gsopt/vec.hpp"

namespace gsopt {

// Open evaluation region, applied per coordinate for separable objectives.
struct DomainSpec {
    enum class Kind { AllSpace, OpenHalfline, OpenInterval, Punctured };

    Kind kind = Kind::AllSpace;
    double lo = 0.0;        // OpenHalfline: (lo, inf); OpenInterval: (lo, hi)
    double hi = 0.0;
    double excluded = 0.0;  // Punctured: R \ {excluded}

    static DomainSpec all_space() { return DomainSpec{}; }
    static DomainSpec open_halfline(double lo) {
        return DomainSpec{Kind::OpenHalfline, lo, 0.0, 0.0};
    }
    static DomainSpec open_interval(double lo, double hi) {
        return DomainSpec{Kind::OpenInterval, lo, hi, 0.0};
    }
    static DomainSpec punctured(double excluded) {
        return DomainSpec{Kind::Punctured, 0.0, 0.0, excluded};
    }

    bool contains1(double x) const {
        if (!std::isfinite(x)) return false;
        switch (kind) {
        case Kind::AllSpace: return true;
        case Kind::OpenHalfline: return x > lo;
        case Kind::OpenInterval: return x > lo && x < hi;
        case Kind::Punctured: return x != excluded;
        }
        return false;
    }

    // Distance from x to the boundary; for points outside it measures how
    // far past the boundary the point lies.
    double boundary_distance1(double x) const {
        switch (kind) {
        case Kind::AllSpace: return std::numeric_limits<double>::infinity();
        case Kind::OpenHalfline: return std::abs(x - lo);
        case Kind::OpenInterval: return std::min(std::abs(x - lo), std::abs(x - hi));
        case Kind::Punctured: return std::abs(x - excluded);
        }
        return 0.0;
    }

    bool contains(const Vec& x) const {
        for (double xi : x)
            if (!contains1(xi)) return false;
        return true;
    }

    double boundary_distance(const Vec& x) const {
        double d = std::numeric_limits<double>::infinity();
        for (double xi : x) d = std::min(d, boundary_distance1(xi));
        return d;
    }
};

} // namespace gsopt
