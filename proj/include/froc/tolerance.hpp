#ifndef FROC_TOLERANCE_HPP
#define FROC_TOLERANCE_HPP

#include <cstdlib>

namespace froc {

// All geometric predicates (boundary cuts, hypograph tests, dominance,
// containment) share one tolerance; looser checks that assert on computed
// quantities (cut points on the boundary, mixture recomposition) use
// assert_tol. FROC_TOLERANCE in the environment overrides the predicate
// value for a whole process.
inline double predicate_tol() {
    static const double tol = [] {
        if (const char* env = std::getenv("FROC_TOLERANCE")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && v > 0.0) return v;
        }
        return 1e-12;
    }();
    return tol;
}

inline constexpr double assert_tol = 1e-9;

} // namespace froc

#endif
