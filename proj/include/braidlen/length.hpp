#pragma once

#include <algorithm>
#include <cstdint>

#include "braid.hpp"

namespace braidlen {

/// Length in Artin letters; 64-bit since r * C(N,2) grows fast for large N.
using LengthValue = std::int64_t;

inline LengthValue half_twist_length(int strands) {
    return static_cast<LengthValue>(strands) * (strands - 1) / 2;
}

/// Reduced Garside length: each Delta^{-1} is credited against one of the
/// leading factors instead of being counted in full,
///
///     r C(N,2) + sum_{i > min(r,q)} |p_i| - sum_{i <= min(r,q)} |p_i|.
inline LengthValue rg_length(const GarsideNormalForm& u) {
    const auto r = u.delta_exponent();
    const auto q = static_cast<std::int64_t>(u.factor_count());
    const auto cancelled = std::min(r, q);
    LengthValue total = r * half_twist_length(u.strands());
    for (std::int64_t i = 0; i < q; ++i) {
        const auto len = detail::inversions(u.factor(static_cast<std::size_t>(i)));
        total += i < cancelled ? -len : len;
    }
    return total;
}

/// Baseline: every Delta^{-1} and every factor counted in full.
inline LengthValue naive_garside_length(const GarsideNormalForm& u) {
    LengthValue total = u.delta_exponent() * half_twist_length(u.strands());
    for (std::size_t i = 0; i < u.factor_count(); ++i) total += detail::inversions(u.factor(i));
    return total;
}

} // namespace braidlen
