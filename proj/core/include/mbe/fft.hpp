#pragma once

#include "mbe/field.hpp"

namespace mbe {

/// Unnormalized real-to-complex transform.
Spectrum forward(const Field& f);
/// Inverse of forward (includes the 1/N^d factor).
Field inverse(const Spectrum& s);

}  // namespace mbe
