#pragma once

// Lenslet plenoptic video toolkit: ray-space motion compensation, a compact
// block codec built around it, synthetic light-field generation, and
// rate-distortion evaluation utilities. Header-only, C++20.

#include "bitio.hpp"       // IWYU pragma: export
#include "codec.hpp"       // IWYU pragma: export
#include "convert.hpp"     // IWYU pragma: export
#include "error.hpp"       // IWYU pragma: export
#include "experiment.hpp"  // IWYU pragma: export
#include "filters.hpp"     // IWYU pragma: export
#include "image.hpp"       // IWYU pragma: export
#include "io.hpp"          // IWYU pragma: export
#include "lightfield.hpp"  // IWYU pragma: export
#include "metrics.hpp"     // IWYU pragma: export
#include "motion.hpp"      // IWYU pragma: export
#include "optics.hpp"      // IWYU pragma: export
#include "predict.hpp"     // IWYU pragma: export
#include "scene.hpp"       // IWYU pragma: export
#include "search.hpp"      // IWYU pragma: export
#include "transform.hpp"   // IWYU pragma: export

namespace raylf {
inline constexpr const char* kVersion = "0.1.0";
}
