#pragma once
// Umbrella header: the whole library.

#include "errors.hpp"     // IWYU pragma: export
#include "image.hpp"      // IWYU pragma: export
#include "fft.hpp"        // IWYU pragma: export
#include "kernel.hpp"     // IWYU pragma: export
#include "grid_operator.hpp"  // IWYU pragma: export
#include "potential.hpp"  // IWYU pragma: export
#include "prox.hpp"       // IWYU pragma: export
#include "model.hpp"      // IWYU pragma: export
#include "admm.hpp"       // IWYU pragma: export
#include "solver.hpp"     // IWYU pragma: export
#include "synthesis.hpp"  // IWYU pragma: export
#include "analysis.hpp"   // IWYU pragma: export
#include "image_io.hpp"   // IWYU pragma: export
