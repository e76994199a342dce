#pragma once

// Umbrella header.

#include "classify3.hpp"
#include "constructors.hpp"
#include "diskgeom.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "matrix_io.hpp"
#include "optimize.hpp"
#include "radius.hpp"
#include "rng.hpp"
#include "simplex_qp.hpp"
