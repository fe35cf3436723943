#pragma once

// Umbrella header for the whole library: Laurent-polynomial substrate,
// geometric potentials, superpotential construction, critical-point
// solvers, section reconstruction, normal-bundle splitting analysis and the
// report/sweep pipeline.

#include "laufer/analysis.hpp"
#include "laufer/bundle.hpp"
#include "laufer/critical.hpp"
#include "laufer/io.hpp"
#include "laufer/laurent.hpp"
#include "laufer/matrix.hpp"
#include "laufer/polynomial.hpp"
#include "laufer/potential.hpp"
#include "laufer/scalar.hpp"
#include "laufer/sections.hpp"
#include "laufer/superpotential.hpp"
#include "laufer/sweep.hpp"
