#pragma once

/// Umbrella header: uniform random sampling of edge-weight assignments
/// that preserve vertex weight sums (exactly or within intervals), via
/// Markov steps along sparse kernel generators of the constraint matrix.

#include "cycle_basis.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "version.hpp"
