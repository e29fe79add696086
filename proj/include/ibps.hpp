#pragma once

/// Umbrella header: the whole library in one include.

#include "ibps/boundary.hpp"
#include "ibps/config.hpp"
#include "ibps/diagnostics.hpp"
#include "ibps/dynamics.hpp"
#include "ibps/fft.hpp"
#include "ibps/field.hpp"
#include "ibps/filtering.hpp"
#include "ibps/geometry.hpp"
#include "ibps/grid.hpp"
#include "ibps/scenarios.hpp"
#include "ibps/simulation.hpp"
#include "ibps/snapshot.hpp"
#include "ibps/spectral_ops.hpp"
#include "ibps/window.hpp"
