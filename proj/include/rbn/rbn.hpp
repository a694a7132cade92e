#pragma once

// Umbrella header.

#include "rbn/attractor.hpp"
#include "rbn/cluster.hpp"
#include "rbn/distance.hpp"
#include "rbn/experiment.hpp"
#include "rbn/io.hpp"
#include "rbn/network.hpp"
#include "rbn/rng.hpp"
#include "rbn/state.hpp"
#include "rbn/stats.hpp"
