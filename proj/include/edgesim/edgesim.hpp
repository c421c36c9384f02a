#pragma once

#include "edgesim/config.hpp"
#include "edgesim/dissemination.hpp"
#include "edgesim/engine.hpp"
#include "edgesim/metrics.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/placement.hpp"
#include "edgesim/report.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/spatial_index.hpp"
#include "edgesim/sweep.hpp"
#include "edgesim/types.hpp"
