#pragma once

// Umbrella header.

#include "dataset.hpp"
#include "error.hpp"
#include "features.hpp"
#include "matrix.hpp"
#include "null_model.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "search.hpp"
#include "stats.hpp"
#include "withinss.hpp"
