#pragma once

#include "daa/errors.hpp"
#include "daa/long_term.hpp"
#include "daa/montecarlo.hpp"
#include "daa/optimize.hpp"
#include "daa/params.hpp"
#include "daa/paw.hpp"
#include "daa/rng.hpp"
#include "daa/selfish_math.hpp"
#include "daa/short_term.hpp"
#include "daa/stats.hpp"
#include "daa/trajectory.hpp"
