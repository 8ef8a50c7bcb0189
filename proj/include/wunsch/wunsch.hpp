// umbrella header

#pragma once

#include "wunsch/blowup.hpp"
#include "wunsch/cli.hpp"
#include "wunsch/curvature.hpp"
#include "wunsch/diffeo.hpp"
#include "wunsch/distance.hpp"
#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/geodesic.hpp"
#include "wunsch/inequalities.hpp"
#include "wunsch/io.hpp"
#include "wunsch/jacobi.hpp"
#include "wunsch/metric.hpp"
