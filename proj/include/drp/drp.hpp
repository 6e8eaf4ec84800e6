#pragma once

#include "drp/error.hpp"
#include "drp/quadrature.hpp"
#include "drp/stencil.hpp"
#include "drp/modeq.hpp"
#include "drp/poly.hpp"
#include "drp/wave.hpp"
#include "drp/solve.hpp"
#include "drp/sim.hpp"
#include "drp/io.hpp"
