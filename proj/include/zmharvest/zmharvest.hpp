#pragma once

#include "zmharvest/assembly.hpp"
#include "zmharvest/config_io.hpp"
#include "zmharvest/errors.hpp"
#include "zmharvest/faddeeva.hpp"
#include "zmharvest/linalg.hpp"
#include "zmharvest/oscillator.hpp"
#include "zmharvest/quadrature.hpp"
#include "zmharvest/sweep.hpp"
#include "zmharvest/types.hpp"
#include "zmharvest/zero_mode.hpp"
