#pragma once

#include "constants.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "lab.hpp"
#include "mills.hpp"
#include "params.hpp"
#include "precision.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special.hpp"
#include "stats.hpp"
#include "tail.hpp"
