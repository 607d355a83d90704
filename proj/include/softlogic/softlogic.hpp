#pragma once

// Umbrella header for the softlogic library.

#include "softlogic/conjunction.hpp"
#include "softlogic/convexity.hpp"
#include "softlogic/errors.hpp"
#include "softlogic/format.hpp"
#include "softlogic/inference.hpp"
#include "softlogic/joint.hpp"
#include "softlogic/random.hpp"
#include "softlogic/rules.hpp"
