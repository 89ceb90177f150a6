#pragma once

#include "pathint/common.hpp"
#include "pathint/convexbv.hpp"
#include "pathint/fracops.hpp"
#include "pathint/glsint.hpp"
#include "pathint/harness.hpp"
#include "pathint/path.hpp"
#include "pathint/processes.hpp"
#include "pathint/rng.hpp"
#include "pathint/variation.hpp"
