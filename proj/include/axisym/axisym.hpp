#pragma once

#include "axisym/errors.hpp"
#include "axisym/field2d.hpp"
#include "axisym/grid.hpp"
#include "axisym/boundary.hpp"
#include "axisym/differences.hpp"
#include "axisym/state.hpp"
#include "axisym/operators.hpp"
#include "axisym/spectral.hpp"
#include "axisym/solvers.hpp"
#include "axisym/integrator.hpp"
#include "axisym/bessel.hpp"
#include "axisym/oracles.hpp"
#include "axisym/monitor.hpp"
#include "axisym/continuation.hpp"
#include "axisym/io.hpp"
#include "axisym/config.hpp"
#include "axisym/runner.hpp"
#include "axisym/verify_suite.hpp"
