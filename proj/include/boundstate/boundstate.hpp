#pragma once

#include "boundstate/errors.hpp"
#include "boundstate/special.hpp"
#include "boundstate/jet.hpp"
#include "boundstate/expr.hpp"
#include "boundstate/quadrature.hpp"
#include "boundstate/wavefunction.hpp"
#include "boundstate/observables.hpp"
#include "boundstate/inverse.hpp"
#include "boundstate/eigensolver.hpp"
#include "boundstate/decay.hpp"
