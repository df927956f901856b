#pragma once

#include "usc/calibrate.hpp"
#include "usc/config.hpp"
#include "usc/core.hpp"
#include "usc/fock.hpp"
#include "usc/groundstate.hpp"
#include "usc/lyapunov.hpp"
#include "usc/parallel.hpp"
#include "usc/quadrature.hpp"
#include "usc/run.hpp"
#include "usc/spectra.hpp"
