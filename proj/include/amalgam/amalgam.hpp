#pragma once

#include "amalgam/errors.hpp"
#include "amalgam/grid.hpp"
#include "amalgam/field.hpp"
#include "amalgam/fft.hpp"
#include "amalgam/transforms.hpp"
#include "amalgam/window.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/time_mesh.hpp"
#include "amalgam/propagator.hpp"
#include "amalgam/picard.hpp"
#include "amalgam/solvers.hpp"
#include "amalgam/oracles.hpp"
#include "amalgam/inflation.hpp"
#include "amalgam/io.hpp"
