#pragma once

#include "constants.hpp"
#include "errors.hpp"
#include "ode.hpp"
#include "hill.hpp"
#include "geometry.hpp"
#include "discriminant.hpp"
#include "spectrum.hpp"
#include "eigenfun.hpp"
#include "oracle.hpp"
#include "io.hpp"
