#pragma once

#include "nilgeo/dynamics/cocycle.hpp"
#include "nilgeo/dynamics/fixed_point.hpp"
#include "nilgeo/dynamics/invisible.hpp"
#include "nilgeo/dynamics/limit_set.hpp"
#include "nilgeo/dynamics/orbit.hpp"
#include "nilgeo/dynamics/parallel.hpp"
#include "nilgeo/dynamics/splitting.hpp"
