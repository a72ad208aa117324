#pragma once

#include "nilgeo/parabolic/matrix_algebra.hpp"
#include "nilgeo/parabolic/parabolic.hpp"
#include "nilgeo/parabolic/roots.hpp"
#include "nilgeo/parabolic/semisimple_catalog.hpp"
#include "nilgeo/parabolic/table.hpp"
