#pragma once

#include "nilgeo/io/commands.hpp"
#include "nilgeo/io/json.hpp"
#include "nilgeo/io/scenario.hpp"
