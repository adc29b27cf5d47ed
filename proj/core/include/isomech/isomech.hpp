#pragma once

#include "isomech/error.hpp"
#include "isomech/isotonic.hpp"
#include "isomech/majorization.hpp"
#include "isomech/mechanism.hpp"
#include "isomech/noise.hpp"
#include "isomech/simulation.hpp"
#include "isomech/types.hpp"
#include "isomech/utility.hpp"
