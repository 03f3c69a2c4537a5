#pragma once

#include "gan/random.hpp"
#include "gan/characteristic.hpp"
#include "gan/core.hpp"
#include "gan/dynamics.hpp"
#include "gan/learning.hpp"
#include "gan/capacity.hpp"
#include "gan/multistate.hpp"
#include "gan/experiments.hpp"
#include "gan/io.hpp"
